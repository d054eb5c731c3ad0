#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abd/common.hpp"
#include "abd/syntax.hpp"
#include "abd/typecore.hpp"

namespace abd {

// Completion-graph saturation for EL-bot: derives concept memberships for
// the individuals and one witness vertex per existential filler, with bot
// propagated backwards along edges. Sound and complete for instance and
// consistency checking in EL-bot.
class ElSaturation {
 public:
  // goals are registered so their concepts and individuals can be queried
  // afterwards; kb and goals must be within EL-bot.
  ElSaturation(const KnowledgeBase& kb, const std::vector<Axiom>& goals,
               Ctx& ctx);

  bool consistent() const { return consistent_; }
  // Concept goal: membership (or inconsistency). Role goal: syntactic
  // occurrence in the kb (or inconsistency); EL-bot cannot entail fresh
  // role atoms.
  bool holds(const Axiom& goal) const;
  const Bits* derived(const std::string& individual) const;
  ClosurePtr working_closure() const { return cl_; }

 private:
  std::size_t node_of_individual(const std::string& name);
  std::size_t vertex_of_concept(std::size_t concept_idx);
  void add_fact(std::size_t node, std::size_t concept_idx);
  void add_edge(std::size_t from, std::size_t role_id, std::size_t to);
  void enqueue(std::size_t node);
  void scan(std::size_t node);
  void run();

  KnowledgeBase kb_;  // desugared
  ClosurePtr cl_;
  Ctx* ctx_;

  std::map<std::string, std::size_t> ind_index_;
  std::vector<int> vertex_of_;  // concept idx -> node or -1
  std::vector<Bits> S_;
  std::vector<std::set<std::pair<std::size_t, std::size_t>>> fwd_, rev_;
  std::map<std::string, std::size_t> role_ids_;
  std::vector<std::pair<std::size_t, std::size_t>> cis_;
  std::vector<std::size_t> and_entries_;
  std::vector<std::size_t> exists_entries_;
  std::deque<std::size_t> queue_;
  std::vector<char> queued_;
  std::optional<std::size_t> bot_idx_;
  bool consistent_ = true;
};

bool el_consistent(const KnowledgeBase& kb);
bool el_entails(const KnowledgeBase& kb, const Axiom& goal);

// Backtracking search for a type assignment compatible with the kb's ABox:
// every asserted concept is in the individual's type and every role
// assertion lands in succ_candidates. Present iff kb is consistent.
std::optional<TypeAssignment> alc_consistent(const KnowledgeBase& kb,
                                             const TypeSet& T, Ctx& ctx);

// Concept goal C(a): entailed iff no compatible assignment avoids C at a.
// Role goals are syntactic, matching the EL-bot engine's assumption.
bool alc_entails(const KnowledgeBase& kb, const Axiom& goal, const TypeSet& T,
                 Ctx& ctx);

struct VerificationReport {
  bool a1_consistent = false;
  bool a2_entails = false;
  bool a3_in_signature = false;
  std::vector<Axiom> a2_missing;
  // individual -> type as concept texts, when the type engine produced one
  std::optional<std::map<std::string, std::vector<std::string>>> a1_witness;
  std::set<std::string> a3_offenders;
  std::optional<bool> size_within_bound;

  bool passed() const {
    return a1_consistent && a2_entails && a3_in_signature &&
           size_within_bound.value_or(true);
  }
};

std::string to_json(const VerificationReport& r);

// Evaluates A1 (consistency of K union H), A2 (every observation assertion
// entailed) and A3 (sig(H) within Sigma) with the dialect-appropriate
// engine, plus the size bound when the problem carries one.
VerificationReport check_hypothesis(const AbductionProblem& problem,
                                    const KnowledgeBase& h, Ctx& ctx);

}  // namespace abd
