#include "abd/syntax.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace abd {

namespace {

ConceptPtr make(Concept c) { return std::make_shared<const Concept>(std::move(c)); }

int cmp_u64(std::uint64_t a, std::uint64_t b) { return a < b ? -1 : a > b ? 1 : 0; }

int cmp_str(const std::string& a, const std::string& b) {
  int c = a.compare(b);
  return c < 0 ? -1 : c > 0 ? 1 : 0;
}

int cmp_role(const Role& a, const Role& b) {
  if (int c = cmp_str(a.name, b.name)) return c;
  return (int)a.inverted - (int)b.inverted;
}

}  // namespace

ConceptPtr top() {
  static const ConceptPtr t = make({.kind = CKind::Top});
  return t;
}

ConceptPtr bot() {
  static const ConceptPtr b = make({.kind = CKind::Bot});
  return b;
}

ConceptPtr atom(std::string name) {
  return make({.kind = CKind::Atom, .name = std::move(name)});
}

ConceptPtr negation(ConceptPtr c) {
  return make({.kind = CKind::Not, .args = {std::move(c)}});
}

ConceptPtr exists(Role r, ConceptPtr c) {
  return make({.kind = CKind::Exists, .role = std::move(r), .args = {std::move(c)}});
}

ConceptPtr forall(Role r, ConceptPtr c) {
  return make({.kind = CKind::Forall, .role = std::move(r), .args = {std::move(c)}});
}

ConceptPtr conj(std::vector<ConceptPtr> args) {
  if (args.empty()) return top();
  if (args.size() == 1) return args[0];
  return make({.kind = CKind::And, .args = std::move(args)});
}

ConceptPtr disj(std::vector<ConceptPtr> args) {
  if (args.empty()) return bot();
  if (args.size() == 1) return args[0];
  return make({.kind = CKind::Or, .args = std::move(args)});
}

ConceptPtr at_most(std::uint64_t n, Role r, ConceptPtr c) {
  return make({.kind = CKind::AtMost,
               .role = std::move(r),
               .args = {std::move(c)},
               .number = n});
}

unsigned bit_length(std::uint64_t n) {
  return n == 0 ? 1u : (unsigned)std::bit_width(n);
}

std::uint64_t size_of(const ConceptPtr& c) {
  switch (c->kind) {
    case CKind::Top:
    case CKind::Bot:
    case CKind::Atom:
      return 1;
    case CKind::Not:
      return 1 + size_of(c->args[0]);
    case CKind::Exists:
    case CKind::Forall:
      return (c->role.inverted ? 2 : 1) + 1 + size_of(c->args[0]);
    case CKind::And:
    case CKind::Or: {
      std::uint64_t s = c->args.size() - 1;
      for (const auto& a : c->args) s += size_of(a);
      return s;
    }
    case CKind::AtMost:
      return bit_length(c->number) + (c->role.inverted ? 2 : 1) + 1 +
             size_of(c->args[0]);
  }
  return 1;
}

std::uint64_t size_of(const Axiom& ax) {
  struct V {
    std::uint64_t operator()(const CI& ci) const {
      return size_of(ci.lhs) + size_of(ci.rhs) + 1;
    }
    std::uint64_t operator()(const ConceptAssertion& a) const {
      return size_of(a.c) + 1;
    }
    std::uint64_t operator()(const RoleAssertion&) const { return 3; }
  };
  return std::visit(V{}, ax);
}

std::uint64_t size_of(const KnowledgeBase& kb) {
  std::uint64_t s = 0;
  for (const auto& ax : kb.axioms) s += size_of(ax);
  return s;
}

int compare(const ConceptPtr& a, const ConceptPtr& b) {
  if (a.get() == b.get()) return 0;
  if (int c = cmp_u64(size_of(a), size_of(b))) return c;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case CKind::Top:
    case CKind::Bot:
      return 0;
    case CKind::Atom:
      return cmp_str(a->name, b->name);
    case CKind::Not:
      return compare(a->args[0], b->args[0]);
    case CKind::Exists:
    case CKind::Forall:
      if (int c = cmp_role(a->role, b->role)) return c;
      return compare(a->args[0], b->args[0]);
    case CKind::AtMost:
      if (int c = cmp_u64(a->number, b->number)) return c;
      if (int c = cmp_role(a->role, b->role)) return c;
      return compare(a->args[0], b->args[0]);
    case CKind::And:
    case CKind::Or: {
      if (a->args.size() != b->args.size())
        return a->args.size() < b->args.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (int c = compare(a->args[i], b->args[i])) return c;
      return 0;
    }
  }
  return 0;
}

bool equal(const ConceptPtr& a, const ConceptPtr& b) { return compare(a, b) == 0; }

int compare(const Axiom& a, const Axiom& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  if (const auto* ca = std::get_if<CI>(&a)) {
    const auto& cb = std::get<CI>(b);
    if (int c = compare(ca->lhs, cb.lhs)) return c;
    return compare(ca->rhs, cb.rhs);
  }
  if (const auto* ca = std::get_if<ConceptAssertion>(&a)) {
    const auto& cb = std::get<ConceptAssertion>(b);
    if (int c = cmp_str(ca->individual, cb.individual)) return c;
    return compare(ca->c, cb.c);
  }
  const auto& ra = std::get<RoleAssertion>(a);
  const auto& rb = std::get<RoleAssertion>(b);
  if (int c = cmp_str(ra.role, rb.role)) return c;
  if (int c = cmp_str(ra.from, rb.from)) return c;
  return cmp_str(ra.to, rb.to);
}

bool equal(const Axiom& a, const Axiom& b) { return compare(a, b) == 0; }

bool KnowledgeBase::is_abox() const {
  return std::none_of(axioms.begin(), axioms.end(),
                      [](const Axiom& ax) { return std::holds_alternative<CI>(ax); });
}

bool KnowledgeBase::contains(const Axiom& ax) const {
  return std::any_of(axioms.begin(), axioms.end(),
                     [&](const Axiom& other) { return equal(ax, other); });
}

KnowledgeBase merged(const KnowledgeBase& a, const KnowledgeBase& b) {
  KnowledgeBase out = a;
  out.axioms.insert(out.axioms.end(), b.axioms.begin(), b.axioms.end());
  return out;
}

std::string to_string(Dialect d) {
  switch (d) {
    case Dialect::EL: return "EL";
    case Dialect::ELbot: return "ELbot";
    case Dialect::ALC: return "ALC";
    case Dialect::ALCI: return "ALCI";
  }
  return "EL";
}

std::optional<Dialect> dialect_from_string(const std::string& s) {
  if (s == "EL" || s == "el") return Dialect::EL;
  if (s == "ELbot" || s == "elbot" || s == "EL-bot") return Dialect::ELbot;
  if (s == "ALC" || s == "alc") return Dialect::ALC;
  if (s == "ALCI" || s == "alci") return Dialect::ALCI;
  return std::nullopt;
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Flat: return "flat";
    case Mode::Complex: return "complex";
    case Mode::ComplexNoFresh: return "complex-no-fresh";
  }
  return "flat";
}

std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "flat") return Mode::Flat;
  if (s == "complex") return Mode::Complex;
  if (s == "complex-no-fresh") return Mode::ComplexNoFresh;
  return std::nullopt;
}

namespace {

struct DialectFlags {
  bool needs_bot = false;
  bool needs_alc = false;
  bool needs_inv = false;

  void scan(const ConceptPtr& c) {
    switch (c->kind) {
      case CKind::Top:
        break;
      case CKind::Bot:
        needs_bot = true;
        break;
      case CKind::Atom:
        break;
      case CKind::Not:
      case CKind::Or:
        needs_alc = true;
        break;
      case CKind::Forall:
        needs_alc = true;
        needs_inv |= c->role.inverted;
        break;
      case CKind::Exists:
        needs_inv |= c->role.inverted;
        break;
      case CKind::AtMost:
        throw input_error("at-most restrictions (ALCQ) are not supported");
    }
    for (const auto& a : c->args) scan(a);
  }

  void scan(const KnowledgeBase& kb) {
    for (const auto& ax : kb.axioms) {
      if (const auto* ci = std::get_if<CI>(&ax)) {
        scan(ci->lhs);
        scan(ci->rhs);
      } else if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
        scan(ca->c);
      }
    }
  }
};

}  // namespace

Dialect detect_dialect(const KnowledgeBase& kb, const KnowledgeBase& obs) {
  DialectFlags f;
  f.scan(kb);
  f.scan(obs);
  if (f.needs_inv) return Dialect::ALCI;
  if (f.needs_alc) return Dialect::ALC;
  if (f.needs_bot) return Dialect::ELbot;
  return Dialect::EL;
}

namespace {

void collect_signature(const ConceptPtr& c, Signature& sig) {
  switch (c->kind) {
    case CKind::Atom:
      sig.concepts.insert(c->name);
      break;
    case CKind::Exists:
    case CKind::Forall:
    case CKind::AtMost:
      sig.roles.insert(c->role.name);
      break;
    default:
      break;
  }
  for (const auto& a : c->args) collect_signature(a, sig);
}

}  // namespace

Signature signature_of(const ConceptPtr& c) {
  Signature sig;
  collect_signature(c, sig);
  return sig;
}

Signature signature_of(const Axiom& ax) {
  Signature sig;
  if (const auto* ci = std::get_if<CI>(&ax)) {
    collect_signature(ci->lhs, sig);
    collect_signature(ci->rhs, sig);
  } else if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
    collect_signature(ca->c, sig);
  } else {
    sig.roles.insert(std::get<RoleAssertion>(ax).role);
  }
  return sig;
}

Signature signature_of(const KnowledgeBase& kb) {
  Signature sig;
  for (const auto& ax : kb.axioms) {
    Signature s = signature_of(ax);
    sig.concepts.insert(s.concepts.begin(), s.concepts.end());
    sig.roles.insert(s.roles.begin(), s.roles.end());
  }
  return sig;
}

std::set<std::string> individuals_of(const KnowledgeBase& kb) {
  std::set<std::string> out;
  for (const auto& ax : kb.axioms) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      out.insert(ca->individual);
    } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      out.insert(ra->from);
      out.insert(ra->to);
    }
  }
  return out;
}

namespace {

void collect_subconcepts(const ConceptPtr& c, ConceptSet& out) {
  if (!out.insert(c).second) return;  // shared sub-DAGs walked once
  for (const auto& a : c->args) collect_subconcepts(a, out);
}

}  // namespace

ConceptSet subconcepts_of(const ConceptPtr& c) {
  ConceptSet out;
  collect_subconcepts(c, out);
  return out;
}

ConceptSet subconcepts_of(const Axiom& ax) {
  ConceptSet out;
  if (const auto* ci = std::get_if<CI>(&ax)) {
    collect_subconcepts(ci->lhs, out);
    collect_subconcepts(ci->rhs, out);
  } else if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
    collect_subconcepts(ca->c, out);
  }
  return out;
}

ConceptSet subconcepts_of(const KnowledgeBase& kb) {
  ConceptSet out;
  for (const auto& ax : kb.axioms) {
    if (const auto* ci = std::get_if<CI>(&ax)) {
      collect_subconcepts(ci->lhs, out);
      collect_subconcepts(ci->rhs, out);
    } else if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      collect_subconcepts(ca->c, out);
    }
  }
  return out;
}

namespace {

ConceptPtr negate_collapsed(ConceptPtr c) {
  if (c->kind == CKind::Not) return c->args[0];
  return negation(std::move(c));
}

// Memoized on node identity so shared sub-DAGs stay shared.
ConceptPtr desugar_rec(const ConceptPtr& c,
                       std::unordered_map<const Concept*, ConceptPtr>& memo) {
  auto it = memo.find(c.get());
  if (it != memo.end()) return it->second;
  ConceptPtr out;
  switch (c->kind) {
    case CKind::Top:
    case CKind::Bot:
    case CKind::Atom:
      out = c;
      break;
    case CKind::Not:
      out = negate_collapsed(desugar_rec(c->args[0], memo));
      break;
    case CKind::Exists:
      out = exists(c->role, desugar_rec(c->args[0], memo));
      break;
    case CKind::Forall:
      out = negate_collapsed(
          exists(c->role, negate_collapsed(desugar_rec(c->args[0], memo))));
      break;
    case CKind::And: {
      std::vector<ConceptPtr> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) args.push_back(desugar_rec(a, memo));
      out = conj(std::move(args));
      break;
    }
    case CKind::Or: {
      std::vector<ConceptPtr> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args)
        args.push_back(negate_collapsed(desugar_rec(a, memo)));
      out = negate_collapsed(conj(std::move(args)));
      break;
    }
    case CKind::AtMost:
      throw input_error("at-most restrictions (ALCQ) are not supported");
  }
  memo.emplace(c.get(), out);
  return out;
}

}  // namespace

ConceptPtr desugar(const ConceptPtr& c) {
  std::unordered_map<const Concept*, ConceptPtr> memo;
  return desugar_rec(c, memo);
}

Axiom desugar(const Axiom& ax) {
  if (const auto* ci = std::get_if<CI>(&ax))
    return CI{desugar(ci->lhs), desugar(ci->rhs)};
  if (const auto* ca = std::get_if<ConceptAssertion>(&ax))
    return ConceptAssertion{ca->individual, desugar(ca->c)};
  return ax;
}

KnowledgeBase desugar(const KnowledgeBase& kb) {
  KnowledgeBase out;
  out.axioms.reserve(kb.axioms.size());
  std::unordered_map<const Concept*, ConceptPtr> memo;
  for (const auto& ax : kb.axioms) {
    if (const auto* ci = std::get_if<CI>(&ax)) {
      out.add(CI{desugar_rec(ci->lhs, memo), desugar_rec(ci->rhs, memo)});
    } else if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      out.add(ConceptAssertion{ca->individual, desugar_rec(ca->c, memo)});
    } else {
      out.add(ax);
    }
  }
  return out;
}

std::string to_text(const Role& r) {
  return r.inverted ? "(inv " + r.name + ")" : r.name;
}

std::string to_text(const ConceptPtr& c) {
  switch (c->kind) {
    case CKind::Top:
      return "top";
    case CKind::Bot:
      return "bot";
    case CKind::Atom:
      return c->name;
    case CKind::Not:
      return "(not " + to_text(c->args[0]) + ")";
    case CKind::Exists:
      return "(some " + to_text(c->role) + " " + to_text(c->args[0]) + ")";
    case CKind::Forall:
      return "(all " + to_text(c->role) + " " + to_text(c->args[0]) + ")";
    case CKind::And:
    case CKind::Or: {
      std::string s = c->kind == CKind::And ? "(and" : "(or";
      for (const auto& a : c->args) s += " " + to_text(a);
      return s + ")";
    }
    case CKind::AtMost:
      return "(at-most " + std::to_string(c->number) + " " + to_text(c->role) +
             " " + to_text(c->args[0]) + ")";
  }
  return "top";
}

std::string to_text(const Axiom& ax) {
  struct V {
    std::string operator()(const CI& ci) const {
      return "(implies " + to_text(ci.lhs) + " " + to_text(ci.rhs) + ")";
    }
    std::string operator()(const ConceptAssertion& a) const {
      return "(instance " + a.individual + " " + to_text(a.c) + ")";
    }
    std::string operator()(const RoleAssertion& r) const {
      return "(related " + r.from + " " + r.to + " " + r.role + ")";
    }
  };
  return std::visit(V{}, ax);
}

std::string to_text(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& ax : kb.axioms) {
    out += to_text(ax);
    out += '\n';
  }
  return out;
}

}  // namespace abd
