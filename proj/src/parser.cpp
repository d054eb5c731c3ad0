#include "abd/parser.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace abd {

namespace {

struct Token {
  enum Kind { LParen, RParen, Symbol, End } kind = End;
  std::string text;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Token::End;
      return t;
    }
    char c = text_[pos_];
    if (c == '(') {
      advance();
      t.kind = Token::LParen;
      t.text = "(";
      return t;
    }
    if (c == ')') {
      advance();
      t.kind = Token::RParen;
      t.text = ")";
      return t;
    }
    t.kind = Token::Symbol;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) {
      t.text += text_[pos_];
      advance();
    }
    return t;
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == '#' || std::isspace((unsigned char)c);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace((unsigned char)c)) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { bump(); }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw input_error("line " + std::to_string(at.line) + ", column " +
                      std::to_string(at.col) + ": " + msg);
  }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    bump();
    return t;
  }

  Token expect(Token::Kind kind, const std::string& what) {
    if (tok_.kind != kind) fail("expected " + what, tok_);
    return take();
  }

  std::string expect_symbol(const std::string& what) {
    return expect(Token::Symbol, what).text;
  }

  bool at_end() const { return tok_.kind == Token::End; }

  Role parse_role() {
    if (peek().kind == Token::Symbol) return Role(take().text);
    Token open = expect(Token::LParen, "role name or (inv ...)");
    std::string head = expect_symbol("role operator");
    if (head != "inv") fail("unknown role operator '" + head + "'", open);
    Role r(expect_symbol("role name"), true);
    expect(Token::RParen, "')'");
    return r;
  }

  ConceptPtr parse_concept() {
    if (peek().kind == Token::Symbol) {
      Token t = take();
      if (t.text == "top") return top();
      if (t.text == "bot") return bot();
      if (t.text[0] == ':') fail("unexpected directive '" + t.text + "'", t);
      return atom(t.text);
    }
    Token open = expect(Token::LParen, "concept");
    Token head = expect(Token::Symbol, "concept operator");
    const std::string& op = head.text;
    if (op == "and" || op == "or") {
      std::vector<ConceptPtr> args;
      while (peek().kind != Token::RParen) {
        if (peek().kind == Token::End) fail("unterminated '" + op + "'", open);
        args.push_back(parse_concept());
      }
      take();  // ')'
      if (args.empty()) fail("empty '" + op + "'", open);
      return op == "and" ? conj(std::move(args)) : disj(std::move(args));
    }
    if (op == "not") {
      ConceptPtr c = parse_concept();
      expect(Token::RParen, "')'");
      return negation(std::move(c));
    }
    if (op == "some" || op == "all") {
      Role r = parse_role();
      ConceptPtr c = parse_concept();
      expect(Token::RParen, "')'");
      return op == "some" ? exists(std::move(r), std::move(c))
                          : forall(std::move(r), std::move(c));
    }
    if (op == "at-most") {
      Token num = expect(Token::Symbol, "cardinality");
      std::uint64_t n = 0;
      auto [p, ec] = std::from_chars(num.text.data(),
                                     num.text.data() + num.text.size(), n);
      if (ec != std::errc() || p != num.text.data() + num.text.size())
        fail("invalid cardinality '" + num.text + "'", num);
      Role r = parse_role();
      ConceptPtr c = parse_concept();
      expect(Token::RParen, "')'");
      return at_most(n, std::move(r), std::move(c));
    }
    fail("unknown concept operator '" + op + "'", head);
  }

  Axiom parse_axiom() {
    Token open = expect(Token::LParen, "axiom");
    Token head = expect(Token::Symbol, "axiom operator");
    const std::string& op = head.text;
    if (op == "implies") {
      ConceptPtr l = parse_concept();
      ConceptPtr r = parse_concept();
      expect(Token::RParen, "')'");
      return CI{std::move(l), std::move(r)};
    }
    if (op == "instance") {
      std::string ind = expect_symbol("individual name");
      ConceptPtr c = parse_concept();
      expect(Token::RParen, "')'");
      return ConceptAssertion{std::move(ind), std::move(c)};
    }
    if (op == "related") {
      std::string a = expect_symbol("individual name");
      std::string b = expect_symbol("individual name");
      Role r = parse_role();
      expect(Token::RParen, "')'");
      if (r.inverted) std::swap(a, b);  // r^-(a,b) = r(b,a)
      return RoleAssertion{std::move(r.name), std::move(a), std::move(b)};
    }
    fail("unknown axiom operator '" + op + "'", head);
  }

 private:
  void bump() { tok_ = lexer_.next(); }

  Lexer lexer_;
  Token tok_;
};

// "negation not in EL" style message for a construct beyond the declared
// dialect; empty when everything fits.
std::string excess_construct(const ConceptPtr& c, Dialect declared) {
  switch (c->kind) {
    case CKind::Bot:
      if (declared == Dialect::EL) return "bottom not in EL";
      break;
    case CKind::Not:
      if (declared < Dialect::ALC)
        return "negation not in " + to_string(declared);
      break;
    case CKind::Or:
      if (declared < Dialect::ALC)
        return "disjunction not in " + to_string(declared);
      break;
    case CKind::Forall:
      if (declared < Dialect::ALC)
        return "universal restriction not in " + to_string(declared);
      break;
    case CKind::Exists:
      break;
    default:
      break;
  }
  if ((c->kind == CKind::Exists || c->kind == CKind::Forall) &&
      c->role.inverted && declared < Dialect::ALCI)
    return "inverse role not in " + to_string(declared);
  for (const auto& a : c->args) {
    std::string m = excess_construct(a, declared);
    if (!m.empty()) return m;
  }
  return "";
}

std::string excess_construct(const KnowledgeBase& kb, Dialect declared) {
  for (const auto& ax : kb.axioms) {
    for (const auto& c : subconcepts_of(ax)) {
      std::string m = excess_construct(c, declared);
      if (!m.empty()) return m;
    }
  }
  return "";
}

}  // namespace

AbductionProblem parse_problem(const std::string& text) {
  Parser p(text);
  AbductionProblem out;
  std::vector<std::pair<std::string, bool>> sigma_overrides;  // name, is_role
  std::vector<std::string> sigma_bare;
  std::optional<Dialect> declared;

  enum class Section { None, Kb, Observation, Sigma };
  Section section = Section::None;

  while (!p.at_end()) {
    if (p.peek().kind == Token::Symbol && p.peek().text[0] == ':') {
      Token dir = p.take();
      if (dir.text == ":kb") {
        section = Section::Kb;
      } else if (dir.text == ":observation") {
        section = Section::Observation;
      } else if (dir.text == ":sigma") {
        section = Section::Sigma;
      } else if (dir.text == ":bound") {
        Token num = p.expect(Token::Symbol, "bound value");
        std::uint64_t n = 0;
        auto [q, ec] = std::from_chars(num.text.data(),
                                       num.text.data() + num.text.size(), n);
        if (ec != std::errc() || q != num.text.data() + num.text.size())
          p.fail("invalid bound '" + num.text + "'", num);
        out.size_bound = n;
      } else if (dir.text == ":mode") {
        Token m = p.expect(Token::Symbol, "mode");
        auto mode = mode_from_string(m.text);
        if (!mode) p.fail("unknown mode '" + m.text + "'", m);
        out.mode = *mode;
      } else if (dir.text == ":dialect") {
        Token d = p.expect(Token::Symbol, "dialect");
        declared = dialect_from_string(d.text);
        if (!declared) p.fail("unknown dialect '" + d.text + "'", d);
      } else {
        p.fail("unknown directive '" + dir.text + "'", dir);
      }
      continue;
    }

    switch (section) {
      case Section::None:
        p.fail("expected a section directive such as :kb", p.peek());
      case Section::Kb:
        out.kb.add(p.parse_axiom());
        break;
      case Section::Observation: {
        Token at = p.peek();
        Axiom ax = p.parse_axiom();
        if (std::holds_alternative<CI>(ax))
          p.fail("observation must contain only assertions", at);
        out.observation.add(std::move(ax));
        break;
      }
      case Section::Sigma: {
        if (p.peek().kind == Token::Symbol) {
          sigma_bare.push_back(p.take().text);
          break;
        }
        Token open = p.expect(Token::LParen, "sigma entry");
        std::string head = p.expect_symbol("sigma classifier");
        std::string name = p.expect_symbol("name");
        p.expect(Token::RParen, "')'");
        if (head == "concept")
          sigma_overrides.emplace_back(name, false);
        else if (head == "role")
          sigma_overrides.emplace_back(name, true);
        else
          p.fail("unknown sigma classifier '" + head + "'", open);
        break;
      }
    }
  }

  Signature occurring = signature_of(merged(out.kb, out.observation));
  for (const auto& name : sigma_bare) {
    bool is_c = occurring.concepts.count(name) > 0;
    bool is_r = occurring.roles.count(name) > 0;
    if (!is_c && !is_r)
      throw input_error("cannot classify sigma name '" + name +
                        "'; it does not occur in the axioms, use (concept " +
                        name + ") or (role " + name + ")");
    if (is_c) out.sigma.concepts.insert(name);
    if (is_r) out.sigma.roles.insert(name);
  }
  for (const auto& [name, is_role] : sigma_overrides) {
    if (is_role)
      out.sigma.roles.insert(name);
    else
      out.sigma.concepts.insert(name);
  }

  Dialect detected = detect_dialect(out.kb, out.observation);
  if (declared) {
    if (detected > *declared) {
      std::string m = excess_construct(out.kb, *declared);
      if (m.empty()) m = excess_construct(out.observation, *declared);
      if (m.empty())
        m = "axioms use " + to_string(detected) + " constructors";
      throw input_error(m + " (declared dialect " + to_string(*declared) + ")");
    }
    out.dialect = *declared;
  } else {
    out.dialect = detected;
  }
  return out;
}

KnowledgeBase parse_kb(const std::string& text) {
  Parser p(text);
  KnowledgeBase out;
  while (!p.at_end()) out.add(p.parse_axiom());
  return out;
}

ConceptPtr parse_concept_text(const std::string& text) {
  Parser p(text);
  ConceptPtr c = p.parse_concept();
  if (!p.at_end())
    p.fail("trailing input after concept", p.peek());
  return c;
}

std::string print_problem(const AbductionProblem& p) {
  std::string out = ":kb\n";
  out += to_text(p.kb);
  out += ":observation\n";
  out += to_text(p.observation);
  out += ":sigma\n";
  for (const auto& n : p.sigma.concepts) out += "(concept " + n + ")\n";
  for (const auto& n : p.sigma.roles) out += "(role " + n + ")\n";
  if (p.size_bound) out += ":bound " + std::to_string(*p.size_bound) + "\n";
  out += ":mode " + to_string(p.mode) + "\n";
  out += ":dialect " + to_string(p.dialect) + "\n";
  return out;
}

}  // namespace abd
