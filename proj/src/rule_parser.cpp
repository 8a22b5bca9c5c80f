#include "dhc/rule_parser.hpp"

#include <algorithm>
#include <cctype>

namespace dhc {

namespace {

enum class Tok {
  End,
  Ident,
  String,
  Integer,
  LBrace,
  RBrace,
  Colon,
  Semi,
  Comma,
  Equals,
  Arrow,  // ->
  Le,     // <=
  Ge,     // >=
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  Tok tok() const { return tok_; }
  const std::string& text() const { return tok_text_; }
  int line() const { return tok_line_; }
  int column() const { return tok_col_; }

  void advance() {
    skip_space_and_comments();
    tok_line_ = line_;
    tok_col_ = col_;
    tok_text_.clear();
    if (pos_ >= text_.size()) {
      tok_ = Tok::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        tok_text_ += take();
      }
      tok_ = Tok::Ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        tok_text_ += take();
      }
      tok_ = Tok::Integer;
      return;
    }
    if (c == '"') {
      take();
      while (pos_ < text_.size() && text_[pos_] != '"') {
        char d = take();
        if (d == '\\' && pos_ < text_.size() &&
            (text_[pos_] == '"' || text_[pos_] == '\\')) {
          d = take();
        }
        tok_text_ += d;
      }
      if (pos_ >= text_.size()) {
        throw ParseError(tok_line_, tok_col_, "unterminated string");
      }
      take();  // closing quote
      tok_ = Tok::String;
      return;
    }
    switch (c) {
      case '{':
        take();
        tok_ = Tok::LBrace;
        return;
      case '}':
        take();
        tok_ = Tok::RBrace;
        return;
      case ':':
        take();
        tok_ = Tok::Colon;
        return;
      case ';':
        take();
        tok_ = Tok::Semi;
        return;
      case ',':
        take();
        tok_ = Tok::Comma;
        return;
      case '=':
        take();
        tok_ = Tok::Equals;
        return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          take();
          take();
          tok_ = Tok::Arrow;
          return;
        }
        break;
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          take();
          take();
          tok_ = Tok::Le;
          return;
        }
        break;
      case '>':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          take();
          take();
          tok_ = Tok::Ge;
          return;
        }
        break;
      default:
        break;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

 private:
  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          take();
        }
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Tok tok_ = Tok::End;
  std::string tok_text_;
  int tok_line_ = 1;
  int tok_col_ = 1;
};

class RuleParser {
 public:
  RuleParser(std::string_view text, const FormulaParseOptions& opts)
      : lex_(text), formula_opts_(opts) {}

  RuleAutomaton parse() {
    eat_keyword("rule");
    automaton_.name = expect(Tok::String, "the rule name string");
    eat(Tok::LBrace, "'{'");
    while (lex_.tok() != Tok::RBrace) {
      item();
    }
    eat(Tok::RBrace, "'}'");
    if (lex_.tok() != Tok::End) {
      fail("unexpected trailing input");
    }
    auto violations = validate_automaton(automaton_);
    if (!violations.empty()) {
      throw std::runtime_error("rule '" + automaton_.name +
                               "': " + violations.front());
    }
    return automaton_;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(lex_.line(), lex_.column(), msg);
  }

  bool at_keyword(std::string_view kw) const {
    return lex_.tok() == Tok::Ident && lex_.text() == kw;
  }

  void eat_keyword(std::string_view kw) {
    if (!at_keyword(kw)) {
      fail("expected '" + std::string(kw) + "'");
    }
    lex_.advance();
  }

  void eat(Tok t, const char* what) {
    if (lex_.tok() != t) {
      fail(std::string("expected ") + what);
    }
    lex_.advance();
  }

  std::string expect(Tok t, const char* what) {
    if (lex_.tok() != t) {
      fail(std::string("expected ") + what);
    }
    std::string s = lex_.text();
    lex_.advance();
    return s;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    out.push_back(expect(Tok::Ident, "an identifier"));
    while (lex_.tok() == Tok::Comma) {
      lex_.advance();
      out.push_back(expect(Tok::Ident, "an identifier"));
    }
    return out;
  }

  Formula quoted_formula() {
    int line = lex_.line();
    int col = lex_.column();
    std::string text = expect(Tok::String, "a quoted formula");
    try {
      return parse_formula(text, formula_opts_);
    } catch (const ParseError& e) {
      int out_line = line + e.line() - 1;
      int out_col = e.line() == 1 ? col + e.column() : e.column();
      throw ParseError(out_line, out_col, e.what());
    }
  }

  ClockAtom clock_atom() {
    ClockAtom atom;
    atom.clock = expect(Tok::Ident, "a clock name");
    if (lex_.tok() == Tok::Le) {
      atom.is_upper = true;
    } else if (lex_.tok() == Tok::Ge) {
      atom.is_upper = false;
    } else {
      fail("expected '<=' or '>='");
    }
    lex_.advance();
    if (lex_.tok() == Tok::Integer) {
      atom.bound = std::stoll(lex_.text());
      lex_.advance();
    } else if (lex_.tok() == Tok::Ident) {
      auto it = automaton_.constants.find(lex_.text());
      if (it == automaton_.constants.end()) {
        fail("unknown constant '" + lex_.text() +
             "' (declare it with 'const' first)");
      }
      atom.symbol = lex_.text();
      atom.bound = it->second;
      lex_.advance();
    } else {
      fail("expected an integer or a declared constant");
    }
    return atom;
  }

  ClockConstraint clock_constraint() {
    ClockConstraint cc;
    cc.atoms.push_back(clock_atom());
    while (at_keyword("and")) {
      lex_.advance();
      cc.atoms.push_back(clock_atom());
    }
    return cc;
  }

  void item() {
    if (at_keyword("clocks")) {
      lex_.advance();
      eat(Tok::Colon, "':'");
      automaton_.clocks = ident_list();
      eat(Tok::Semi, "';'");
      return;
    }
    if (at_keyword("alphabet")) {
      lex_.advance();
      eat(Tok::Colon, "':'");
      automaton_.alphabet = ident_list();
      eat(Tok::Semi, "';'");
      return;
    }
    if (at_keyword("const")) {
      lex_.advance();
      std::string name = expect(Tok::Ident, "a constant name");
      eat(Tok::Equals, "'='");
      std::string value = expect(Tok::Integer, "an integer");
      automaton_.constants[name] = std::stoll(value);
      eat(Tok::Semi, "';'");
      return;
    }
    if (at_keyword("annotation")) {
      lex_.advance();
      automaton_.annotations.push_back(expect(Tok::String, "an annotation string"));
      eat(Tok::Semi, "';'");
      return;
    }
    if (at_keyword("location")) {
      lex_.advance();
      location();
      return;
    }
    if (at_keyword("transition")) {
      lex_.advance();
      transition();
      return;
    }
    fail("expected clocks, alphabet, const, annotation, location or transition");
  }

  void location() {
    Location loc;
    loc.name = expect(Tok::Ident, "a location name");
    eat(Tok::LBrace, "'{'");
    while (lex_.tok() != Tok::RBrace) {
      if (at_keyword("initial")) {
        lex_.advance();
        loc.initial = true;
        eat(Tok::Semi, "';'");
      } else if (at_keyword("invariant")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        loc.invariant = clock_constraint();
        eat(Tok::Semi, "';'");
      } else if (at_keyword("spatial")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        loc.spatial_invariant = quoted_formula();
        eat(Tok::Semi, "';'");
      } else if (at_keyword("forbid")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        for (auto& a : ident_list()) {
          loc.forbid.insert(std::move(a));
        }
        eat(Tok::Semi, "';'");
      } else if (at_keyword("role")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        loc.role = expect(Tok::String, "a role string");
        eat(Tok::Semi, "';'");
      } else {
        fail("expected initial, invariant, spatial, forbid or role");
      }
    }
    eat(Tok::RBrace, "'}'");
    automaton_.locations.push_back(std::move(loc));
  }

  void transition() {
    Transition t;
    t.source = expect(Tok::Ident, "a source location");
    eat(Tok::Arrow, "'->'");
    t.target = expect(Tok::Ident, "a target location");
    t.spatial_guard = f_true();
    eat(Tok::LBrace, "'{'");
    while (lex_.tok() != Tok::RBrace) {
      if (at_keyword("action")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        t.action = expect(Tok::Ident, "an action name");
        eat(Tok::Semi, "';'");
      } else if (at_keyword("guard")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        t.spatial_guard = quoted_formula();
        eat(Tok::Semi, "';'");
      } else if (at_keyword("clock")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        t.clock_guard = clock_constraint();
        eat(Tok::Semi, "';'");
      } else if (at_keyword("reset")) {
        lex_.advance();
        eat(Tok::Colon, "':'");
        t.resets = ident_list();
        eat(Tok::Semi, "';'");
      } else {
        fail("expected action, guard, clock or reset");
      }
    }
    eat(Tok::RBrace, "'}'");
    automaton_.transitions.push_back(std::move(t));
  }

  Lexer lex_;
  FormulaParseOptions formula_opts_;
  RuleAutomaton automaton_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) {
      out += ", ";
    }
    out += s;
  }
  return out;
}

}  // namespace

RuleAutomaton parse_rule_file(std::string_view text,
                              const FormulaParseOptions& formula_opts) {
  return RuleParser(text, formula_opts).parse();
}

std::string rule_to_string(const RuleAutomaton& a) {
  std::string out = "rule " + quote(a.name) + " {\n";
  if (!a.clocks.empty()) {
    out += "  clocks: " + join(a.clocks) + ";\n";
  }
  if (!a.alphabet.empty()) {
    out += "  alphabet: " + join(a.alphabet) + ";\n";
  }
  for (const auto& [name, value] : a.constants) {
    out += "  const " + name + " = " + std::to_string(value) + ";\n";
  }
  for (const auto& note : a.annotations) {
    out += "  annotation " + quote(note) + ";\n";
  }
  for (const auto& loc : a.locations) {
    out += "  location " + loc.name + " {\n";
    if (loc.initial) {
      out += "    initial;\n";
    }
    if (!loc.invariant.is_true()) {
      out += "    invariant: " + to_string(loc.invariant) + ";\n";
    }
    if (loc.spatial_invariant) {
      out += "    spatial: " + quote(formula_to_string(*loc.spatial_invariant)) +
             ";\n";
    }
    if (!loc.forbid.empty()) {
      out += "    forbid: " +
             join(std::vector<std::string>(loc.forbid.begin(), loc.forbid.end())) +
             ";\n";
    }
    if (!loc.role.empty()) {
      out += "    role: " + quote(loc.role) + ";\n";
    }
    out += "  }\n";
  }
  for (const auto& t : a.transitions) {
    out += "  transition " + t.source + " -> " + t.target + " {\n";
    out += "    action: " + t.action + ";\n";
    if (t.spatial_guard && t.spatial_guard->kind != FormulaKind::True) {
      out += "    guard: " + quote(formula_to_string(t.spatial_guard)) + ";\n";
    }
    if (!t.clock_guard.is_true()) {
      out += "    clock: " + to_string(t.clock_guard) + ";\n";
    }
    if (!t.resets.empty()) {
      out += "    reset: " + join(t.resets) + ";\n";
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

bool automata_structurally_equal(const RuleAutomaton& a, const RuleAutomaton& b) {
  auto formulas_equal = [](const Formula& x, const Formula& y) {
    if ((x == nullptr) != (y == nullptr)) {
      return false;
    }
    return x == nullptr || structurally_equal(x, y);
  };
  if (a.name != b.name || a.clocks != b.clocks || a.alphabet != b.alphabet ||
      a.constants != b.constants || a.annotations != b.annotations ||
      a.locations.size() != b.locations.size() ||
      a.transitions.size() != b.transitions.size()) {
    return false;
  }
  for (size_t i = 0; i < a.locations.size(); ++i) {
    const Location& x = a.locations[i];
    const Location& y = b.locations[i];
    if (x.name != y.name || x.initial != y.initial ||
        !(x.invariant == y.invariant) || x.forbid != y.forbid ||
        x.role != y.role) {
      return false;
    }
    bool xs = x.spatial_invariant.has_value();
    bool ys = y.spatial_invariant.has_value();
    if (xs != ys || (xs && !structurally_equal(*x.spatial_invariant,
                                               *y.spatial_invariant))) {
      return false;
    }
  }
  for (size_t i = 0; i < a.transitions.size(); ++i) {
    const Transition& x = a.transitions[i];
    const Transition& y = b.transitions[i];
    if (x.source != y.source || x.target != y.target || x.action != y.action ||
        !(x.clock_guard == y.clock_guard) || x.resets != y.resets ||
        !formulas_equal(x.spatial_guard, y.spatial_guard)) {
      return false;
    }
  }
  return true;
}

}  // namespace dhc
