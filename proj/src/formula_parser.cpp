#include "dhc/formula_parser.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace dhc {

namespace {

enum class Tok {
  End,
  Ident,    // identifiers and keywords; text() distinguishes
  Number,   // unsigned rational literal: 12, 7/2, 3.5
  LParen,
  RParen,
  Colon,
  OpenSom,  // <<
  CloseSom, // >>
  Ge,       // >=
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  Tok tok() const { return tok_; }
  const std::string& text() const { return tok_text_; }
  int line() const { return tok_line_; }
  int column() const { return tok_col_; }

  void advance() {
    skip_space();
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
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '/' || text_[pos_] == '.')) {
        tok_text_ += take();
      }
      tok_ = Tok::Number;
      return;
    }
    switch (c) {
      case '(':
        take();
        tok_ = Tok::LParen;
        return;
      case ')':
        take();
        tok_ = Tok::RParen;
        return;
      case ':':
        take();
        tok_ = Tok::Colon;
        return;
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '<') {
          take();
          take();
          tok_ = Tok::OpenSom;
          return;
        }
        break;
      case '>':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          take();
          take();
          tok_ = Tok::CloseSom;
          return;
        }
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

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      take();
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

class Parser {
 public:
  Parser(std::string_view text, const FormulaParseOptions& opts)
      : lex_(text), opts_(opts) {}

  Formula parse() {
    Formula f = formula();
    if (lex_.tok() != Tok::End) {
      fail("unexpected trailing input");
    }
    return f;
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

  std::string ident(const char* what) {
    if (lex_.tok() != Tok::Ident) {
      fail(std::string("expected ") + what);
    }
    std::string s = lex_.text();
    lex_.advance();
    return s;
  }

  // formula := quantifier | chop-level
  Formula formula() {
    if (at_keyword("exists") || at_keyword("forall")) {
      return quantifier();
    }
    return chop_level();
  }

  Formula quantifier() {
    bool existential = lex_.text() == "exists";
    lex_.advance();
    int line = lex_.line();
    int col = lex_.column();
    std::string var = ident("a variable name");
    if (std::find(scope_.begin(), scope_.end(), var) != scope_.end()) {
      throw ParseError(line, col, "variable '" + var + "' is already bound");
    }
    eat(Tok::Colon, "':'");
    scope_.push_back(var);
    Formula body = formula();
    scope_.pop_back();
    return existential ? f_exists(var, body) : f_forall(var, body);
  }

  Formula chop_level() {
    Formula l = or_level();
    if (at_keyword("chop")) {
      lex_.advance();
      // right-associative
      Formula r = chop_level();
      return f_chop(l, r);
    }
    return l;
  }

  Formula or_level() {
    Formula l = and_level();
    while (at_keyword("or")) {
      lex_.advance();
      l = f_or(l, and_level());
    }
    return l;
  }

  Formula and_level() {
    Formula l = unary();
    while (at_keyword("and")) {
      lex_.advance();
      l = f_and(l, unary());
    }
    return l;
  }

  Formula unary() {
    if (at_keyword("not")) {
      lex_.advance();
      if (at_keyword("exists") || at_keyword("forall")) {
        return f_not(quantifier());
      }
      return f_not(unary());
    }
    return primary();
  }

  Formula ref_atom(Formula (*factory)(std::string)) {
    lex_.advance();
    eat(Tok::LParen, "'('");
    std::string name = ident("a name");
    eat(Tok::RParen, "')'");
    return factory(std::move(name));
  }

  Formula primary() {
    switch (lex_.tok()) {
      case Tok::LParen: {
        lex_.advance();
        Formula f = formula();
        eat(Tok::RParen, "')'");
        return f;
      }
      case Tok::OpenSom: {
        lex_.advance();
        Formula f = formula();
        eat(Tok::CloseSom, "'>>'");
        return opts_.somewhere_brackets ? f_somewhere(f) : f;
      }
      case Tok::Ident:
        break;
      default:
        fail("expected a formula");
    }
    const std::string& kw = lex_.text();
    if (kw == "true") {
      lex_.advance();
      return f_true();
    }
    if (kw == "false") {
      lex_.advance();
      return f_false();
    }
    if (kw == "free") {
      lex_.advance();
      return f_free();
    }
    if (kw == "cs") {
      lex_.advance();
      return f_cs();
    }
    if (kw == "re") {
      return ref_atom(&f_re);
    }
    if (kw == "sg") {
      return ref_atom(&f_sg);
    }
    if (kw == "pc") {
      return ref_atom(&f_pc);
    }
    if (kw == "pa") {
      return ref_atom(&f_pa);
    }
    if (kw == "ob") {
      return ref_atom(&f_ob);
    }
    if (kw == "l") {
      lex_.advance();
      eat(Tok::Ge, "'>='");
      return length_bound();
    }
    fail("unknown atom '" + kw + "'");
  }

  Formula length_bound() {
    if (at_keyword("size")) {
      lex_.advance();
      eat(Tok::LParen, "'('");
      std::string car = ident("a car reference");
      eat(Tok::RParen, "')'");
      return f_len_ge_size(std::move(car));
    }
    if (lex_.tok() != Tok::Number) {
      fail("expected a rational constant or size(...)");
    }
    auto value = parse_rational(lex_.text());
    if (!value) {
      fail("malformed rational '" + lex_.text() + "'");
    }
    lex_.advance();
    return f_len_ge(*value);
  }

  Lexer lex_;
  FormulaParseOptions opts_;
  std::vector<std::string> scope_;
};

}  // namespace

Formula parse_formula(std::string_view text, const FormulaParseOptions& opts) {
  return Parser(text, opts).parse();
}

}  // namespace dhc
