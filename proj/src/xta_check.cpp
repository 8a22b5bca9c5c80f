#include "dhc/xta_check.hpp"

#include <cctype>
#include <set>

namespace dhc {

namespace {

struct XtaLexer {
  std::string_view text;
  size_t pos = 0;
  int line = 1;

  void skip() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '\n') {
        ++line;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
        while (pos < text.size() && text[pos] != '\n') {
          ++pos;
        }
      } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '*') {
        pos += 2;
        while (pos + 1 < text.size() &&
               !(text[pos] == '*' && text[pos + 1] == '/')) {
          if (text[pos] == '\n') {
            ++line;
          }
          ++pos;
        }
        pos = pos + 2 <= text.size() ? pos + 2 : text.size();
      } else {
        break;
      }
    }
  }

  bool done() {
    skip();
    return pos >= text.size();
  }

  // Lexes one token: identifier, integer, or a symbol from the fixed set.
  std::string next() {
    skip();
    if (pos >= text.size()) {
      return "";
    }
    char c = text[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) ||
              text[pos] == '_' || text[pos] == '.')) {
        ++pos;
      }
      return std::string(text.substr(start, pos - start));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
      return std::string(text.substr(start, pos - start));
    }
    for (std::string_view sym : {"->", "&&", "<=", ">=", "==", "!="}) {
      if (text.substr(pos, sym.size()) == sym) {
        pos += sym.size();
        return std::string(sym);
      }
    }
    ++pos;
    return std::string(1, c);
  }

  std::string peek() {
    size_t save_pos = pos;
    int save_line = line;
    std::string t = next();
    pos = save_pos;
    line = save_line;
    return t;
  }
};

bool is_ident(const std::string& t) {
  return !t.empty() && (std::isalpha(static_cast<unsigned char>(t[0])) != 0 ||
                        t[0] == '_');
}

bool is_int(const std::string& t) {
  return !t.empty() && std::isdigit(static_cast<unsigned char>(t[0])) != 0;
}

struct Checker {
  XtaLexer lex;
  std::vector<std::string> problems;
  std::set<std::string> global_bools;
  std::set<std::string> global_clocks;
  std::set<std::string> constants;
  std::set<std::string> processes;
  bool saw_system = false;

  void problem(const std::string& msg) {
    problems.push_back("line " + std::to_string(lex.line) + ": " + msg);
  }

  bool expect(const std::string& want) {
    std::string t = lex.next();
    if (t != want) {
      problem("expected '" + want + "', found '" + t + "'");
      return false;
    }
    return true;
  }

  void run() {
    while (!lex.done()) {
      std::string t = lex.peek();
      if (t == "bool") {
        decl_bool();
      } else if (t == "clock") {
        lex.next();
        decl_clock(global_clocks);
      } else if (t == "const") {
        lex.next();
        decl_const(constants);
      } else if (t == "process") {
        process();
      } else if (t == "system") {
        system_line();
      } else {
        problem("unexpected top-level token '" + t + "'");
        lex.next();
      }
    }
    if (!saw_system) {
      problems.push_back("missing system line");
    }
  }

  void decl_bool() {
    lex.next();  // bool
    std::string name = lex.next();
    if (!is_ident(name)) {
      problem("bad bool name '" + name + "'");
    }
    global_bools.insert(name);
    std::string t = lex.next();
    if (t == "=") {
      std::string v = lex.next();
      if (v != "true" && v != "false" && !is_int(v)) {
        problem("bad bool initializer '" + v + "'");
      }
      t = lex.next();
    }
    if (t != ";") {
      problem("expected ';' after bool declaration");
    }
  }

  void decl_clock(std::set<std::string>& into) {
    while (true) {
      std::string name = lex.next();
      if (!is_ident(name)) {
        problem("bad clock name '" + name + "'");
      }
      into.insert(name);
      std::string t = lex.next();
      if (t == ",") {
        continue;
      }
      if (t != ";") {
        problem("expected ';' after clock declaration");
      }
      return;
    }
  }

  void decl_const(std::set<std::string>& into) {
    if (!expect("int")) {
      return;
    }
    std::string name = lex.next();
    if (!is_ident(name)) {
      problem("bad constant name '" + name + "'");
    }
    into.insert(name);
    expect("=");
    std::string v = lex.next();
    if (!is_int(v)) {
      problem("constant '" + name + "' must be an integer");
    }
    expect(";");
  }

  bool known_clock(const std::set<std::string>& local, const std::string& n) {
    return global_clocks.count(n) || local.count(n);
  }
  bool known_const(const std::set<std::string>& local, const std::string& n) {
    return constants.count(n) || local.count(n);
  }

  // conjunction of: clock-compare | bool | !bool | true | false
  void guard_expr(const std::set<std::string>& local_clocks,
                  const std::set<std::string>& local_consts,
                  const std::string& stop) {
    while (true) {
      std::string t = lex.next();
      bool negated = false;
      if (t == "!") {
        negated = true;
        t = lex.next();
      }
      if (t == "true" || t == "false") {
        // fine
      } else if (is_ident(t)) {
        std::string op = lex.peek();
        if (op == "<=" || op == ">=" || op == "<" || op == ">" || op == "==") {
          if (negated) {
            problem("'!' applies to booleans only");
          }
          if (!known_clock(local_clocks, t)) {
            problem("comparison of undeclared clock '" + t + "'");
          }
          lex.next();
          std::string rhs = lex.next();
          if (!is_int(rhs) && !known_const(local_consts, rhs)) {
            problem("comparison against undeclared value '" + rhs + "'");
          }
        } else if (!global_bools.count(t)) {
          problem("use of undeclared boolean '" + t + "'");
        }
      } else {
        problem("bad guard token '" + t + "'");
      }
      std::string sep = lex.peek();
      if (sep == "&&") {
        lex.next();
        continue;
      }
      if (sep != stop) {
        problem("expected '" + stop + "' or '&&' in guard, found '" + sep + "'");
      }
      return;
    }
  }

  void assign_list(const std::set<std::string>& local_clocks) {
    while (true) {
      std::string name = lex.next();
      bool is_clock = known_clock(local_clocks, name);
      bool is_bool = global_bools.count(name) > 0;
      if (!is_clock && !is_bool) {
        problem("assignment to undeclared variable '" + name + "'");
      }
      expect("=");
      std::string v = lex.next();
      if (v == "!") {
        std::string b = lex.next();
        if (!global_bools.count(b)) {
          problem("negation of undeclared boolean '" + b + "'");
        }
      } else if (v == "true" || v == "false") {
        if (is_clock) {
          problem("clock '" + name + "' assigned a boolean");
        }
      } else if (is_int(v)) {
        if (is_clock && v != "0") {
          problem("clock '" + name + "' may only be reset to 0");
        }
      } else {
        problem("bad assignment value '" + v + "'");
      }
      std::string t = lex.next();
      if (t == ",") {
        continue;
      }
      if (t != ";") {
        problem("expected ';' after assignment");
      }
      return;
    }
  }

  void process() {
    lex.next();  // process
    std::string name = lex.next();
    if (!is_ident(name)) {
      problem("bad process name '" + name + "'");
    }
    if (!processes.insert(name).second) {
      problem("duplicate process '" + name + "'");
    }
    expect("(");
    expect(")");
    expect("{");
    std::set<std::string> local_clocks;
    std::set<std::string> local_consts;
    std::set<std::string> states;
    std::string init;
    bool saw_trans = false;
    while (true) {
      std::string t = lex.peek();
      if (t == "}") {
        lex.next();
        break;
      }
      if (t.empty()) {
        problem("unterminated process '" + name + "'");
        return;
      }
      if (t == "clock") {
        lex.next();
        decl_clock(local_clocks);
      } else if (t == "const") {
        lex.next();
        decl_const(local_consts);
      } else if (t == "state") {
        lex.next();
        state_list(local_clocks, local_consts, states);
      } else if (t == "init") {
        lex.next();
        std::string s = lex.next();
        if (!states.count(s)) {
          problem("init state '" + s + "' is not declared");
        }
        if (!init.empty()) {
          problem("second init in process '" + name + "'");
        }
        init = s;
        expect(";");
      } else if (t == "trans") {
        lex.next();
        saw_trans = true;
        trans_list(local_clocks, local_consts, states);
      } else {
        problem("unexpected token '" + t + "' in process '" + name + "'");
        lex.next();
      }
    }
    if (init.empty()) {
      problem("process '" + name + "' has no init state");
    }
    (void)saw_trans;  // processes without edges are legal
  }

  void state_list(const std::set<std::string>& local_clocks,
                  const std::set<std::string>& local_consts,
                  std::set<std::string>& states) {
    while (true) {
      std::string name = lex.next();
      if (!is_ident(name)) {
        problem("bad state name '" + name + "'");
      }
      if (!states.insert(name).second) {
        problem("duplicate state '" + name + "'");
      }
      std::string t = lex.next();
      if (t == "{") {
        guard_expr(local_clocks, local_consts, "}");
        expect("}");
        t = lex.next();
      }
      if (t == ",") {
        continue;
      }
      if (t != ";") {
        problem("expected ';' after state list");
      }
      return;
    }
  }

  void trans_list(const std::set<std::string>& local_clocks,
                  const std::set<std::string>& local_consts,
                  const std::set<std::string>& states) {
    while (true) {
      std::string src = lex.next();
      if (!states.count(src)) {
        problem("transition from undeclared state '" + src + "'");
      }
      expect("->");
      std::string dst = lex.next();
      if (!states.count(dst)) {
        problem("transition to undeclared state '" + dst + "'");
      }
      expect("{");
      while (true) {
        std::string t = lex.peek();
        if (t == "}") {
          lex.next();
          break;
        }
        if (t == "guard") {
          lex.next();
          guard_expr(local_clocks, local_consts, ";");
          expect(";");
        } else if (t == "assign") {
          lex.next();
          assign_list(local_clocks);
        } else {
          problem("unexpected token '" + t + "' in transition");
          lex.next();
        }
      }
      std::string sep = lex.next();
      if (sep == ",") {
        continue;
      }
      if (sep != ";") {
        problem("expected ',' or ';' after transition");
      }
      return;
    }
  }

  void system_line() {
    lex.next();  // system
    saw_system = true;
    while (true) {
      std::string name = lex.next();
      if (!processes.count(name)) {
        problem("system instantiates undeclared process '" + name + "'");
      }
      std::string t = lex.next();
      if (t == ",") {
        continue;
      }
      if (t != ";") {
        problem("expected ';' after system line");
      }
      return;
    }
  }
};

}  // namespace

std::vector<std::string> check_xta(std::string_view text) {
  Checker checker;
  checker.lex.text = text;
  checker.run();
  return checker.problems;
}

}  // namespace dhc
