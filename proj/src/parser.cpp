#include "plwhile/parser.hpp"

#include <cctype>
#include <set>

namespace plw {

namespace {

enum class Tok {
  End,
  Ident,
  Int,
  // punctuation and operators
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Comma, Semi, Colon, Dot, Slash, Tilde, Arrow,
  Assign,     // <-
  Sample,     // <$
  SecRead,    // <~
  SecSample,  // <~$
  CallArrow,  // <@
  Eq, Neq, Bang, AndOp, OrOp, Implies, FatArrow, LabelEq,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long number = 0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    cur_.pos = {line_, col_};
    if (i_ >= text_.size()) {
      cur_ = Token{Tok::End, "", 0, cur_.pos};
      return;
    }
    char c = text_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
              text_[i_] == '_' || text_[i_] == '#')) {
        word += text_[i_];
        bump();
      }
      cur_ = Token{Tok::Ident, word, 0, cur_.pos};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
      std::string num;
      if (c == '-') {
        num += c;
        bump();
      }
      while (i_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        num += text_[i_];
        bump();
      }
      cur_ = Token{Tok::Int, num, std::stoll(num), cur_.pos};
      return;
    }
    auto two = [&](std::size_t n) { return text_.substr(i_, n); };
    struct Sym {
      const char* s;
      Tok t;
    };
    static const Sym kSymbols[] = {
        {"<~$", Tok::SecSample}, {"==>", Tok::Implies}, {"<-", Tok::Assign},
        {"<$", Tok::Sample},     {"<~", Tok::SecRead},  {"<@", Tok::CallArrow},
        {"=>", Tok::FatArrow},   {"!=", Tok::Neq},      {"/\\", Tok::AndOp},
        {"\\/", Tok::OrOp},      {"~=", Tok::LabelEq},  {"->", Tok::Arrow},
        {"{", Tok::LBrace},      {"}", Tok::RBrace},    {"(", Tok::LParen},
        {")", Tok::RParen},      {"[", Tok::LBracket},  {"]", Tok::RBracket},
        {",", Tok::Comma},       {";", Tok::Semi},      {":", Tok::Colon},
        {".", Tok::Dot},         {"/", Tok::Slash},     {"~", Tok::Tilde},
        {"=", Tok::Eq},          {"!", Tok::Bang},
    };
    for (const auto& sym : kSymbols) {
      std::size_t n = std::string(sym.s).size();
      if (two(n) == sym.s) {
        for (std::size_t k = 0; k < n; ++k) bump();
        cur_ = Token{sym.t, sym.s, 0, cur_.pos};
        return;
      }
    }
    throw ParseError(cur_.pos, std::string("unexpected character '") + c +
                                   "'");
  }

  void skip_ws() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '#') {  // line comment
        while (i_ < text_.size() && text_[i_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  const std::string& text_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

bool is_keyword(const Token& t, const char* word) {
  return t.kind == Tok::Ident && t.text == word;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {
    tokens_.push_back(lex_.take());
  }

  Program parse() {
    while (!at(Tok::End)) {
      if (at_kw("type")) {
        parse_type();
      } else if (at_kw("dist")) {
        parse_dist();
      } else if (at_kw("module")) {
        parse_module();
      } else if (at_kw("goal")) {
        parse_goal();
      } else if (at_kw("proof")) {
        parse_proof();
      } else {
        throw ParseError(peek().pos,
                         "expected type, dist, module, goal, or proof");
      }
    }
    return std::move(prog_);
  }

  ExprPtr parse_expr_entry(const Program& prog) {
    prog_ = prog;
    ExprPtr e = parse_expr();
    expect(Tok::End, "end of expression");
    return e;
  }

 private:
  // -- token plumbing ------------------------------------------------
  const Token& peek(std::size_t n = 0) {
    while (tokens_.size() <= pos_ + n) tokens_.push_back(lex_.take());
    return tokens_[pos_ + n];
  }
  bool at(Tok k) { return peek().kind == k; }
  bool at_kw(const char* w) { return is_keyword(peek(), w); }
  Token take() {
    Token t = peek();
    ++pos_;
    return t;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(peek().pos, std::string("expected ") + what);
    return take();
  }
  void expect_kw(const char* w) {
    if (!at_kw(w))
      throw ParseError(peek().pos, std::string("expected '") + w + "'");
    take();
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }
  bool accept_kw(const char* w) {
    if (!at_kw(w)) return false;
    take();
    return true;
  }
  std::string ident(const char* what) {
    if (!at(Tok::Ident))
      throw ParseError(peek().pos, std::string("expected ") + what);
    return take().text;
  }
  std::size_t mark() const { return pos_; }
  void rewind(std::size_t m) { pos_ = m; }

  // -- declarations --------------------------------------------------
  bool reserved(const std::string& name) const {
    static const std::set<std::string> kReserved = {
        "S",      "L",     "bot",    "empty",   "uniform", "point",
        "dom",    "pi1",   "pi2",    "pi3",     "true",    "false",
        "forall", "inv",   "leaked", "sampled", "skip",    "if",
        "else",   "while", "call",   "return",  "var",     "proc",
        "module", "type",  "dist",   "goal",    "proof",   "over",
        "vars",   "map",   "labeled"};
    return kReserved.count(name) > 0;
  }

  std::string fresh_ident(const char* what) {
    Token t = peek();
    std::string name = ident(what);
    if (reserved(name))
      throw ParseError(t.pos, "'" + name + "' is a reserved word");
    return name;
  }

  void parse_type() {
    SourcePos pos = peek().pos;
    expect_kw("type");
    FiniteType t;
    t.pos = pos;
    t.name = fresh_ident("type name");
    expect(Tok::Eq, "'='");
    expect(Tok::LBrace, "'{'");
    t.elements.push_back(fresh_ident("element name"));
    while (accept(Tok::Comma))
      t.elements.push_back(fresh_ident("element name"));
    expect(Tok::RBrace, "'}'");
    prog_.types.push_back(std::move(t));
  }

  int type_ref() {
    Token t = peek();
    std::string name = ident("type name");
    int id = prog_.type_id(name);
    if (id < 0) throw ParseError(t.pos, "unknown type: " + name);
    return id;
  }

  Rational rational_lit() {
    Token n = expect(Tok::Int, "number");
    if (accept(Tok::Slash)) {
      Token d = expect(Tok::Int, "denominator");
      return Rational(BigInt(n.number), BigInt(d.number));
    }
    return Rational(n.number);
  }

  void parse_dist() {
    SourcePos pos = peek().pos;
    expect_kw("dist");
    DistDef d;
    d.pos = pos;
    d.name = fresh_ident("distribution name");
    expect(Tok::Eq, "'='");
    if (accept_kw("uniform")) {
      d.type_id = type_ref();
      int n = static_cast<int>(prog_.types[d.type_id].elements.size());
      d.weights.assign(n, Rational(BigInt(1), BigInt(n)));
    } else {
      expect(Tok::LBrace, "'{' or uniform");
      std::map<std::string, Rational> table;
      do {
        Token e = peek();
        std::string elem = ident("element name");
        expect(Tok::Colon, "':'");
        Rational w = rational_lit();
        if (!table.emplace(elem, w).second)
          throw ParseError(e.pos, "duplicate weight for " + elem);
      } while (accept(Tok::Comma));
      expect(Tok::RBrace, "'}'");
      // All elements must come from one type.
      for (const auto& [elem, w] : table) {
        auto el = prog_.find_elem(elem);
        if (!el) throw ParseError(pos, "unknown element: " + elem);
        if (d.type_id < 0) d.type_id = el->type;
        if (d.type_id != el->type)
          throw ParseError(pos, "weights span different types");
      }
      d.weights.assign(prog_.types[d.type_id].elements.size(), Rational(0));
      for (const auto& [elem, w] : table)
        d.weights[static_cast<std::size_t>(prog_.find_elem(elem)->index)] = w;
    }
    prog_.dists.push_back(std::move(d));
  }

  VarType parse_var_type() {
    VarType t;
    if (accept_kw("labeled")) {
      t.kind = VarType::Kind::Labeled;
      t.type_id = type_ref();
      return t;
    }
    if (accept_kw("map")) {
      t.kind = VarType::Kind::Map;
      t.key_type_id = type_ref();
      expect(Tok::Arrow, "'->'");
      expect_kw("labeled");
      t.type_id = type_ref();
      return t;
    }
    t.kind = VarType::Kind::Plain;
    t.type_id = type_ref();
    return t;
  }

  VarDecl parse_var_decl() {
    VarDecl d;
    d.pos = peek().pos;
    d.name = fresh_ident("variable name");
    expect(Tok::Colon, "':'");
    d.type = parse_var_type();
    return d;
  }

  void parse_module() {
    SourcePos pos = peek().pos;
    expect_kw("module");
    Module m;
    m.pos = pos;
    m.name = ident("module name");
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      if (accept_kw("var")) {
        m.globals.push_back(parse_var_decl());
        expect(Tok::Semi, "';'");
      } else if (at_kw("proc")) {
        m.procs.push_back(parse_proc());
      } else {
        throw ParseError(peek().pos, "expected var, proc, or '}'");
      }
    }
    prog_.modules.push_back(std::move(m));
  }

  Proc parse_proc() {
    Proc p;
    p.pos = peek().pos;
    expect_kw("proc");
    p.name = ident("procedure name");
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      do {
        p.params.push_back(parse_var_decl());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    if (accept(Tok::Colon)) p.ret_type_id = type_ref();
    expect(Tok::LBrace, "'{'");
    while (accept_kw("var")) {
      p.locals.push_back(parse_var_decl());
      expect(Tok::Semi, "';'");
    }
    p.body = parse_stmts_until_brace_or_return(&p);
    expect(Tok::RBrace, "'}'");
    if (p.ret && p.ret_type_id < 0)
      throw ParseError(p.pos,
                       "procedure " + p.name + " returns without a type");
    if (!p.ret && p.ret_type_id >= 0)
      throw ParseError(p.pos,
                       "procedure " + p.name + " declares a return type "
                       "but has no return");
    return p;
  }

  std::vector<CommandPtr> parse_stmts_until_brace_or_return(Proc* proc) {
    std::vector<CommandPtr> cmds;
    while (!at(Tok::RBrace)) {
      if (at_kw("return")) {
        if (!proc)
          throw ParseError(peek().pos, "return outside a procedure");
        take();
        proc->ret = parse_expr();
        expect(Tok::Semi, "';'");
        if (!at(Tok::RBrace))
          throw ParseError(peek().pos, "return must be the last statement");
        break;
      }
      cmds.push_back(parse_stmt(proc));
    }
    return cmds;
  }

  std::vector<CommandPtr> parse_block(Proc* proc) {
    expect(Tok::LBrace, "'{'");
    std::vector<CommandPtr> cmds;
    while (!at(Tok::RBrace)) cmds.push_back(parse_stmt(proc));
    expect(Tok::RBrace, "'}'");
    return cmds;
  }

  DistExpr parse_dist_expr() {
    SourcePos pos = peek().pos;
    if (accept_kw("uniform")) {
      DistExpr d;
      d.kind = DistExpr::Kind::Uniform;
      d.type_id = type_ref();
      return d;
    }
    if (accept_kw("point")) {
      expect(Tok::LParen, "'('");
      DistExpr d;
      d.kind = DistExpr::Kind::Point;
      d.point = parse_expr();
      expect(Tok::RParen, "')'");
      return d;
    }
    std::string name = ident("distribution");
    if (!prog_.find_dist(name))
      throw ParseError(pos, "unknown distribution: " + name);
    DistExpr d;
    d.kind = DistExpr::Kind::Named;
    d.name = name;
    return d;
  }

  CommandPtr parse_stmt(Proc* proc) {
    SourcePos pos = peek().pos;
    if (at_kw("return"))
      throw ParseError(pos,
                       "return is only allowed as a procedure's last "
                       "statement");
    if (accept_kw("skip")) {
      expect(Tok::Semi, "';'");
      return make_skip(pos);
    }
    if (accept_kw("if")) {
      ExprPtr cond = parse_expr();
      auto then_body = parse_block(proc);
      std::vector<CommandPtr> else_body;
      if (accept_kw("else")) else_body = parse_block(proc);
      return make_if(cond, std::move(then_body), std::move(else_body), pos);
    }
    if (accept_kw("while")) {
      ExprPtr cond = parse_expr();
      auto body = parse_block(proc);
      return make_while(cond, std::move(body), pos);
    }
    if (accept_kw("call")) {
      std::string callee = ident("procedure name");
      auto args = parse_args();
      expect(Tok::Semi, "';'");
      return make_call(std::nullopt, callee, std::move(args), pos);
    }
    // target-first statements
    LValue target = parse_lvalue();
    if (accept(Tok::Assign)) {
      ExprPtr rhs =
          accept_kw("empty") ? make_empty_map(pos) : parse_expr();
      expect(Tok::Semi, "';'");
      return make_assign(std::move(target), std::move(rhs), pos);
    }
    if (accept(Tok::Sample)) {
      DistExpr d = parse_dist_expr();
      expect(Tok::Semi, "';'");
      return make_sample(std::move(target), std::move(d), pos);
    }
    if (accept(Tok::SecSample)) {
      DistExpr d = parse_dist_expr();
      expect(Tok::Semi, "';'");
      return make_sec_sample(std::move(target), std::move(d), pos);
    }
    if (accept(Tok::SecRead)) {
      ExprPtr src = parse_expr();
      expect(Tok::Semi, "';'");
      return make_sec_read(std::move(target), std::move(src), pos);
    }
    if (accept(Tok::CallArrow)) {
      std::string callee = ident("procedure name");
      auto args = parse_args();
      expect(Tok::Semi, "';'");
      return make_call(std::move(target), callee, std::move(args), pos);
    }
    throw ParseError(peek().pos, "expected a statement operator");
  }

  LValue parse_lvalue() {
    LValue t;
    t.pos = peek().pos;
    t.name = ident("assignment target");
    if (accept(Tok::LBracket)) {
      t.key = parse_expr();
      expect(Tok::RBracket, "']'");
    }
    return t;
  }

  std::vector<ExprPtr> parse_args() {
    expect(Tok::LParen, "'('");
    std::vector<ExprPtr> args;
    if (!at(Tok::RParen)) {
      do {
        args.push_back(parse_expr());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  // -- expressions ---------------------------------------------------
  ExprPtr parse_expr() { return parse_conj(); }

  ExprPtr parse_conj() {
    ExprPtr e = parse_cmp();
    while (at(Tok::AndOp)) {
      SourcePos pos = take().pos;
      e = make_and(e, parse_cmp(), pos);
    }
    return e;
  }

  ExprPtr parse_cmp() {
    ExprPtr e = parse_prefix();
    if (at(Tok::Eq) || at(Tok::Neq)) {
      Token op = take();
      ExprPtr rhs = parse_prefix();
      ExprPtr eq = make_eq(e, rhs, op.pos);
      return op.kind == Tok::Eq ? eq : make_not(eq, op.pos);
    }
    return e;
  }

  ExprPtr parse_prefix() {
    if (at(Tok::Bang)) {
      SourcePos pos = take().pos;
      return make_not(parse_prefix(), pos);
    }
    if (at_kw("dom")) {
      SourcePos pos = take().pos;
      std::string map = ident("map name");
      return make_in_dom(map, parse_primary(), pos);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    SourcePos pos = peek().pos;
    if (accept(Tok::LParen)) {
      ExprPtr first = parse_expr();
      if (accept(Tok::Comma)) {
        ExprPtr second = parse_expr();
        expect(Tok::Comma, "','");
        ExprPtr third = parse_expr();
        expect(Tok::RParen, "')'");
        return make_triple(first, second, third, pos);
      }
      expect(Tok::RParen, "')'");
      return first;
    }
    if (accept_kw("bot")) return make_dist_atom(std::nullopt, pos);
    if (accept_kw("S")) return make_conf_atom(Conf::Secret, pos);
    if (accept_kw("L")) return make_conf_atom(Conf::Leaked, pos);
    if (at_kw("uniform") || at_kw("point"))
      return make_dist_atom(parse_dist_expr(), pos);
    for (int i = 1; i <= 3; ++i) {
      std::string pi = "pi" + std::to_string(i);
      if (accept_kw(pi.c_str())) {
        expect(Tok::LParen, "'('");
        ExprPtr inner = parse_expr();
        expect(Tok::RParen, "')'");
        return make_proj(i, inner, pos);
      }
    }
    std::string name = ident("expression");
    if (auto elem = prog_.find_elem(name)) return make_const(*elem, pos);
    if (prog_.find_dist(name)) {
      DistExpr d;
      d.kind = DistExpr::Kind::Named;
      d.name = name;
      return make_dist_atom(d, pos);
    }
    if (accept(Tok::LBracket)) {
      ExprPtr key = parse_expr();
      expect(Tok::RBracket, "']'");
      return make_map_lookup(name, key, pos);
    }
    return make_var(name, pos);
  }

  // -- assertions ----------------------------------------------------
  AssertionPtr parse_assertion() { return parse_implies(); }

  AssertionPtr parse_implies() {
    AssertionPtr a = parse_or();
    if (at(Tok::Implies)) {
      SourcePos pos = take().pos;
      return a_implies(a, parse_implies(), pos);
    }
    return a;
  }

  AssertionPtr parse_or() {
    AssertionPtr a = parse_and_a();
    while (at(Tok::OrOp)) {
      SourcePos pos = take().pos;
      a = a_or(a, parse_and_a(), pos);
    }
    return a;
  }

  AssertionPtr parse_and_a() {
    AssertionPtr a = parse_prefix_a();
    while (at(Tok::AndOp)) {
      SourcePos pos = take().pos;
      a = a_and(a, parse_prefix_a(), pos);
    }
    return a;
  }

  AssertionPtr parse_prefix_a() {
    if (at(Tok::Bang)) {
      SourcePos pos = take().pos;
      return a_not(parse_prefix_a(), pos);
    }
    if (at_kw("forall")) {
      SourcePos pos = take().pos;
      std::string var = ident("bound variable");
      expect(Tok::Colon, "':'");
      int type = type_ref();
      expect(Tok::Comma, "','");
      return a_forall(var, type, parse_implies(), pos);
    }
    return parse_atom_a();
  }

  Side parse_side_tag() {
    expect(Tok::LBrace, "'{'");
    Token n = expect(Tok::Int, "1 or 2");
    expect(Tok::RBrace, "'}'");
    if (n.number == 1) return Side::Left;
    if (n.number == 2) return Side::Right;
    throw ParseError(n.pos, "side tag must be 1 or 2");
  }

  AssertionPtr parse_atom_a() {
    SourcePos pos = peek().pos;
    if (accept_kw("true")) return a_true();
    if (accept_kw("false")) return a_false();
    if (at(Tok::Eq) && peek(1).kind == Tok::LBrace) {
      take();
      take();
      std::vector<std::string> names{ident("variable name")};
      while (accept(Tok::Comma)) names.push_back(ident("variable name"));
      expect(Tok::RBrace, "'}'");
      return a_var_eq(std::move(names), pos);
    }
    if (accept_kw("inv")) {
      expect(Tok::LParen, "'('");
      std::string m1 = ident("map name");
      expect(Tok::Comma, "','");
      std::string m2 = ident("map name");
      expect(Tok::Comma, "','");
      DistExpr d = parse_dist_expr();
      expect(Tok::RParen, "')'");
      return a_sec_inv(m1, m2, d, pos);
    }
    if (accept_kw("leaked")) {
      expect(Tok::LParen, "'('");
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "')'");
      Side s = parse_side_tag();
      return a_leaked(s, e, pos);
    }
    if (accept_kw("sampled")) {
      expect(Tok::LParen, "'('");
      ExprPtr e = parse_expr();
      expect(Tok::Comma, "','");
      DistExpr d = parse_dist_expr();
      expect(Tok::RParen, "')'");
      Side s = parse_side_tag();
      return a_sampled(s, e, d, pos);
    }
    // A parenthesized assertion or a side-tagged expression; try the
    // expression first and backtrack if no side tag follows.
    if (at(Tok::LParen)) {
      std::size_t m = mark();
      bool expr_ok = true;
      ExprPtr e;
      try {
        take();  // '('
        e = parse_expr();
        expect(Tok::RParen, "')'");
        if (!at(Tok::LBrace)) expr_ok = false;
      } catch (const ParseError&) {
        expr_ok = false;
      }
      if (expr_ok) return parse_sided_rel(e);
      rewind(m);
      expect(Tok::LParen, "'('");
      AssertionPtr a = parse_assertion();
      expect(Tok::RParen, "')'");
      return a;
    }
    return parse_sided_rel(parse_prefix());
  }

  AssertionPtr parse_sided_rel(ExprPtr e1) {
    SourcePos pos = peek().pos;
    Side s1 = parse_side_tag();
    if (at(Tok::Eq) || at(Tok::Neq)) {
      bool neq = take().kind == Tok::Neq;
      ExprPtr e2 = at(Tok::LParen) ? parse_paren_expr() : parse_prefix();
      Side s2 = parse_side_tag();
      return a_expr_rel(e1, s1, e2, s2, neq, pos);
    }
    if (at(Tok::LabelEq)) {
      take();
      ExprPtr e2 = at(Tok::LParen) ? parse_paren_expr() : parse_prefix();
      Side s2 = parse_side_tag();
      if (s1 != Side::Left || s2 != Side::Right)
        throw ParseError(pos, "label equality relates sides {1} and {2}");
      return a_label_eq_cross(e1, e2, pos);
    }
    return a_bool_at(s1, e1, pos);
  }

  ExprPtr parse_paren_expr() {
    expect(Tok::LParen, "'('");
    ExprPtr e = parse_expr();
    expect(Tok::RParen, "')'");
    return e;
  }

  // -- goals and proofs ------------------------------------------------
  GoalSide parse_goal_side() {
    GoalSide s;
    if (at(Tok::LBrace)) {
      take();
      while (!at(Tok::RBrace)) s.raw.push_back(parse_stmt(nullptr));
      take();
      return s;
    }
    s.is_call = true;
    s.module = ident("module name");
    expect(Tok::Dot, "'.'");
    s.proc = ident("procedure name");
    s.args = parse_args();
    return s;
  }

  void parse_goal() {
    SourcePos pos = peek().pos;
    expect_kw("goal");
    GoalDecl g;
    g.pos = pos;
    g.name = ident("goal name");
    if (accept_kw("over")) {
      while (at(Tok::Ident) && !at_kw("vars"))
        g.over_modules.push_back(ident("module name"));
      if (g.over_modules.empty())
        throw ParseError(peek().pos, "expected module names after over");
    }
    if (accept_kw("vars")) {
      expect(Tok::LParen, "'('");
      do {
        g.extra_vars.push_back(parse_var_decl());
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
    expect(Tok::Colon, "':'");
    g.left = parse_goal_side();
    expect(Tok::Tilde, "'~'");
    g.right = parse_goal_side();
    expect(Tok::Colon, "':'");
    g.pre = parse_assertion();
    expect(Tok::FatArrow, "'=>'");
    g.post = parse_assertion();
    prog_.goals.push_back(std::move(g));
  }

  void parse_proof() {
    SourcePos pos = peek().pos;
    expect_kw("proof");
    ProofScript s;
    s.pos = pos;
    s.goal_name = ident("goal name");
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      TacticCall t;
      t.pos = peek().pos;
      t.name = ident("tactic name");
      if (t.name == "declassify" || t.name == "secrnd" ||
          t.name == "case" || t.name == "swap" || t.name == "inline") {
        std::string side = ident("left or right");
        if (side == "left")
          t.side = Side::Left;
        else if (side == "right")
          t.side = Side::Right;
        else
          throw ParseError(t.pos, "expected left or right after " + t.name);
      }
      if (t.name == "swap") {
        t.ints.push_back(static_cast<int>(expect(Tok::Int, "index").number));
        t.ints.push_back(static_cast<int>(expect(Tok::Int, "index").number));
      } else if (t.name == "seq") {
        t.ints.push_back(static_cast<int>(expect(Tok::Int, "index").number));
        expect(Tok::LBrace, "'{'");
        t.assertion = parse_assertion();
        expect(Tok::RBrace, "'}'");
      } else if (t.name == "case") {
        t.exprs.push_back(parse_primary());
      } else if (t.name == "secrndasgn") {
        t.idents.push_back(ident("map name"));
        t.exprs.push_back(parse_primary());
        t.idents.push_back(ident("fresh variable"));
      } else if (t.name == "inline") {
        static const std::set<std::string> kTactics = {
            "declassify", "secrnd", "secrndasgn", "assign", "rnd",
            "swap",       "seq",    "case",       "inline", "skip",
            "auto",       "done"};
        if (at(Tok::Ident) && !kTactics.count(peek().text))
          t.idents.push_back(ident("procedure name"));
      }
      s.steps.push_back(std::move(t));
    }
    prog_.scripts.push_back(std::move(s));
  }

  Lexer lex_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Program prog_;
};

}  // namespace

Program parse_program(const std::string& text) {
  Parser p(text);
  return p.parse();
}

ExprPtr parse_expr_text(const Program& prog, const std::string& text) {
  Parser p(text);
  return p.parse_expr_entry(prog);
}

}  // namespace plw
