#include "ibd/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>

namespace ibd {

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

static ExprPtr node(NodeType t) {
  auto e = std::make_shared<Expr>();
  e->type = t;
  return e;
}

ExprPtr rat(Rational r) {
  if (r < Rational(0)) return neg(rat(-r));
  auto e = std::make_shared<Expr>();
  e->type = NodeType::Rat;
  e->rat = r;
  return e;
}

ExprPtr dec(double v) {
  if (v < 0.0) return neg(dec(-v));
  auto e = std::make_shared<Expr>();
  e->type = NodeType::Dec;
  e->dec = (v == 0.0) ? 0.0 : v;  // normalize -0.0
  return e;
}

ExprPtr pi_const() { return node(NodeType::Pi); }
ExprPtr e_const() { return node(NodeType::E); }
ExprPtr i_const() { return node(NodeType::I); }

ExprPtr var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->type = NodeType::Var;
  e->var = std::move(name);
  return e;
}

static ExprPtr binary(NodeType t, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->type = t;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->type = NodeType::Neg;
  e->kids = {std::move(a)};
  return e;
}

ExprPtr add(ExprPtr a, ExprPtr b) { return binary(NodeType::Add, a, b); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return binary(NodeType::Sub, a, b); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return binary(NodeType::Mul, a, b); }

ExprPtr div(ExprPtr a, ExprPtr b) {
  // integer/integer is an exact rational literal, mirroring the parser fold
  if (a->type == NodeType::Rat && b->type == NodeType::Rat)
    return rat(a->rat / b->rat);
  return binary(NodeType::Div, a, b);
}

ExprPtr pow(ExprPtr a, ExprPtr b) { return binary(NodeType::Pow, a, b); }

ExprPtr call(Fn f, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->type = NodeType::Call;
  e->fn = f;
  e->kids = std::move(args);
  return e;
}

bool equals(const ExprPtr& a, const ExprPtr& b) {
  if (a->type != b->type) return false;
  switch (a->type) {
    case NodeType::Rat: return a->rat == b->rat;
    case NodeType::Dec: return a->dec == b->dec;
    case NodeType::Pi:
    case NodeType::E:
    case NodeType::I: return true;
    case NodeType::Var: return a->var == b->var;
    case NodeType::Call:
      if (a->fn != b->fn) return false;
      break;
    default: break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!equals(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// lexer + recursive-descent parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { IntLit, DecLit, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End } kind;
  long long ival = 0;
  double dval = 0.0;
  std::string text;
  size_t off = 0;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0, n = s.size();
  while (i < n) {
    char c = s[i];
    if (std::isspace((unsigned char)c)) {
      ++i;
      continue;
    }
    Token t;
    t.off = i;
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      bool is_dec = false;
      while (j < n && std::isdigit((unsigned char)s[j])) ++j;
      if (j < n && s[j] == '.') {
        is_dec = true;
        ++j;
        while (j < n && std::isdigit((unsigned char)s[j])) ++j;
      }
      if (j < n && (s[j] == 'e' || s[j] == 'E')) {
        size_t k = j + 1;
        if (k < n && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < n && std::isdigit((unsigned char)s[k])) {
          is_dec = true;
          j = k;
          while (j < n && std::isdigit((unsigned char)s[j])) ++j;
        }
      }
      t.text = s.substr(i, j - i);
      if (is_dec) {
        t.kind = Token::DecLit;
        t.dval = std::strtod(t.text.c_str(), nullptr);
      } else {
        t.kind = Token::IntLit;
        try {
          t.ival = std::stoll(t.text);
        } catch (...) {
          throw ParseError("integer literal out of range", i);
        }
      }
      i = j;
    } else if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
      t.kind = Token::Ident;
      t.text = s.substr(i, j - i);
      i = j;
    } else {
      switch (c) {
        case '+': t.kind = Token::Plus; break;
        case '-': t.kind = Token::Minus; break;
        case '*': t.kind = Token::Star; break;
        case '/': t.kind = Token::Slash; break;
        case '^': t.kind = Token::Caret; break;
        case '(': t.kind = Token::LParen; break;
        case ')': t.kind = Token::RParen; break;
        case ',': t.kind = Token::Comma; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
      ++i;
    }
    out.push_back(t);
  }
  Token end;
  end.kind = Token::End;
  end.off = n;
  out.push_back(end);
  return out;
}

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  Token take() { return toks[pos++]; }
  bool at(Token::Kind k) const { return toks[pos].kind == k; }
  void expect(Token::Kind k, const char* what) {
    if (!at(k)) throw ParseError(std::string("expected ") + what, peek().off);
    ++pos;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (at(Token::Plus) || at(Token::Minus)) {
      bool plus = at(Token::Plus);
      take();
      ExprPtr r = parse_term();
      e = plus ? add(e, r) : sub(e, r);
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (at(Token::Star) || at(Token::Slash)) {
      bool star = at(Token::Star);
      size_t off = peek().off;
      take();
      ExprPtr r = parse_factor();
      if (star) {
        e = mul(e, r);
      } else {
        if (e->type == NodeType::Rat && r->type == NodeType::Rat) {
          if (r->rat.is_zero())
            throw ParseError("division by zero in rational literal", off);
          e = rat(e->rat / r->rat);
        } else {
          e = binary(NodeType::Div, e, r);
        }
      }
    }
    return e;
  }

  ExprPtr parse_factor() {
    if (at(Token::Minus)) {
      take();
      return neg(parse_factor());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (at(Token::Caret)) {
      take();
      if (at(Token::Minus))
        throw ParseError(
            "unary minus may not follow '^'; parenthesize the exponent",
            peek().off);
      ExprPtr e = parse_power();  // right-associative
      return pow(base, e);
    }
    return base;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::IntLit: {
        Token tok = take();
        return rat(Rational(tok.ival));
      }
      case Token::DecLit: {
        Token tok = take();
        return dec(tok.dval);
      }
      case Token::LParen: {
        take();
        ExprPtr e = parse_expr();
        expect(Token::RParen, "')'");
        return e;
      }
      case Token::Ident: {
        Token tok = take();
        if (at(Token::LParen)) {
          static const std::map<std::string, std::pair<Fn, size_t>> fns = {
              {"sin", {Fn::Sin, 1}},     {"cos", {Fn::Cos, 1}},
              {"exp", {Fn::Exp, 1}},     {"log", {Fn::Log, 1}},
              {"sqrt", {Fn::Sqrt, 1}},   {"gamma", {Fn::Gamma, 1}},
              {"zeta", {Fn::Zeta, 1}},   {"hzeta", {Fn::HZeta, 2}},
              {"H", {Fn::Heaviside, 1}}};
          auto it = fns.find(tok.text);
          if (it == fns.end())
            throw ParseError("unknown function '" + tok.text + "'", tok.off);
          take();  // '('
          std::vector<ExprPtr> args;
          if (!at(Token::RParen)) {
            args.push_back(parse_expr());
            while (at(Token::Comma)) {
              take();
              args.push_back(parse_expr());
            }
          }
          expect(Token::RParen, "')'");
          if (args.size() != it->second.second)
            throw ParseError("function '" + tok.text + "' expects " +
                                 std::to_string(it->second.second) +
                                 " argument(s)",
                             tok.off);
          return call(it->second.first, std::move(args));
        }
        if (tok.text == "pi") return pi_const();
        if (tok.text == "e") return e_const();
        if (tok.text == "i") return i_const();
        return var(tok.text);
      }
      default:
        throw ParseError("expected a number, name, or '('", t.off);
    }
  }
};

}  // namespace

ExprPtr parse(const std::string& src) {
  Parser p;
  p.toks = lex(src);
  ExprPtr e = p.parse_expr();
  if (!p.at(Token::End)) throw ParseError("trailing input", p.peek().off);
  return e;
}

// ---------------------------------------------------------------------------
// printer (minimal parentheses; reparse gives a structurally equal tree)
// ---------------------------------------------------------------------------

namespace {

int prec_of(const ExprPtr& e) {
  switch (e->type) {
    case NodeType::Add:
    case NodeType::Sub: return 1;
    case NodeType::Mul:
    case NodeType::Div: return 2;
    case NodeType::Neg: return 3;
    case NodeType::Pow: return 4;
    case NodeType::Rat: return e->rat.is_integer() ? 5 : 2;  // "p/q" is a quotient
    default: return 5;
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Gamma: return "gamma";
    case Fn::Zeta: return "zeta";
    case Fn::HZeta: return "hzeta";
    case Fn::Heaviside: return "H";
  }
  return "?";
}

void print_rec(const ExprPtr& e, int min_prec, std::string& out) {
  int p = prec_of(e);
  bool paren = p < min_prec;
  if (paren) out += '(';
  switch (e->type) {
    case NodeType::Rat: out += e->rat.str(); break;
    case NodeType::Dec: out += fmt_double(e->dec); break;
    case NodeType::Pi: out += "pi"; break;
    case NodeType::E: out += "e"; break;
    case NodeType::I: out += "i"; break;
    case NodeType::Var: out += e->var; break;
    case NodeType::Neg:
      out += '-';
      print_rec(e->kids[0], 3, out);
      break;
    case NodeType::Add:
      print_rec(e->kids[0], 1, out);
      out += '+';
      print_rec(e->kids[1], 2, out);
      break;
    case NodeType::Sub:
      print_rec(e->kids[0], 1, out);
      out += '-';
      print_rec(e->kids[1], 2, out);
      break;
    case NodeType::Mul:
      print_rec(e->kids[0], 2, out);
      out += '*';
      print_rec(e->kids[1], 3, out);
      break;
    case NodeType::Div:
      print_rec(e->kids[0], 2, out);
      out += '/';
      print_rec(e->kids[1], 3, out);
      break;
    case NodeType::Pow:
      print_rec(e->kids[0], 5, out);
      out += '^';
      print_rec(e->kids[1], 4, out);
      break;
    case NodeType::Call: {
      out += fn_name(e->fn);
      out += '(';
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) out += ',';
        print_rec(e->kids[i], 1, out);
      }
      out += ')';
      break;
    }
  }
  if (paren) out += ')';
}

}  // namespace

std::string print(const ExprPtr& e) {
  std::string out;
  print_rec(e, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

static bool is_near_int(double x) { return std::abs(x - std::round(x)) == 0.0; }

cplx eval(const ExprPtr& e, const VarMap& vars, const EvalOpts& opts) {
  switch (e->type) {
    case NodeType::Rat: return cplx(e->rat.to_double(), 0.0);
    case NodeType::Dec: return cplx(e->dec, 0.0);
    case NodeType::Pi: return cplx(M_PI, 0.0);
    case NodeType::E: return cplx(M_E, 0.0);
    case NodeType::I: return cplx(0.0, 1.0);
    case NodeType::Var: {
      auto it = vars.find(e->var);
      if (it == vars.end()) throw EvalError("unbound variable '" + e->var + "'");
      return it->second;
    }
    case NodeType::Neg: return -eval(e->kids[0], vars, opts);
    case NodeType::Add: return eval(e->kids[0], vars, opts) + eval(e->kids[1], vars, opts);
    case NodeType::Sub: return eval(e->kids[0], vars, opts) - eval(e->kids[1], vars, opts);
    case NodeType::Mul: return eval(e->kids[0], vars, opts) * eval(e->kids[1], vars, opts);
    case NodeType::Div: {
      cplx d = eval(e->kids[1], vars, opts);
      if (d == cplx(0.0, 0.0)) throw EvalError("division by zero");
      return eval(e->kids[0], vars, opts) / d;
    }
    case NodeType::Pow: {
      cplx a = eval(e->kids[0], vars, opts);
      cplx b = eval(e->kids[1], vars, opts);
      if (b.imag() == 0.0 && is_near_int(b.real()) && std::abs(b.real()) <= 1e6) {
        long long m = (long long)std::llround(b.real());
        if (m < 0 && a == cplx(0.0, 0.0)) throw EvalError("zero to a negative power");
        return ipow(a, m);
      }
      if (a == cplx(0.0, 0.0)) {
        if (b.real() > 0.0) return cplx(0.0, 0.0);
        throw EvalError("zero base with non-positive exponent");
      }
      return std::exp(b * std::log(a));
    }
    case NodeType::Call: {
      cplx a = eval(e->kids[0], vars, opts);
      switch (e->fn) {
        case Fn::Sin: return std::sin(a);
        case Fn::Cos: return std::cos(a);
        case Fn::Exp: return std::exp(a);
        case Fn::Log:
          if (a == cplx(0.0, 0.0)) throw EvalError("log of zero");
          if (a.imag() == 0.0) a = cplx(a.real(), 0.0);  // principal branch from above
          return std::log(a);
        case Fn::Sqrt: return std::sqrt(a);
        case Fn::Gamma:
          if (a.imag() == 0.0 && a.real() <= 0.0 && is_near_int(a.real()))
            throw EvalError("gamma pole at a non-positive integer");
          return gamma_cplx(a);
        case Fn::Zeta:
          if (std::abs(a.imag()) > 1e-12) throw EvalError("zeta requires a real argument");
          return cplx(hurwitz_zeta(a.real(), 1.0), 0.0);
        case Fn::HZeta: {
          cplx s2 = eval(e->kids[1], vars, opts);
          if (std::abs(a.imag()) > 1e-12 || std::abs(s2.imag()) > 1e-12)
            throw EvalError("hzeta requires real arguments");
          return cplx(hurwitz_zeta(a.real(), s2.real()), 0.0);
        }
        case Fn::Heaviside:
          if (std::abs(a.imag()) > 1e-12) throw EvalError("H requires a real argument");
          return cplx(heaviside(a.real(), opts.h0), 0.0);
      }
      throw EvalError("unknown function");
    }
  }
  throw EvalError("malformed expression node");
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

static bool depends_on(const ExprPtr& e, const std::string& v) {
  if (e->type == NodeType::Var) return e->var == v;
  for (const auto& k : e->kids)
    if (depends_on(k, v)) return true;
  return false;
}

static bool is_zero_node(const ExprPtr& e) {
  return e->type == NodeType::Rat && e->rat.is_zero();
}
static bool is_one_node(const ExprPtr& e) {
  return e->type == NodeType::Rat && e->rat == Rational(1);
}

static ExprPtr mk_add(ExprPtr a, ExprPtr b) {
  if (is_zero_node(a)) return b;
  if (is_zero_node(b)) return a;
  return add(a, b);
}
static ExprPtr mk_sub(ExprPtr a, ExprPtr b) {
  if (is_zero_node(b)) return a;
  if (is_zero_node(a)) return neg(b);
  if (a->type == NodeType::Rat && b->type == NodeType::Rat) return rat(a->rat - b->rat);
  return sub(a, b);
}
static ExprPtr mk_mul(ExprPtr a, ExprPtr b) {
  if (is_zero_node(a) || is_zero_node(b)) return rat(0);
  if (is_one_node(a)) return b;
  if (is_one_node(b)) return a;
  return mul(a, b);
}
static ExprPtr mk_div(ExprPtr a, ExprPtr b) {
  if (is_zero_node(a)) return rat(0);
  if (is_one_node(b)) return a;
  return div(a, b);
}

ExprPtr diff(const ExprPtr& e, const std::string& v) {
  switch (e->type) {
    case NodeType::Rat:
    case NodeType::Dec:
    case NodeType::Pi:
    case NodeType::E:
    case NodeType::I: return rat(0);
    case NodeType::Var: return e->var == v ? rat(1) : rat(0);
    case NodeType::Neg: {
      ExprPtr d = diff(e->kids[0], v);
      return is_zero_node(d) ? d : neg(d);
    }
    case NodeType::Add: return mk_add(diff(e->kids[0], v), diff(e->kids[1], v));
    case NodeType::Sub: return mk_sub(diff(e->kids[0], v), diff(e->kids[1], v));
    case NodeType::Mul:
      return mk_add(mk_mul(diff(e->kids[0], v), e->kids[1]),
                    mk_mul(e->kids[0], diff(e->kids[1], v)));
    case NodeType::Div:
      return mk_div(mk_sub(mk_mul(diff(e->kids[0], v), e->kids[1]),
                           mk_mul(e->kids[0], diff(e->kids[1], v))),
                    pow(e->kids[1], rat(2)));
    case NodeType::Pow: {
      const ExprPtr& f = e->kids[0];
      const ExprPtr& g = e->kids[1];
      ExprPtr df = diff(f, v);
      if (!depends_on(g, v)) {
        if (is_zero_node(df)) return rat(0);
        ExprPtr gm1 = mk_sub(g, rat(1));
        ExprPtr p = is_zero_node(gm1) ? rat(1)
                    : is_one_node(gm1) ? f
                                       : pow(f, gm1);
        return mk_mul(mk_mul(g, p), df);
      }
      // f^g = exp(g log f):  f^g * (g' log f + g f'/f)
      ExprPtr dg = diff(g, v);
      return mk_mul(e, mk_add(mk_mul(dg, call(Fn::Log, {f})),
                              mk_mul(g, mk_div(df, f))));
    }
    case NodeType::Call: {
      const ExprPtr& a = e->kids[0];
      if (!depends_on(e, v)) return rat(0);
      ExprPtr da = diff(a, v);
      switch (e->fn) {
        case Fn::Sin: return mk_mul(call(Fn::Cos, {a}), da);
        case Fn::Cos: return neg(mk_mul(call(Fn::Sin, {a}), da));
        case Fn::Exp: return mk_mul(e, da);
        case Fn::Log: return mk_div(da, a);
        case Fn::Sqrt: return mk_div(da, mk_mul(rat(2), call(Fn::Sqrt, {a})));
        case Fn::Gamma:
        case Fn::Zeta:
        case Fn::HZeta:
        case Fn::Heaviside:
          throw DiffError(std::string("'") + fn_name(e->fn) +
                          "' is not differentiable here");
      }
      throw DiffError("unknown function");
    }
  }
  throw DiffError("malformed expression node");
}

// ---------------------------------------------------------------------------
// Taylor coefficients through truncated power-series arithmetic
// ---------------------------------------------------------------------------

namespace {

struct Series {
  std::vector<cplx> c;  // coefficients 0..work_order
  int valid;            // prefix length that is trustworthy
};

struct SeriesCtx {
  std::string v;
  cplx center;
  int work;  // working order
};

Series s_const(cplx a, const SeriesCtx& cx) {
  Series s;
  s.c.assign(cx.work + 1, cplx(0.0, 0.0));
  s.c[0] = a;
  s.valid = cx.work + 1;
  return s;
}

Series s_add(const Series& a, const Series& b, int sign) {
  Series r = a;
  r.valid = std::min(a.valid, b.valid);
  for (size_t i = 0; i < r.c.size(); ++i)
    r.c[i] = a.c[i] + (sign > 0 ? b.c[i] : -b.c[i]);
  return r;
}

Series s_neg(const Series& a) {
  Series r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

Series s_mul(const Series& a, const Series& b) {
  Series r;
  int n = (int)a.c.size();
  r.c.assign(n, cplx(0.0, 0.0));
  r.valid = std::min(a.valid, b.valid);
  for (int i = 0; i < n; ++i) {
    if (a.c[i] == cplx(0.0, 0.0)) continue;
    for (int j = 0; i + j < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

int valuation(const Series& s) {
  for (int i = 0; i < s.valid; ++i)
    if (s.c[i] != cplx(0.0, 0.0)) return i;
  return s.valid;
}

Series s_div(const Series& num, const Series& den) {
  int vd = valuation(den);
  if (vd >= den.valid) throw TaylorError("division by the zero series");
  double num_scale = 0.0;
  for (const auto& x : num.c) num_scale = std::max(num_scale, std::abs(x));
  for (int i = 0; i < vd; ++i)
    if (std::abs(num.c[i]) > 1e-13 * std::max(1.0, num_scale))
      throw TaylorError("pole at the expansion center");
  int n = (int)num.c.size();
  int valid = std::min(num.valid, den.valid) - vd;
  if (valid <= 0) throw TaylorError("pole order exhausts the working order");
  Series r;
  r.c.assign(n, cplx(0.0, 0.0));
  r.valid = valid;
  // shifted division: q[k] = (num[k+vd] - sum_{j<k} q[j] den[k-j+vd]) / den[vd]
  for (int k = 0; k + vd < n; ++k) {
    cplx acc = num.c[k + vd];
    for (int j = 0; j < k; ++j) acc -= r.c[j] * den.c[k - j + vd];
    r.c[k] = acc / den.c[vd];
  }
  return r;
}

// outer analytic function given by Taylor coefficients d (about inner's
// constant term), composed with tilde = inner - inner(0), val(tilde) >= 1
Series s_compose(const std::vector<cplx>& d, const Series& tilde) {
  int n = (int)tilde.c.size();
  Series r;
  r.c.assign(n, cplx(0.0, 0.0));
  r.valid = tilde.valid;
  int L = (int)d.size() - 1;
  r.c[0] = d[L];
  for (int k = L - 1; k >= 0; --k) {
    r = s_mul(r, tilde);
    r.c[0] += d[k];
    r.valid = tilde.valid;
  }
  return r;
}

Series s_ipow(const Series& a, long long m, const SeriesCtx& cx) {
  if (m < 0) return s_div(s_const(cplx(1.0, 0.0), cx), s_ipow(a, -m, cx));
  Series r = s_const(cplx(1.0, 0.0), cx);
  r.valid = a.valid;
  Series base = a;
  while (m) {
    if (m & 1) r = s_mul(r, base);
    if (m > 1) base = s_mul(base, base);
    m >>= 1;
  }
  return r;
}

bool const_eval(const ExprPtr& e, cplx& out) {
  try {
    out = eval(e, {}, {});
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

Series series_of(const ExprPtr& e, const SeriesCtx& cx) {
  switch (e->type) {
    case NodeType::Rat: return s_const(cplx(e->rat.to_double(), 0.0), cx);
    case NodeType::Dec: return s_const(cplx(e->dec, 0.0), cx);
    case NodeType::Pi: return s_const(cplx(M_PI, 0.0), cx);
    case NodeType::E: return s_const(cplx(M_E, 0.0), cx);
    case NodeType::I: return s_const(cplx(0.0, 1.0), cx);
    case NodeType::Var: {
      if (e->var != cx.v)
        throw TaylorError("free variable '" + e->var + "' in series expansion");
      Series s = s_const(cx.center, cx);
      if (cx.work >= 1) s.c[1] = cplx(1.0, 0.0);
      return s;
    }
    case NodeType::Neg: return s_neg(series_of(e->kids[0], cx));
    case NodeType::Add: return s_add(series_of(e->kids[0], cx), series_of(e->kids[1], cx), +1);
    case NodeType::Sub: return s_add(series_of(e->kids[0], cx), series_of(e->kids[1], cx), -1);
    case NodeType::Mul: return s_mul(series_of(e->kids[0], cx), series_of(e->kids[1], cx));
    case NodeType::Div: return s_div(series_of(e->kids[0], cx), series_of(e->kids[1], cx));
    case NodeType::Pow: {
      cplx kappa;
      if (!const_eval(e->kids[1], kappa))
        throw TaylorError("exponent must be constant in series expansion");
      Series base = series_of(e->kids[0], cx);
      if (kappa.imag() == 0.0 && is_near_int(kappa.real()) && std::abs(kappa.real()) <= 64)
        return s_ipow(base, (long long)std::llround(kappa.real()), cx);
      cplx a0 = base.c[0];
      if (a0 == cplx(0.0, 0.0))
        throw TaylorError("branch point of a fractional power at the center");
      Series tilde = base;
      tilde.c[0] = cplx(0.0, 0.0);
      std::vector<cplx> d(base.valid);
      cplx binom_k(1.0, 0.0);
      cplx a0p = std::exp(kappa * std::log(a0));
      for (int k = 0; k < (int)d.size(); ++k) {
        d[k] = a0p * binom_k;
        binom_k *= (kappa - (double)k) / (double)(k + 1);
        a0p /= a0;
        // d[k+1] = a0^{kappa-k-1} C(kappa,k+1): maintained incrementally
      }
      return s_compose(d, tilde);
    }
    case NodeType::Call: {
      if (e->fn == Fn::Gamma || e->fn == Fn::Zeta || e->fn == Fn::HZeta ||
          e->fn == Fn::Heaviside)
        throw TaylorError(std::string("'") + fn_name(e->fn) +
                          "' is not supported in series expansion");
      Series a = series_of(e->kids[0], cx);
      cplx a0 = a.c[0];
      Series tilde = a;
      tilde.c[0] = cplx(0.0, 0.0);
      int L = a.valid - 1;
      std::vector<cplx> d(L + 1);
      switch (e->fn) {
        case Fn::Exp: {
          cplx f = std::exp(a0);
          double fact = 1.0;
          for (int k = 0; k <= L; ++k) {
            d[k] = f / fact;
            fact *= (double)(k + 1);
          }
          break;
        }
        case Fn::Sin:
        case Fn::Cos: {
          cplx s0 = std::sin(a0), c0 = std::cos(a0);
          cplx cycle[4];
          if (e->fn == Fn::Sin) {
            cycle[0] = s0; cycle[1] = c0; cycle[2] = -s0; cycle[3] = -c0;
          } else {
            cycle[0] = c0; cycle[1] = -s0; cycle[2] = -c0; cycle[3] = s0;
          }
          double fact = 1.0;
          for (int k = 0; k <= L; ++k) {
            d[k] = cycle[k % 4] / fact;
            fact *= (double)(k + 1);
          }
          break;
        }
        case Fn::Log: {
          if (a0 == cplx(0.0, 0.0))
            throw TaylorError("branch point of log at the center");
          d[0] = std::log(a0);
          cplx p(1.0, 0.0);
          for (int k = 1; k <= L; ++k) {
            p /= a0;
            d[k] = (k % 2 == 1 ? p : -p) / (double)k;
          }
          break;
        }
        case Fn::Sqrt: {
          if (a0 == cplx(0.0, 0.0))
            throw TaylorError("branch point of sqrt at the center");
          cplx r0 = std::sqrt(a0);
          cplx coeff = r0;
          for (int k = 0; k <= L; ++k) {
            d[k] = coeff;
            coeff *= (cplx(0.5, 0.0) - (double)k) / ((double)(k + 1) * a0);
          }
          break;
        }
        default: throw TaylorError("unreachable");
      }
      return s_compose(d, tilde);
    }
  }
  throw TaylorError("malformed expression node");
}

}  // namespace

std::vector<cplx> taylor_coeffs(const ExprPtr& e, const std::string& v,
                                cplx center, int order) {
  if (order < 0) throw TaylorError("order must be non-negative");
  SeriesCtx cx{v, center, order + 16};
  Series s = series_of(e, cx);
  if (s.valid < order + 1)
    throw TaylorError("pole order exhausts the working order");
  return std::vector<cplx>(s.c.begin(), s.c.begin() + order + 1);
}

// ---------------------------------------------------------------------------
// ExpPoly
// ---------------------------------------------------------------------------

cplx ExpPoly::eval(double x) const {
  cplx acc(0.0, 0.0);
  for (const auto& t : terms)
    acc += t.c * ipow(cplx(x, 0.0), t.n) * std::exp(-t.b * x);
  return acc;
}

ExpPoly ExpPoly::derivative() const {
  ExpPoly d;
  for (const auto& t : terms) {
    if (t.n >= 1) d.terms.push_back({t.c * (double)t.n, t.b, t.n - 1});
    d.terms.push_back({-t.c * t.b, t.b, t.n});
  }
  return normalize(d);
}

ExpPoly normalize(ExpPoly p) {
  std::sort(p.terms.begin(), p.terms.end(), [](const ExpPoly::Term& a, const ExpPoly::Term& b) {
    if (a.b != b.b) return a.b < b.b;
    return a.n < b.n;
  });
  ExpPoly out;
  for (const auto& t : p.terms) {
    if (!out.terms.empty() && std::abs(out.terms.back().b - t.b) <= 1e-12 &&
        out.terms.back().n == t.n) {
      out.terms.back().c += t.c;
    } else {
      out.terms.push_back(t);
    }
  }
  out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                 [](const ExpPoly::Term& t) {
                                   return t.c == cplx(0.0, 0.0);
                                 }),
                  out.terms.end());
  return out;
}

ExpPoly mul(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly r;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms)
      r.terms.push_back({ta.c * tb.c, ta.b + tb.b, ta.n + tb.n});
  return normalize(r);
}

ExprPtr num_expr(double x) {
  if (x < 0.0) return neg(num_expr(-x));
  if (x == std::floor(x) && x <= 1e15) return rat((long long)x);
  return dec(x);
}

ExprPtr cplx_expr(cplx c) {
  if (c.imag() == 0.0) return num_expr(c.real());
  ExprPtr im = mul(num_expr(c.imag()), i_const());
  if (c.real() == 0.0) return im;
  return add(num_expr(c.real()), im);
}

ExprPtr to_expr(const ExpPoly& p, const std::string& v) {
  if (p.terms.empty()) return rat(0);
  ExprPtr acc;
  for (const auto& t : p.terms) {
    ExprPtr piece = call(Fn::Exp, {neg(mul(num_expr(t.b), var(v)))});
    if (t.n > 0) piece = mul(pow(var(v), rat(t.n)), piece);
    if (!(t.c == cplx(1.0, 0.0))) piece = mul(cplx_expr(t.c), piece);
    acc = acc ? add(acc, piece) : piece;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// ExpPoly classifier
// ---------------------------------------------------------------------------

namespace {

// finite sum of rate -> polynomial coefficient vector, rates complex while
// collecting, validated to negative reals at the end
struct RatePoly {
  std::vector<std::pair<cplx, std::vector<cplx>>> by_rate;
};

void rp_accum(RatePoly& acc, cplx rate, const std::vector<cplx>& poly) {
  for (auto& kv : acc.by_rate) {
    if (std::abs(kv.first - rate) <= 1e-12) {
      if (kv.second.size() < poly.size()) kv.second.resize(poly.size(), cplx(0.0, 0.0));
      for (size_t i = 0; i < poly.size(); ++i) kv.second[i] += poly[i];
      return;
    }
  }
  acc.by_rate.emplace_back(rate, poly);
}

RatePoly rp_mul(const RatePoly& a, const RatePoly& b) {
  RatePoly r;
  for (const auto& ka : a.by_rate)
    for (const auto& kb : b.by_rate) {
      std::vector<cplx> conv(ka.second.size() + kb.second.size() - 1, cplx(0.0, 0.0));
      for (size_t i = 0; i < ka.second.size(); ++i)
        for (size_t j = 0; j < kb.second.size(); ++j)
          conv[i + j] += ka.second[i] * kb.second[j];
      rp_accum(r, ka.first + kb.first, conv);
    }
  return r;
}

void rp_scale(RatePoly& a, cplx s) {
  for (auto& kv : a.by_rate)
    for (auto& c : kv.second) c *= s;
}

// arg = alpha*v + beta with constant alpha, beta; false if not affine
bool collect_affine(const ExprPtr& e, const std::string& v, cplx& alpha, cplx& beta);

bool affine_const(const ExprPtr& e, cplx& out) { return const_eval(e, out); }

bool collect_affine(const ExprPtr& e, const std::string& v, cplx& alpha, cplx& beta) {
  if (!depends_on(e, v)) {
    alpha = cplx(0.0, 0.0);
    return affine_const(e, beta);
  }
  switch (e->type) {
    case NodeType::Var:
      alpha = cplx(1.0, 0.0);
      beta = cplx(0.0, 0.0);
      return true;
    case NodeType::Neg: {
      if (!collect_affine(e->kids[0], v, alpha, beta)) return false;
      alpha = -alpha;
      beta = -beta;
      return true;
    }
    case NodeType::Add:
    case NodeType::Sub: {
      cplx a1, b1, a2, b2;
      if (!collect_affine(e->kids[0], v, a1, b1)) return false;
      if (!collect_affine(e->kids[1], v, a2, b2)) return false;
      if (e->type == NodeType::Add) {
        alpha = a1 + a2;
        beta = b1 + b2;
      } else {
        alpha = a1 - a2;
        beta = b1 - b2;
      }
      return true;
    }
    case NodeType::Mul: {
      cplx k;
      if (!depends_on(e->kids[0], v) && affine_const(e->kids[0], k)) {
        if (!collect_affine(e->kids[1], v, alpha, beta)) return false;
        alpha *= k;
        beta *= k;
        return true;
      }
      if (!depends_on(e->kids[1], v) && affine_const(e->kids[1], k)) {
        if (!collect_affine(e->kids[0], v, alpha, beta)) return false;
        alpha *= k;
        beta *= k;
        return true;
      }
      return false;
    }
    case NodeType::Div: {
      cplx k;
      if (!depends_on(e->kids[1], v) && affine_const(e->kids[1], k) && k != cplx(0.0, 0.0)) {
        if (!collect_affine(e->kids[0], v, alpha, beta)) return false;
        alpha /= k;
        beta /= k;
        return true;
      }
      return false;
    }
    default: return false;
  }
}

RatePoly collect_exp_poly(const ExprPtr& e, const std::string& v) {
  switch (e->type) {
    case NodeType::Rat:
    case NodeType::Dec:
    case NodeType::Pi:
    case NodeType::E:
    case NodeType::I: {
      cplx c = eval(e, {}, {});
      RatePoly r;
      r.by_rate.emplace_back(cplx(0.0, 0.0), std::vector<cplx>{c});
      return r;
    }
    case NodeType::Var: {
      if (e->var != v)
        throw NotExpPolyError("free variable '" + e->var + "' is not the integration variable");
      RatePoly r;
      r.by_rate.emplace_back(cplx(0.0, 0.0),
                             std::vector<cplx>{cplx(0.0, 0.0), cplx(1.0, 0.0)});
      return r;
    }
    case NodeType::Neg: {
      RatePoly r = collect_exp_poly(e->kids[0], v);
      rp_scale(r, cplx(-1.0, 0.0));
      return r;
    }
    case NodeType::Add:
    case NodeType::Sub: {
      RatePoly a = collect_exp_poly(e->kids[0], v);
      RatePoly b = collect_exp_poly(e->kids[1], v);
      if (e->type == NodeType::Sub) rp_scale(b, cplx(-1.0, 0.0));
      for (const auto& kv : b.by_rate) rp_accum(a, kv.first, kv.second);
      return a;
    }
    case NodeType::Mul:
      return rp_mul(collect_exp_poly(e->kids[0], v), collect_exp_poly(e->kids[1], v));
    case NodeType::Div: {
      cplx k;
      if (depends_on(e->kids[1], v) || !affine_const(e->kids[1], k) || k == cplx(0.0, 0.0))
        throw NotExpPolyError("division by a non-constant");
      RatePoly r = collect_exp_poly(e->kids[0], v);
      rp_scale(r, cplx(1.0, 0.0) / k);
      return r;
    }
    case NodeType::Pow: {
      cplx kappa;
      if (depends_on(e->kids[1], v) || !affine_const(e->kids[1], kappa))
        throw NotExpPolyError("exponent must be a constant integer");
      if (kappa.imag() != 0.0 || !is_near_int(kappa.real()) || kappa.real() < 0.0 ||
          kappa.real() > 64.0)
        throw NotExpPolyError("exponent must be a small non-negative integer");
      int m = (int)std::llround(kappa.real());
      RatePoly r;
      r.by_rate.emplace_back(cplx(0.0, 0.0), std::vector<cplx>{cplx(1.0, 0.0)});
      RatePoly base = collect_exp_poly(e->kids[0], v);
      for (int i = 0; i < m; ++i) r = rp_mul(r, base);
      return r;
    }
    case NodeType::Call: {
      if (e->fn == Fn::Exp) {
        cplx alpha, beta;
        if (!collect_affine(e->kids[0], v, alpha, beta))
          throw NotExpPolyError("exponential of a non-affine argument");
        RatePoly r;
        r.by_rate.emplace_back(alpha, std::vector<cplx>{std::exp(beta)});
        return r;
      }
      throw NotExpPolyError(std::string("'") + fn_name(e->fn) +
                            "' is outside the exponential-polynomial class");
    }
  }
  throw NotExpPolyError("malformed expression node");
}

}  // namespace

ExpPoly classify_exp_poly(const ExprPtr& e, const std::string& v) {
  RatePoly rp = collect_exp_poly(e, v);
  ExpPoly out;
  for (const auto& kv : rp.by_rate) {
    bool all_zero = true;
    for (const auto& c : kv.second)
      if (c != cplx(0.0, 0.0)) all_zero = false;
    if (all_zero) continue;
    if (std::abs(kv.first.imag()) > 1e-9)
      throw NotExpPolyError("oscillatory rate: decay rates must be real");
    double b = -kv.first.real();
    if (!(b > 1e-12))
      throw NotExpPolyError("decay rate must be strictly positive");
    for (size_t n = 0; n < kv.second.size(); ++n)
      if (kv.second[n] != cplx(0.0, 0.0))
        out.terms.push_back({kv.second[n], b, (int)n});
  }
  return normalize(out);
}

ExpPoly classify_exp_poly(const ExprPtr& e) {
  std::vector<std::string> fv = free_vars(e);
  if (fv.size() > 1)
    throw NotExpPolyError("more than one free variable");
  std::string v = fv.empty() ? "x" : fv[0];
  return classify_exp_poly(e, v);
}

std::vector<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> s;
  std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& n) {
    if (n->type == NodeType::Var) s.insert(n->var);
    for (const auto& k : n->kids) walk(k);
  };
  walk(e);
  return std::vector<std::string>(s.begin(), s.end());
}

}  // namespace ibd
