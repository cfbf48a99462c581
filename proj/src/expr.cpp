#include "gcs/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

namespace gcs {

enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Fn };
enum class Fn { Exp, Log, Sqrt, Sin, Cos, Tan, Sinh, Cosh, Tanh, Abs, Re, Im, Conj, Sign, Step, Cutoff };

struct Expr::Node {
  Op op;
  cplx value{};  // Num
  int var = 0;   // Var: 0 eps, 1..3 spatial
  Fn fn = Fn::Exp;
  std::shared_ptr<const Node> a, b;
};

using NodeP = std::shared_ptr<const Expr::Node>;

namespace {

NodeP num(cplx c) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Num;
  n->value = c;
  return n;
}
NodeP var(int v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Var;
  n->var = v;
  return n;
}
bool is_num(const NodeP& n, cplx c) { return n->op == Op::Num && n->value == c; }

NodeP bin(Op op, NodeP a, NodeP b) {
  if (a->op == Op::Num && b->op == Op::Num) {
    cplx x = a->value, y = b->value;
    switch (op) {
      case Op::Add: return num(x + y);
      case Op::Sub: return num(x - y);
      case Op::Mul: return num(x * y);
      case Op::Div: return num(x / y);
      default: break;
    }
  }
  if (op == Op::Add) {
    if (is_num(a, 0.0)) return b;
    if (is_num(b, 0.0)) return a;
  }
  if (op == Op::Sub && is_num(b, 0.0)) return a;
  if (op == Op::Mul) {
    if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
    if (is_num(a, 1.0)) return b;
    if (is_num(b, 1.0)) return a;
  }
  if (op == Op::Div && is_num(a, 0.0)) return num(0.0);
  if (op == Op::Div && is_num(b, 1.0)) return a;
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
NodeP neg(NodeP a) {
  if (a->op == Op::Num) return num(-a->value);
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Neg;
  n->a = std::move(a);
  return n;
}
NodeP fn(Fn f, NodeP a) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Fn;
  n->fn = f;
  n->a = std::move(a);
  return n;
}

cplx ipow(cplx b, long n) {
  if (n < 0) return 1.0 / ipow(b, -n);
  cplx r = 1.0;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

cplx cpow(cplx b, cplx e) {
  if (e.imag() == 0.0) {
    double er = e.real();
    if (std::abs(er) <= 64 && er == std::floor(er)) return ipow(b, static_cast<long>(er));
    if (b.imag() == 0.0 && b.real() >= 0.0) return std::pow(b.real(), er);
  }
  return std::pow(b, e);
}

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

cplx eval_node(const Expr::Node& n, const ExprVars& v) {
  switch (n.op) {
    case Op::Num: return n.value;
    case Op::Var: return n.var == 0 ? v.eps : (n.var <= 3 ? v.x[n.var - 1] : v.xi[n.var - 4]);
    case Op::Neg: return -eval_node(*n.a, v);
    case Op::Add: return eval_node(*n.a, v) + eval_node(*n.b, v);
    case Op::Sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
    case Op::Mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
    case Op::Div: return eval_node(*n.a, v) / eval_node(*n.b, v);
    case Op::Pow: return cpow(eval_node(*n.a, v), eval_node(*n.b, v));
    case Op::Fn: {
      cplx a = eval_node(*n.a, v);
      switch (n.fn) {
        case Fn::Exp: return std::exp(a);
        case Fn::Log:
          return a.imag() == 0.0 && a.real() > 0 ? cplx(std::log(a.real())) : std::log(a);
        case Fn::Sqrt:
          return a.imag() == 0.0 && a.real() >= 0 ? cplx(std::sqrt(a.real())) : std::sqrt(a);
        case Fn::Sin: return a.imag() == 0.0 ? cplx(std::sin(a.real())) : std::sin(a);
        case Fn::Cos: return a.imag() == 0.0 ? cplx(std::cos(a.real())) : std::cos(a);
        case Fn::Tan: return std::tan(a);
        case Fn::Sinh: return std::sinh(a);
        case Fn::Cosh: return std::cosh(a);
        case Fn::Tanh: return std::tanh(a);
        case Fn::Abs: return std::abs(a);
        case Fn::Re: return a.real();
        case Fn::Im: return a.imag();
        case Fn::Conj: return std::conj(a);
        case Fn::Sign: return sgn(a.real());
        case Fn::Step: return a.real() >= 0 ? 1.0 : 0.0;
        case Fn::Cutoff: return plateau(std::abs(a.real()));
      }
    }
  }
  return 0.0;
}

bool dep_x(const Expr::Node& n) {
  switch (n.op) {
    case Op::Num: return false;
    case Op::Var: return n.var >= 1 && n.var <= 3;
    case Op::Neg:
    case Op::Fn: return dep_x(*n.a);
    default: return dep_x(*n.a) || dep_x(*n.b);
  }
}
bool dep_xi(const Expr::Node& n) {
  switch (n.op) {
    case Op::Num: return false;
    case Op::Var: return n.var >= 4;
    case Op::Neg:
    case Op::Fn: return dep_xi(*n.a);
    default: return dep_xi(*n.a) || dep_xi(*n.b);
  }
}
bool dep_eps(const Expr::Node& n) {
  switch (n.op) {
    case Op::Num: return false;
    case Op::Var: return n.var == 0;
    case Op::Neg:
    case Op::Fn: return dep_eps(*n.a);
    default: return dep_eps(*n.a) || dep_eps(*n.b);
  }
}
bool smooth_fn(Fn f) {
  switch (f) {
    case Fn::Abs:
    case Fn::Re:
    case Fn::Im:
    case Fn::Conj:
    case Fn::Sign:
    case Fn::Step:
    case Fn::Cutoff: return false;
    default: return true;
  }
}
bool dep_var(const Expr::Node& n, int v) {
  switch (n.op) {
    case Op::Num: return false;
    case Op::Var: return n.var == v;
    case Op::Neg:
    case Op::Fn: return dep_var(*n.a, v);
    default: return dep_var(*n.a, v) || dep_var(*n.b, v);
  }
}
bool diffable_in(const Expr::Node& n, int v) {
  switch (n.op) {
    case Op::Num:
    case Op::Var: return true;
    case Op::Neg: return diffable_in(*n.a, v);
    case Op::Fn: return (smooth_fn(n.fn) || !dep_var(*n.a, v)) && diffable_in(*n.a, v);
    default: return diffable_in(*n.a, v) && diffable_in(*n.b, v);
  }
}
bool diffable(const Expr::Node& n) {
  switch (n.op) {
    case Op::Num:
    case Op::Var: return true;
    case Op::Neg: return diffable(*n.a);
    case Op::Fn: return (smooth_fn(n.fn) || !dep_x(*n.a)) && diffable(*n.a);
    default: return diffable(*n.a) && diffable(*n.b);
  }
}

// axis 0..2 spatial, 3..5 frequency
NodeP d(const NodeP& n, int axis) {
  if (!dep_var(*n, axis + 1)) return num(0.0);
  switch (n->op) {
    case Op::Num: return num(0.0);
    case Op::Var: return num(n->var == axis + 1 ? 1.0 : 0.0);
    case Op::Neg: return neg(d(n->a, axis));
    case Op::Add: return bin(Op::Add, d(n->a, axis), d(n->b, axis));
    case Op::Sub: return bin(Op::Sub, d(n->a, axis), d(n->b, axis));
    case Op::Mul:
      return bin(Op::Add, bin(Op::Mul, d(n->a, axis), n->b), bin(Op::Mul, n->a, d(n->b, axis)));
    case Op::Div: {
      NodeP num_ = bin(Op::Sub, bin(Op::Mul, d(n->a, axis), n->b), bin(Op::Mul, n->a, d(n->b, axis)));
      return bin(Op::Div, num_, bin(Op::Mul, n->b, n->b));
    }
    case Op::Pow: {
      if (!dep_var(*n->b, axis + 1)) {
        NodeP e1 = bin(Op::Sub, n->b, num(1.0));
        return bin(Op::Mul, bin(Op::Mul, n->b, bin(Op::Pow, n->a, e1)), d(n->a, axis));
      }
      NodeP t1 = bin(Op::Mul, d(n->b, axis), fn(Fn::Log, n->a));
      NodeP t2 = bin(Op::Div, bin(Op::Mul, n->b, d(n->a, axis)), n->a);
      return bin(Op::Mul, n, bin(Op::Add, t1, t2));
    }
    case Op::Fn: {
      NodeP u = n->a, du = d(u, axis);
      NodeP outer;
      switch (n->fn) {
        case Fn::Exp: outer = n; break;
        case Fn::Log: outer = bin(Op::Div, num(1.0), u); break;
        case Fn::Sqrt: outer = bin(Op::Div, num(0.5), n); break;
        case Fn::Sin: outer = fn(Fn::Cos, u); break;
        case Fn::Cos: outer = neg(fn(Fn::Sin, u)); break;
        case Fn::Tan: {
          NodeP c = fn(Fn::Cos, u);
          outer = bin(Op::Div, num(1.0), bin(Op::Mul, c, c));
          break;
        }
        case Fn::Sinh: outer = fn(Fn::Cosh, u); break;
        case Fn::Cosh: outer = fn(Fn::Sinh, u); break;
        case Fn::Tanh: outer = bin(Op::Sub, num(1.0), bin(Op::Mul, n, n)); break;
        default: fail(ErrorKind::InvalidArgument, "expression is not differentiable in x");
      }
      return bin(Op::Mul, outer, du);
    }
  }
  return num(0.0);
}

std::string fn_name(Fn f) {
  static const char* names[] = {"exp", "log", "sqrt", "sin", "cos", "tan", "sinh", "cosh",
                                "tanh", "abs", "re", "im", "conj", "sign", "step", "cutoff"};
  return names[static_cast<int>(f)];
}

void print(const Expr::Node& n, std::ostringstream& os) {
  switch (n.op) {
    case Op::Num:
      if (n.value.imag() == 0.0)
        os << n.value.real();
      else
        os << "(" << n.value.real() << "+" << n.value.imag() << "*i)";
      return;
    case Op::Var: {
      static const char* v[] = {"eps", "x", "y", "z", "xi1", "xi2", "xi3"};
      os << v[n.var];
      return;
    }
    case Op::Neg:
      os << "(-";
      print(*n.a, os);
      os << ")";
      return;
    case Op::Fn:
      os << fn_name(n.fn) << "(";
      print(*n.a, os);
      os << ")";
      return;
    default: {
      const char* s = n.op == Op::Add ? "+" : n.op == Op::Sub ? "-" : n.op == Op::Mul ? "*" : n.op == Op::Div ? "/" : "^";
      os << "(";
      print(*n.a, os);
      os << s;
      print(*n.b, os);
      os << ")";
    }
  }
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodeP parse() {
    NodeP e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;

  [[noreturn]] void error(const std::string& m) {
    fail(ErrorKind::Parse, "expression '" + std::string(s_) + "': " + m + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool peek_pow() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') return true;
    return pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*';
  }

  NodeP expr() {
    NodeP l = term();
    for (;;) {
      if (eat('+'))
        l = bin(Op::Add, l, term());
      else if (eat('-'))
        l = bin(Op::Sub, l, term());
      else
        return l;
    }
  }
  NodeP term() {
    NodeP l = unary();
    for (;;) {
      skip();
      if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') return l;
      if (eat('*'))
        l = bin(Op::Mul, l, unary());
      else if (eat('/'))
        l = bin(Op::Div, l, unary());
      else
        return l;
    }
  }
  NodeP unary() {
    if (eat('-')) return neg(unary());
    if (eat('+')) return unary();
    return power();
  }
  NodeP power() {
    NodeP base = primary();
    if (peek_pow()) {
      if (s_[pos_] == '^')
        ++pos_;
      else
        pos_ += 2;
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::Pow;
      n->a = base;
      n->b = unary();
      if (n->a->op == Op::Num && n->b->op == Op::Num) return num(cpow(n->a->value, n->b->value));
      return n;
    }
    return base;
  }
  NodeP primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodeP e = expr();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.data() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) error("bad number");
      pos_ += static_cast<size_t>(end - begin);
      return num(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t st = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id(s_.substr(st, pos_ - st));
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        ++pos_;
        std::vector<NodeP> args;
        if (!eat(')')) {
          args.push_back(expr());
          while (eat(',')) args.push_back(expr());
          if (!eat(')')) error("expected ')' after arguments");
        }
        return call(id, args);
      }
      if (id == "eps" || id == "epsilon") return var(0);
      if (id == "x" || id == "x1") return var(1);
      if (id == "y" || id == "x2") return var(2);
      if (id == "z" || id == "x3") return var(3);
      if (id == "xi" || id == "xi1") return var(4);
      if (id == "xi2") return var(5);
      if (id == "xi3") return var(6);
      if (id == "i") return num(cplx(0, 1));
      if (id == "pi") return num(kPi);
      pos_ = st;
      error("unknown identifier '" + id + "'");
    }
    error("unexpected character '" + std::string(1, c) + "'");
  }
  NodeP call(const std::string& id, const std::vector<NodeP>& args) {
    static const std::unordered_map<std::string, Fn> fns = {
        {"exp", Fn::Exp},   {"log", Fn::Log},   {"ln", Fn::Log},     {"sqrt", Fn::Sqrt},
        {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},    {"sinh", Fn::Sinh},
        {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh}, {"abs", Fn::Abs},    {"re", Fn::Re},
        {"im", Fn::Im},     {"conj", Fn::Conj}, {"sign", Fn::Sign},  {"step", Fn::Step},
        {"cutoff", Fn::Cutoff}};
    if (id == "pow") {
      if (args.size() != 2) error("pow expects 2 arguments");
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::Pow;
      n->a = args[0];
      n->b = args[1];
      return n;
    }
    auto it = fns.find(id);
    if (it == fns.end()) error("unknown function '" + id + "'");
    if (args.size() != 1) error(id + " expects 1 argument");
    return fn(it->second, args[0]);
  }
};

}  // namespace

double plateau(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  auto f = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
  double a = f(2.0 - r), b = f(r - 1.0);
  return a / (a + b);
}

Expr::Expr() : root_(num(0.0)) {}
Expr Expr::parse(std::string_view src) { return Expr(Parser(src).parse()); }
Expr Expr::constant(cplx c) { return Expr(num(c)); }
cplx Expr::eval(const ExprVars& v) const { return eval_node(*root_, v); }
bool Expr::depends_on_x() const { return dep_x(*root_); }
bool Expr::depends_on_eps() const { return dep_eps(*root_); }
bool Expr::depends_on_xi() const { return dep_xi(*root_); }
bool Expr::differentiable() const { return diffable(*root_); }
Expr Expr::diff(int axis) const {
  if (!differentiable()) fail(ErrorKind::InvalidArgument, "expression is not differentiable in x");
  return Expr(d(root_, axis));
}
Expr Expr::diff_xi(int axis) const {
  if (!diffable_in(*root_, axis + 4)) fail(ErrorKind::InvalidArgument, "expression is not differentiable in xi");
  return Expr(d(root_, axis + 3));
}
std::string Expr::str() const {
  std::ostringstream os;
  os.precision(17);
  print(*root_, os);
  return os.str();
}

}  // namespace gcs
