#include "relaxo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace relaxo::expr {

SyntaxError::SyntaxError(const std::string& what, int position_,
                         std::string expected_)
    : Error("syntax error at position " + std::to_string(position_) + ": " +
            what + " (expected " + expected_ + ")"),
      position(position_),
      expected(std::move(expected_)) {}

UnknownIdentifier::UnknownIdentifier(const std::string& name_, int position_)
    : Error("unknown identifier '" + name_ + "' at position " +
            std::to_string(position_)),
      name(name_),
      position(position_) {}

ArityMismatch::ArityMismatch(const std::string& name, int expected, int got,
                             int position)
    : Error("function '" + name + "' takes " + std::to_string(expected) +
            " argument(s), got " + std::to_string(got) + " at position " +
            std::to_string(position)) {}

namespace {

struct Token {
  enum Kind { kNumber, kIdent, kPunct, kEnd } kind;
  std::string text;
  double value = 0.0;
  int pos = 0;  // 1-based
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int pos = int(i) + 1;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      const char* begin = src.c_str() + i;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      std::size_t len = std::size_t(end - begin);
      out.push_back({Token::kNumber, src.substr(i, len), v, pos});
      i += len;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                       src[j] == '_'))
        ++j;
      out.push_back({Token::kIdent, src.substr(i, j - i), 0.0, pos});
      i = j;
      continue;
    }
    static const char* two_char[] = {"<=", ">=", "==", "!="};
    bool matched = false;
    for (const char* t : two_char) {
      if (src.compare(i, 2, t) == 0) {
        out.push_back({Token::kPunct, t, 0.0, pos});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("+-*/^(),:<>").find(c) != std::string::npos) {
      out.push_back({Token::kPunct, std::string(1, c), 0.0, pos});
      ++i;
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos,
                      "a token");
  }
  out.push_back({Token::kEnd, "", 0.0, int(n) + 1});
  return out;
}

struct Builtin {
  const char* name;
  Op op;
  int arity;
};

const Builtin kBuiltins[] = {
    {"abs", Op::kAbs, 1}, {"min", Op::kMin, 2}, {"max", Op::kMax, 2},
    {"exp", Op::kExp, 1}, {"log", Op::kLog, 1}, {"sin", Op::kSin, 1},
    {"cos", Op::kCos, 1}, {"sqrt", Op::kSqrt, 1},
};

class Parser {
 public:
  Parser(const std::string& src, int dim) : toks_(tokenize(src)), dim_(dim) {}

  ExpressionAst run() {
    ExpressionAst ast;
    ast.dim = dim_;
    ast_ = &ast;
    ast.root = additive();
    expect_end();
    return ast;
  }

 private:
  const Token& cur() const { return toks_[k_]; }
  void advance() { ++k_; }

  bool at_punct(const char* p) const {
    return cur().kind == Token::kPunct && cur().text == p;
  }
  bool at_ident(const char* s) const {
    return cur().kind == Token::kIdent && cur().text == s;
  }
  void eat_punct(const char* p, const char* expected) {
    if (!at_punct(p))
      throw SyntaxError("got '" + describe(cur()) + "'", cur().pos, expected);
    advance();
  }
  void expect_end() {
    if (cur().kind != Token::kEnd)
      throw SyntaxError("trailing input '" + describe(cur()) + "'", cur().pos,
                        "end of expression");
  }
  static std::string describe(const Token& t) {
    return t.kind == Token::kEnd ? "end of input" : t.text;
  }

  int node(Op op, int a = -1, int b = -1, double v = 0.0, int index = 0) {
    return ast_->add({op, v, a, b, index});
  }

  int additive() {
    int lhs = term();
    while (at_punct("+") || at_punct("-")) {
      bool add = cur().text == "+";
      advance();
      int rhs = term();
      lhs = node(add ? Op::kAdd : Op::kSub, lhs, rhs);
    }
    return lhs;
  }

  int term() {
    int lhs = factor();
    while (at_punct("*") || at_punct("/")) {
      bool mul = cur().text == "*";
      advance();
      int rhs = factor();
      lhs = node(mul ? Op::kMul : Op::kDiv, lhs, rhs);
    }
    return lhs;
  }

  int factor() {
    if (at_punct("-")) {
      advance();
      return node(Op::kNeg, factor());
    }
    return power();
  }

  int power() {
    int base = primary();
    if (at_punct("^")) {
      advance();
      int exp = factor();  // right-associative
      return node(Op::kPow, base, exp);
    }
    return base;
  }

  int primary() {
    const Token& t = cur();
    if (t.kind == Token::kNumber) {
      advance();
      return node(Op::kConstant, -1, -1, t.value);
    }
    if (t.kind == Token::kPunct && t.text == "(") {
      advance();
      int inner = additive();
      eat_punct(")", "')'");
      return inner;
    }
    if (t.kind == Token::kIdent) {
      if (t.text == "pw") return piecewise();
      if (t.text == "inf")
        throw SyntaxError("'inf' outside a piecewise branch", t.pos,
                          "a value expression");
      if (t.text == "else")
        throw SyntaxError("'else' outside pw(...)", t.pos,
                          "a value expression");
      for (const Builtin& b : kBuiltins)
        if (t.text == b.name) return call(b);
      return variable();
    }
    throw SyntaxError("got '" + describe(t) + "'", t.pos,
                      "a number, variable, function call or '('");
  }

  int call(const Builtin& b) {
    int name_pos = cur().pos;
    advance();
    eat_punct("(", "'(' after function name");
    std::vector<int> args;
    args.push_back(additive());
    while (at_punct(",")) {
      advance();
      args.push_back(additive());
    }
    eat_punct(")", "')'");
    if (int(args.size()) != b.arity)
      throw ArityMismatch(b.name, b.arity, int(args.size()), name_pos);
    return node(b.op, args[0], args.size() > 1 ? args[1] : -1);
  }

  int variable() {
    const Token& t = cur();
    const std::string& s = t.text;
    if (s == "u") {
      advance();
      ast_->uses_u = true;
      return node(Op::kVarU);
    }
    if (s == "x" || s == "x1" || s == "x2") {
      int axis = (s == "x2") ? 1 : 0;
      advance();
      ast_->uses_x = true;
      if (axis + 1 > ast_->space_dim) ast_->space_dim = axis + 1;
      return node(Op::kVarX, -1, -1, 0.0, axis);
    }
    if (s.size() >= 2 && s[0] == 'g') {
      bool digits = true;
      for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
      if (digits) {
        int idx = std::atoi(s.c_str() + 1);
        if (idx < 1 || idx > dim_) throw UnknownIdentifier(s, t.pos);
        advance();
        ast_->uses_g = true;
        return node(Op::kVarG, -1, -1, 0.0, idx);
      }
    }
    throw UnknownIdentifier(s, t.pos);
  }

  // pw(cond1: e1, ..., else: eN). Guards are comparisons; branch values are
  // ordinary expressions or the literal `inf`.
  int piecewise() {
    advance();  // pw
    eat_punct("(", "'(' after pw");
    std::vector<ExpressionAst::Branch> branches;
    bool saw_else = false;
    while (true) {
      if (at_ident("else")) {
        advance();
        eat_punct(":", "':' after else");
        branches.push_back({-1, branch_value()});
        saw_else = true;
        break;
      }
      int guard = comparison();
      eat_punct(":", "':' after piecewise guard");
      branches.push_back({guard, branch_value()});
      if (at_punct(",")) {
        advance();
        continue;
      }
      break;
    }
    if (!saw_else)
      throw SyntaxError("piecewise without final else branch", cur().pos,
                        "',' then 'else: <value>'");
    eat_punct(")", "')'");
    int first = int(ast_->branches.size());
    for (const auto& br : branches) ast_->branches.push_back(br);
    return node(Op::kPiecewise, first, int(branches.size()));
  }

  int branch_value() {
    if (at_ident("inf")) {
      advance();
      return node(Op::kInf);
    }
    return additive();
  }

  int comparison() {
    int lhs = additive();
    static const struct {
      const char* text;
      Op op;
    } cmps[] = {{"<=", Op::kLe}, {">=", Op::kGe}, {"==", Op::kEq},
                {"!=", Op::kNe}, {"<", Op::kLt},  {">", Op::kGt}};
    for (const auto& c : cmps) {
      if (at_punct(c.text)) {
        advance();
        int rhs = additive();
        return node(c.op, lhs, rhs);
      }
    }
    throw SyntaxError("guard without comparison", cur().pos,
                      "one of < <= > >= == !=");
  }

  std::vector<Token> toks_;
  int dim_;
  std::size_t k_ = 0;
  ExpressionAst* ast_ = nullptr;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v) || std::fabs(v) >= kInfValue)
    throw NonFiniteError(std::string("non-finite result from ") + what);
  return v;
}

double require_finite_operand(double v, const char* what) {
  if (is_inf_value(v))
    throw NonFiniteError(std::string("infinity sentinel used in ") + what);
  return v;
}

// Integer powers up to |e| <= 64 are done by repeated squaring; this keeps
// the small exponents of the corpus (2, 3, 6) exact where pow() would not be.
double eval_pow(double base, double exponent) {
  double r = std::rint(exponent);
  if (r == exponent && std::fabs(r) <= 64.0) {
    long long e = static_cast<long long>(r);
    if (e == 0) return 1.0;
    bool invert = e < 0;
    if (invert && base == 0.0) throw DomainError("0 raised to negative power");
    unsigned long long n = invert ? -static_cast<unsigned long long>(e) : e;
    double acc = 1.0, b = base;
    while (n) {
      if (n & 1ull) acc *= b;
      b *= b;
      n >>= 1;
    }
    return invert ? 1.0 / acc : acc;
  }
  if (base < 0.0) throw DomainError("negative base with non-integer exponent");
  if (base == 0.0 && exponent < 0.0)
    throw DomainError("0 raised to negative power");
  return std::pow(base, exponent);
}

}  // namespace

ExpressionAst parse(const std::string& source, int dim) {
  if (source.empty()) throw SyntaxError("empty source", 1, "an expression");
  if (dim < 1) throw Error("dim must be >= 1");
  if (dim > 2) throw Error("gradient dimension > 2 is not supported");
  return Parser(source, dim).run();
}

ExpressionAst ExpressionAst::constant(double c, int dim) {
  ExpressionAst ast;
  ast.dim = dim;
  ast.root = ast.add({Op::kConstant, c, -1, -1, 0});
  return ast;
}

namespace {

struct EvalCtx {
  const ExpressionAst* ast;
  std::span<const double> x;
  double u;
  std::span<const double> g;
};

double eval_node(const EvalCtx& ctx, int id) {
  const auto& n = ctx.ast->nodes[id];
  switch (n.op) {
    case Op::kConstant:
      return n.value;
    case Op::kInf:
      return kInfValue;
    case Op::kVarX:
      if (n.index >= int(ctx.x.size()))
        throw Error("space coordinate x" + std::to_string(n.index + 1) +
                    " not bound");
      return ctx.x[n.index];
    case Op::kVarU:
      return ctx.u;
    case Op::kVarG:
      if (n.index - 1 >= int(ctx.g.size()))
        throw Error("gradient component g" + std::to_string(n.index) +
                    " not bound");
      return ctx.g[n.index - 1];
    case Op::kPiecewise: {
      for (int k = 0; k < n.b; ++k) {
        const auto& br = ctx.ast->branches[n.a + k];
        if (br.guard < 0) return eval_node(ctx, br.value);
        if (eval_node(ctx, br.guard) != 0.0) return eval_node(ctx, br.value);
      }
      throw Error("piecewise fell through all branches");  // unreachable
    }
    default:
      break;
  }
  double a = eval_node(ctx, n.a);
  if (n.op == Op::kNeg)
    return -require_finite_operand(a, "negation");
  if (n.op == Op::kAbs || n.op == Op::kExp || n.op == Op::kLog ||
      n.op == Op::kSin || n.op == Op::kCos || n.op == Op::kSqrt) {
    require_finite_operand(a, "function argument");
    switch (n.op) {
      case Op::kAbs:
        return std::fabs(a);
      case Op::kExp:
        return checked(std::exp(a), "exp");
      case Op::kLog:
        if (a <= 0.0) throw DomainError("log of nonpositive value");
        return std::log(a);
      case Op::kSin:
        return std::sin(a);
      case Op::kCos:
        return std::cos(a);
      case Op::kSqrt:
        if (a < 0.0) throw DomainError("sqrt of negative value");
        return std::sqrt(a);
      default:
        break;
    }
  }
  double b = eval_node(ctx, n.b);
  switch (n.op) {
    case Op::kLt:
      return a < b ? 1.0 : 0.0;
    case Op::kLe:
      return a <= b ? 1.0 : 0.0;
    case Op::kGt:
      return a > b ? 1.0 : 0.0;
    case Op::kGe:
      return a >= b ? 1.0 : 0.0;
    case Op::kEq:
      return a == b ? 1.0 : 0.0;
    case Op::kNe:
      return a != b ? 1.0 : 0.0;
    default:
      break;
  }
  require_finite_operand(a, "arithmetic");
  require_finite_operand(b, "arithmetic");
  switch (n.op) {
    case Op::kAdd:
      return checked(a + b, "addition");
    case Op::kSub:
      return checked(a - b, "subtraction");
    case Op::kMul:
      return checked(a * b, "multiplication");
    case Op::kDiv:
      if (b == 0.0) throw DomainError("division by zero");
      return checked(a / b, "division");
    case Op::kPow:
      return checked(eval_pow(a, b), "power");
    case Op::kMin:
      return std::fmin(a, b);
    case Op::kMax:
      return std::fmax(a, b);
    default:
      throw Error("corrupt expression node");
  }
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int precedence(Op op) {
  switch (op) {
    case Op::kAdd:
    case Op::kSub:
      return 1;
    case Op::kMul:
    case Op::kDiv:
      return 2;
    case Op::kNeg:
      return 3;
    case Op::kPow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const ExpressionAst& ast, int id, std::string& out);

void print_child(const ExpressionAst& ast, int id, int min_prec,
                 std::string& out) {
  bool parens = precedence(ast.nodes[id].op) < min_prec;
  if (parens) out += '(';
  print_node(ast, id, out);
  if (parens) out += ')';
}

void print_node(const ExpressionAst& ast, int id, std::string& out) {
  const auto& n = ast.nodes[id];
  switch (n.op) {
    case Op::kConstant:
      if (n.value < 0.0) {
        out += '-';
        out += format_number(-n.value);
      } else {
        out += format_number(n.value);
      }
      return;
    case Op::kInf:
      out += "inf";
      return;
    case Op::kVarX:
      out += (n.index == 0) ? "x" : "x2";
      return;
    case Op::kVarU:
      out += 'u';
      return;
    case Op::kVarG:
      out += 'g';
      out += std::to_string(n.index);
      return;
    case Op::kAdd:
    case Op::kSub: {
      print_child(ast, n.a, 1, out);
      out += (n.op == Op::kAdd) ? " + " : " - ";
      print_child(ast, n.b, n.op == Op::kAdd ? 1 : 2, out);
      return;
    }
    case Op::kMul:
    case Op::kDiv: {
      print_child(ast, n.a, 2, out);
      out += (n.op == Op::kMul) ? " * " : " / ";
      print_child(ast, n.b, n.op == Op::kMul ? 2 : 3, out);
      return;
    }
    case Op::kNeg:
      out += '-';
      print_child(ast, n.a, 3, out);
      return;
    case Op::kPow:
      // right-associative: parenthesize a left child of equal precedence
      print_child(ast, n.a, 5, out);
      out += '^';
      print_child(ast, n.b, 4, out);
      return;
    case Op::kAbs:
    case Op::kExp:
    case Op::kLog:
    case Op::kSin:
    case Op::kCos:
    case Op::kSqrt: {
      const char* name = n.op == Op::kAbs   ? "abs"
                         : n.op == Op::kExp ? "exp"
                         : n.op == Op::kLog ? "log"
                         : n.op == Op::kSin ? "sin"
                         : n.op == Op::kCos ? "cos"
                                            : "sqrt";
      out += name;
      out += '(';
      print_node(ast, n.a, out);
      out += ')';
      return;
    }
    case Op::kMin:
    case Op::kMax:
      out += (n.op == Op::kMin) ? "min(" : "max(";
      print_node(ast, n.a, out);
      out += ", ";
      print_node(ast, n.b, out);
      out += ')';
      return;
    case Op::kLt:
    case Op::kLe:
    case Op::kGt:
    case Op::kGe:
    case Op::kEq:
    case Op::kNe: {
      const char* sym = n.op == Op::kLt   ? " < "
                        : n.op == Op::kLe ? " <= "
                        : n.op == Op::kGt ? " > "
                        : n.op == Op::kGe ? " >= "
                        : n.op == Op::kEq ? " == "
                                          : " != ";
      print_node(ast, n.a, out);
      out += sym;
      print_node(ast, n.b, out);
      return;
    }
    case Op::kPiecewise: {
      out += "pw(";
      for (int k = 0; k < n.b; ++k) {
        const auto& br = ast.branches[n.a + k];
        if (k) out += ", ";
        if (br.guard < 0)
          out += "else: ";
        else {
          print_node(ast, br.guard, out);
          out += ": ";
        }
        print_node(ast, br.value, out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

double ExpressionAst::eval(std::span<const double> x, double u,
                           std::span<const double> g) const {
  if (root < 0) throw Error("empty expression");
  return eval_node(EvalCtx{this, x, u, g}, root);
}

std::string ExpressionAst::pretty_print() const {
  if (root < 0) return "";
  std::string out;
  print_node(*this, root, out);
  return out;
}

}  // namespace relaxo::expr
