#ifndef RELAXO_EXPR_HPP
#define RELAXO_EXPR_HPP

#include <span>
#include <string>
#include <vector>

#include "relaxo/common.hpp"

namespace relaxo::expr {

// Parse error with 1-based character position and the token set that would
// have been accepted there.
struct SyntaxError : Error {
  SyntaxError(const std::string& what, int position, std::string expected);
  int position;
  std::string expected;
};

struct UnknownIdentifier : Error {
  UnknownIdentifier(const std::string& name, int position);
  std::string name;
  int position;
};

struct ArityMismatch : Error {
  ArityMismatch(const std::string& name, int expected, int got, int position);
};

// Evaluation failures: log of a nonpositive number, 0 raised to a negative
// power, sqrt of a negative number.
struct DomainError : Error {
  using Error::Error;
};

// A non-finite intermediate or final value. The infinity sentinel is allowed
// only as the value of a piecewise branch; anything else is reported here.
struct NonFiniteError : Error {
  using Error::Error;
};

enum class Op : std::uint8_t {
  kConstant,
  kInf,   // piecewise branch value only
  kVarX,  // space coordinate, axis in `index`
  kVarU,
  kVarG,  // gradient component, 1-based in `index`
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kNeg,
  kAbs,
  kMin,
  kMax,
  kExp,
  kLog,
  kSin,
  kCos,
  kSqrt,
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kNe,
  kPiecewise,
};

// Immutable arena-backed expression tree. `dim` is the gradient dimension N;
// space variables are x (alias x1) and x2.
class ExpressionAst {
 public:
  struct Node {
    Op op;
    double value = 0.0;  // kConstant
    int a = -1;          // left child / first piecewise pair
    int b = -1;          // right child / piecewise pair count
    int index = 0;       // axis (kVarX) or gradient component (kVarG)
  };
  // Piecewise branches are (guard, value) node pairs; the final pair has
  // guard == -1 and holds the mandatory else value.
  struct Branch {
    int guard;
    int value;
  };

  std::vector<Node> nodes;
  std::vector<Branch> branches;
  int root = -1;
  int dim = 1;        // gradient dimension N
  int space_dim = 1;  // number of space axes referenced (1 or 2)

  bool uses_x = false;
  bool uses_u = false;
  bool uses_g = false;

  bool empty() const { return root < 0; }

  // Evaluates at space point x, scalar u, gradient g. x and g need only as
  // many entries as the AST references. NaN/Inf from arithmetic raises
  // NonFiniteError; an `inf` branch yields kInfValue.
  double eval(std::span<const double> x, double u,
              std::span<const double> g) const;

  double eval1(double x, double u, double g) const {
    return eval({&x, 1}, u, {&g, 1});
  }

  // Canonical text form; parse(pretty_print(ast)) round-trips.
  std::string pretty_print() const;

  int add(Node n) {
    nodes.push_back(n);
    return int(nodes.size()) - 1;
  }

  // Convenience constructors used by programmatic builders (truncation).
  static ExpressionAst constant(double c, int dim);
};

// Parses the expression grammar documented in docs/grammar.md. Variables:
// x (= x1), x2, u, g1..gN with N = dim. `inf` is accepted only as a
// piecewise branch value.
ExpressionAst parse(const std::string& source, int dim);

}  // namespace relaxo::expr

#endif  // RELAXO_EXPR_HPP
