#ifndef RELAXO_LAGRANGIAN_HPP
#define RELAXO_LAGRANGIAN_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxo/common.hpp"
#include "relaxo/expr.hpp"

namespace relaxo {

// Uniform grid on one axis, nodes lo + i*step, i in [0, count).
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  double step() const { return (hi - lo) / double(count - 1); }
  double coord(int i) const {
    if (i == 0) return lo;
    if (i == count - 1) return hi;
    return lo + double(i) * step();
  }
  // Index of the node nearest to v (clamped to the axis).
  int nearest(double v) const {
    double t = (v - lo) / step();
    int i = int(std::lround(t));
    if (i < 0) i = 0;
    if (i >= count) i = count - 1;
    return i;
  }
};

// Values of a function of xi on a uniform grid; kInfValue marks +infinity.
struct GridSamples {
  int dim = 1;
  std::array<GridAxis, 2> axes;
  std::vector<double> values;  // row-major, index = i1*count2 + i2 in 2D

  std::size_t size() const {
    return dim == 1 ? std::size_t(axes[0].count)
                    : std::size_t(axes[0].count) * axes[1].count;
  }
  double& at(int i1, int i2 = 0) { return values[flat(i1, i2)]; }
  double at(int i1, int i2 = 0) const { return values[flat(i1, i2)]; }
  std::size_t flat(int i1, int i2 = 0) const {
    return dim == 1 ? std::size_t(i1)
                    : std::size_t(i1) * axes[1].count + i2;
  }
  // Multilinear interpolation; sentinel if any participating corner is
  // sentinel. Clamps to the grid box.
  double interpolate(std::span<const double> xi) const;
};

// A Lagrangian f(x, u, xi), held either symbolically or as grid samples.
struct LagrangianSpec {
  std::optional<expr::ExpressionAst> form_expr;
  std::optional<GridSamples> form_grid;
  int dim = 1;  // gradient dimension N
  bool depends_on_x = false;
  bool depends_on_u = false;
  Box xi_bounds;
  bool nonneg = false;

  bool is_expression() const { return form_expr.has_value(); }

  double eval(std::span<const double> x, double u,
              std::span<const double> g) const;
  double eval1(double x, double u, double g) const {
    return eval({&x, 1}, u, {&g, 1});
  }

  // Parses `source` with the declared gradient dimension; dependence flags
  // are derived from the free variables of the AST.
  static LagrangianSpec from_expression(const std::string& source, int dim,
                                        Box xi_bounds, bool nonneg = false);
  static LagrangianSpec from_samples(GridSamples samples, bool nonneg = false);
};

}  // namespace relaxo

#endif  // RELAXO_LAGRANGIAN_HPP
