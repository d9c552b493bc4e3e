#include "relaxo/lagrangian.hpp"

#include <cmath>

namespace relaxo {

double GridSamples::interpolate(std::span<const double> xi) const {
  auto clamp_cell = [](const GridAxis& ax, double v, int& i0, double& t) {
    double s = (v - ax.lo) / ax.step();
    i0 = int(std::floor(s));
    if (i0 < 0) i0 = 0;
    if (i0 > ax.count - 2) i0 = ax.count - 2;
    t = s - double(i0);
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
  };
  if (dim == 1) {
    int i0;
    double t;
    clamp_cell(axes[0], xi[0], i0, t);
    double a = at(i0), b = at(i0 + 1);
    if (is_inf_value(a) || is_inf_value(b)) return kInfValue;
    return a + t * (b - a);
  }
  int i0, j0;
  double s, t;
  clamp_cell(axes[0], xi[0], i0, s);
  clamp_cell(axes[1], xi[1], j0, t);
  double c00 = at(i0, j0), c01 = at(i0, j0 + 1);
  double c10 = at(i0 + 1, j0), c11 = at(i0 + 1, j0 + 1);
  if (is_inf_value(c00) || is_inf_value(c01) || is_inf_value(c10) ||
      is_inf_value(c11))
    return kInfValue;
  return (1 - s) * ((1 - t) * c00 + t * c01) + s * ((1 - t) * c10 + t * c11);
}

double LagrangianSpec::eval(std::span<const double> x, double u,
                            std::span<const double> g) const {
  if (form_expr) return form_expr->eval(x, u, g);
  if (form_grid) return form_grid->interpolate(g);
  throw Error("LagrangianSpec has no form");
}

LagrangianSpec LagrangianSpec::from_expression(const std::string& source,
                                               int dim, Box xi_bounds,
                                               bool nonneg) {
  LagrangianSpec spec;
  spec.form_expr = expr::parse(source, dim);
  spec.dim = dim;
  spec.depends_on_x = spec.form_expr->uses_x;
  spec.depends_on_u = spec.form_expr->uses_u;
  spec.xi_bounds = xi_bounds;
  spec.xi_bounds.dim = dim;
  spec.nonneg = nonneg;
  return spec;
}

LagrangianSpec LagrangianSpec::from_samples(GridSamples samples, bool nonneg) {
  for (int d = 0; d < samples.dim; ++d) {
    const GridAxis& ax = samples.axes[d];
    if (ax.count < 3 || !(ax.lo < ax.hi))
      throw Error("grid samples need count >= 3 and lo < hi per axis");
  }
  if (samples.values.size() != samples.size())
    throw Error("grid sample payload does not match axis counts");
  bool any_finite = false;
  for (double v : samples.values) {
    if (std::isnan(v)) throw Error("grid samples contain NaN");
    if (!is_inf_value(v)) any_finite = true;
  }
  if (!any_finite) throw Error("grid samples are all infinite");
  LagrangianSpec spec;
  spec.dim = samples.dim;
  spec.xi_bounds.dim = samples.dim;
  for (int d = 0; d < samples.dim; ++d) {
    spec.xi_bounds.lo[d] = samples.axes[d].lo;
    spec.xi_bounds.hi[d] = samples.axes[d].hi;
  }
  spec.form_grid = std::move(samples);
  spec.nonneg = nonneg;
  return spec;
}

}  // namespace relaxo
