#ifndef RELAXO_CONVEXIFY_HPP
#define RELAXO_CONVEXIFY_HPP

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relaxo/common.hpp"
#include "relaxo/lagrangian.hpp"

namespace relaxo::convexify {

struct AllInfinite : Error {
  AllInfinite() : Error("sampled function has no finite values") {}
};
struct EmptyDualGrid : Error {
  EmptyDualGrid() : Error("conjugate requires a non-empty dual grid") {}
};
struct OutsideDomain : Error {
  using Error::Error;
};
struct GapExceedsEpsilon : Error {
  GapExceedsEpsilon(double gap, double eps)
      : Error("decomposition gap " + std::to_string(gap) +
              " exceeds requested epsilon " + std::to_string(eps) +
              "; refine the grid"),
        gap(gap),
        eps(eps) {}
  double gap, eps;
};
struct NonFiniteSample : Error {
  NonFiniteSample(std::size_t node, const std::string& why)
      : Error("non-finite sample at node " + std::to_string(node) + ": " +
              why),
        node(node) {}
  std::size_t node;
};

// A xi-slice of a Lagrangian on a uniform grid (1D or 2D). Infinite entries
// carry kInfValue and are skipped by hull construction.
struct SampledFunction {
  int dim = 1;
  std::array<GridAxis, 2> axes;
  std::vector<double> values;

  std::size_t size() const {
    return dim == 1 ? std::size_t(axes[0].count)
                    : std::size_t(axes[0].count) * axes[1].count;
  }
  std::size_t flat(int i1, int i2 = 0) const {
    return dim == 1 ? std::size_t(i1)
                    : std::size_t(i1) * axes[1].count + i2;
  }
  double at(int i1, int i2 = 0) const { return values[flat(i1, i2)]; }
  void node_coords(std::size_t flat_index, double* out) const;

  // max |df|/h along grid edges, over finite adjacent pairs
  double lipschitz_estimate() const;
  double max_step() const;
  // interpolation-dominated comparison tolerance: 1e-9 + h * L
  double default_tol_hull() const {
    return 1e-9 + max_step() * lipschitz_estimate();
  }
};

struct Breakpoint {
  double xi;
  double value;
};

// Lower-hull facet in 2D: vertex indices plus the supporting affine map
// z = a0 + ax*x + ay*y.
struct Facet {
  std::array<int, 3> v;
  double a0, ax, ay;
};

// Piecewise-linear representation of the convex lsc envelope of a sampled
// function: sorted breakpoints in 1D, lifted lower-hull facets in 2D.
struct ConvexEnvelope {
  int dim = 1;
  Box domain;
  double tol_hull = 1e-9;

  // 1D
  std::vector<Breakpoint> breakpoints;

  // 2D
  std::vector<std::array<double, 2>> vertices;
  std::vector<double> vertex_values;
  std::vector<Facet> facets;
  bool degenerate_segment = false;  // all hull points collinear in the plane

  double value(std::span<const double> xi) const;
  double value1(double xi) const { return value({&xi, 1}); }
  // Facet whose projection contains (x,y); smallest index wins ties.
  int facet_containing(double x, double y) const;

  // point-location acceleration for facets
  struct Bins {
    int nx = 0, ny = 0;
    double x0 = 0, y0 = 0, dx = 1, dy = 1;
    std::vector<std::vector<int>> cells;
  };
  Bins bins;
  void build_bins();
};

// Certificate that f**(target) is realized by a convex combination of at
// most N+1 gradient points.
struct CaratheodoryDecomposition {
  std::vector<std::array<double, 2>> points;  // xi_i (second entry 0 in 1D)
  std::vector<double> weights;
  std::array<double, 2> target{0.0, 0.0};
  int dim = 1;
  double gap = 0.0;     // sum alpha_i f(xi_i) - env(target), >= 0
  double tol_xi = 0.0;  // reconstruction tolerance used
};

// values[j] = f(x, u, xi_j) over the grid nodes of `box`.
SampledFunction sample(const LagrangianSpec& spec, std::span<const double> x,
                       double u, const Box& box, std::span<const int> counts);

SampledFunction sample1(const LagrangianSpec& spec, double x, double u,
                        const GridAxis& axis);

// Lower convex hull of the finite sample points: the bipolar of f restricted
// to the grid.
ConvexEnvelope bipolar(const SampledFunction& f);

// Legendre-Fenchel conjugate on an explicit dual grid:
// g(s) = max_j (<s, xi_j> - f_j). Exactly the max over finite grid nodes.
SampledFunction conjugate(const SampledFunction& f,
                          std::span<const GridAxis> dual_axes);

// f_K: equals f on the closed ball ||xi|| <= K, infinity sentinel outside.
LagrangianSpec truncate(const LagrangianSpec& spec, double K);

// epsilon-optimal Caratheodory decomposition of env at target.
CaratheodoryDecomposition decompose(const ConvexEnvelope& env,
                                    const SampledFunction& f,
                                    std::span<const double> target,
                                    double epsilon);

// max over finite grid nodes of f - envelope (clamped at zero)
double envelope_gap(const SampledFunction& f, const ConvexEnvelope& env);

// --- serialization ---------------------------------------------------------

// Binary layout: int64 dim, then per axis {f64 lo, f64 hi, int64 count},
// then row-major f64 payload; all little-endian, sentinel +1.0e308.
void write_binary(const SampledFunction& f, std::ostream& os);
SampledFunction read_binary(std::istream& is);

void write_csv(const SampledFunction& f, std::ostream& os);
SampledFunction read_csv(std::istream& is);

// 1D: xi,value per breakpoint; 2D: facet list with vertex coordinates.
void write_envelope_csv(const ConvexEnvelope& env, std::ostream& os);

}  // namespace relaxo::convexify

#endif  // RELAXO_CONVEXIFY_HPP
