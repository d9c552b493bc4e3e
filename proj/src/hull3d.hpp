#ifndef RELAXO_SRC_HULL3D_HPP
#define RELAXO_SRC_HULL3D_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace relaxo::convexify::detail {

struct LowerHullFacet {
  std::array<int, 3> v;  // indices into the input point set
};

// Downward-facing facets of the convex hull of the lifted points
// (x_i, y_i, z_i). Input z values are perturbed downward by a deterministic
// hash-based amount of relative size `perturb_scale` to break coplanar ties;
// callers absorb the perturbation in their hull tolerance.
//
// Throws relaxo::Error when the projected points are collinear (no 2D hull
// exists); callers handle that case separately.
std::vector<LowerHullFacet> lower_hull_3d(std::span<const double> xs,
                                          std::span<const double> ys,
                                          std::span<const double> zs,
                                          double perturb_scale = 1e-12);

}  // namespace relaxo::convexify::detail

#endif  // RELAXO_SRC_HULL3D_HPP
