#include "hull3d.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "relaxo/common.hpp"

namespace relaxo::convexify::detail {

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Face {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // neighbor across edge (v[k], v[k+1])
  Vec3 n;                 // outward unit normal
  double d;               // plane offset: dot(n, p) = d on the plane
  std::vector<int> conflict;
  bool alive = true;
};

struct HullBuilder {
  std::vector<Vec3> pts;
  std::vector<Face> faces;
  Vec3 interior{};  // point strictly inside the hull
  double eps_vis;

  double height(const Face& f, int p) const {
    return dot(f.n, pts[p]) - f.d;
  }
  bool sees(const Face& f, int p) const { return height(f, p) > eps_vis; }

  void set_plane(Face& f) {
    Vec3 a = pts[f.v[0]], b = pts[f.v[1]], c = pts[f.v[2]];
    Vec3 n = cross(sub(b, a), sub(c, a));
    double len = norm(n);
    if (len == 0.0) throw Error("degenerate hull face");
    n = {n.x / len, n.y / len, n.z / len};
    double d = dot(n, a);
    // orient outward: interior point on the negative side
    if (dot(n, interior) - d > 0.0) {
      std::swap(f.v[1], f.v[2]);
      n = {-n.x, -n.y, -n.z};
      d = -d;
    }
    f.n = n;
    f.d = d;
  }

  int add_face(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    f.nb = {-1, -1, -1};
    set_plane(f);
    faces.push_back(std::move(f));
    return int(faces.size()) - 1;
  }

  // directed edge (a, b) -> (face, slot) map used to wire adjacency
  void link(std::unordered_map<std::uint64_t, std::pair<int, int>>& edges,
            int face, int slot, int a, int b) {
    std::uint64_t key_rev = (std::uint64_t(std::uint32_t(b)) << 32) |
                            std::uint32_t(a);
    auto it = edges.find(key_rev);
    if (it != edges.end()) {
      faces[face].nb[slot] = it->second.first;
      faces[it->second.first].nb[it->second.second] = face;
      edges.erase(it);
    } else {
      std::uint64_t key = (std::uint64_t(std::uint32_t(a)) << 32) |
                          std::uint32_t(b);
      edges.emplace(key, std::make_pair(face, slot));
    }
  }

  void insert_point(int p, int start_face) {
    // collect visible faces by BFS
    std::vector<int> visible;
    std::vector<int> stack{start_face};
    std::vector<char> mark(faces.size(), 0);
    mark[start_face] = 1;
    while (!stack.empty()) {
      int fi = stack.back();
      stack.pop_back();
      visible.push_back(fi);
      for (int nb : faces[fi].nb) {
        if (nb >= 0 && !mark[nb] && faces[nb].alive && sees(faces[nb], p)) {
          mark[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
    // horizon: directed edges of visible faces bordering non-visible faces
    struct HorizonEdge {
      int a, b, outside;  // `outside` survives
    };
    std::vector<HorizonEdge> horizon;
    for (int fi : visible) {
      const Face& f = faces[fi];
      for (int k = 0; k < 3; ++k) {
        int nb = f.nb[k];
        if (nb < 0 || !mark[nb]) {
          horizon.push_back({f.v[k], f.v[(k + 1) % 3], nb});
        }
      }
    }
    // gather conflict candidates, retire visible faces
    std::vector<int> orphans;
    for (int fi : visible) {
      Face& f = faces[fi];
      f.alive = false;
      for (int q : f.conflict)
        if (q != p) orphans.push_back(q);
      f.conflict.clear();
    }
    std::sort(orphans.begin(), orphans.end());
    orphans.erase(std::unique(orphans.begin(), orphans.end()), orphans.end());

    // new faces around p
    std::unordered_map<std::uint64_t, std::pair<int, int>> open_edges;
    std::vector<int> fresh;
    for (const HorizonEdge& e : horizon) {
      int fi = add_face(e.a, e.b, p);
      fresh.push_back(fi);
      Face& f = faces[fi];
      // locate the (a,b) edge slot after possible reorientation
      for (int k = 0; k < 3; ++k) {
        int a = f.v[k], b = f.v[(k + 1) % 3];
        if ((a == e.a && b == e.b) || (a == e.b && b == e.a)) {
          f.nb[k] = e.outside;
          if (e.outside >= 0) {
            Face& g = faces[e.outside];
            for (int m = 0; m < 3; ++m) {
              int ga = g.v[m], gb = g.v[(m + 1) % 3];
              if ((ga == e.a && gb == e.b) || (ga == e.b && gb == e.a))
                g.nb[m] = fi;
            }
          }
        } else {
          link(open_edges, fi, k, a, b);
        }
      }
    }
    if (!open_edges.empty()) throw Error("hull adjacency did not close");

    // redistribute orphaned conflict points among the fresh faces
    for (int q : orphans) {
      for (int fi : fresh) {
        if (sees(faces[fi], q)) {
          faces[fi].conflict.push_back(q);
          break;
        }
      }
    }
  }
};

double hash01(std::uint64_t i) {
  std::uint64_t z = (i + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return double(z >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<LowerHullFacet> lower_hull_3d(std::span<const double> xs,
                                          std::span<const double> ys,
                                          std::span<const double> zs,
                                          double perturb_scale) {
  const std::size_t n = xs.size();
  if (n < 3) throw Error("lower_hull_3d needs at least 3 points");

  double zmag = 1.0, xmag = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    zmag = std::max(zmag, std::fabs(zs[i]));
    xmag = std::max({xmag, std::fabs(xs[i]), std::fabs(ys[i])});
  }
  const double eta = perturb_scale * zmag;

  HullBuilder hb;
  hb.pts.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    hb.pts[i] = {xs[i], ys[i], zs[i] - eta * (0.5 + 0.5 * hash01(i))};
  hb.eps_vis = 1e-13 * (zmag + xmag);

  // base triangle: spread-out points in the xy projection
  int p0 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const Vec3 &a = hb.pts[i], &b = hb.pts[p0];
    if (a.x < b.x || (a.x == b.x && a.y < b.y)) p0 = int(i);
  }
  int p1 = -1;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = hb.pts[i].x - hb.pts[p0].x, dy = hb.pts[i].y - hb.pts[p0].y;
    double d2 = dx * dx + dy * dy;
    if (d2 > best) {
      best = d2;
      p1 = int(i);
    }
  }
  if (best <= 0.0) throw Error("projected points coincide");
  int p2 = -1;
  best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = hb.pts[p1].x - hb.pts[p0].x, ay = hb.pts[p1].y - hb.pts[p0].y;
    double bx = hb.pts[i].x - hb.pts[p0].x, by = hb.pts[i].y - hb.pts[p0].y;
    double area = std::fabs(ax * by - ay * bx);
    if (area > best) {
      best = area;
      p2 = int(i);
    }
  }
  if (p2 < 0 || best < 1e-14 * xmag * xmag)
    throw Error("projected points are collinear");

  // synthetic cap far above: every face not touching it is a lower face
  double zmax = hb.pts[0].z, zmin = hb.pts[0].z;
  double cx = 0.0, cy = 0.0;
  for (const Vec3& q : hb.pts) {
    zmax = std::max(zmax, q.z);
    zmin = std::min(zmin, q.z);
    cx += q.x;
    cy += q.y;
  }
  cx /= double(n);
  cy /= double(n);
  const int cap = int(n);
  hb.pts.push_back({cx, cy, zmax + 16.0 * (zmax - zmin + xmag + 1.0)});

  hb.interior = {
      (hb.pts[p0].x + hb.pts[p1].x + hb.pts[p2].x + cx) / 4.0,
      (hb.pts[p0].y + hb.pts[p1].y + hb.pts[p2].y + cy) / 4.0,
      (hb.pts[p0].z + hb.pts[p1].z + hb.pts[p2].z + hb.pts[cap].z) / 4.0};

  hb.add_face(p0, p1, p2);
  hb.add_face(p0, p1, cap);
  hb.add_face(p1, p2, cap);
  hb.add_face(p2, p0, cap);
  {
    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
    for (int fi = 0; fi < 4; ++fi)
      for (int k = 0; k < 3; ++k)
        hb.link(edges, fi, k, hb.faces[fi].v[k], hb.faces[fi].v[(k + 1) % 3]);
    if (!edges.empty()) throw Error("initial tetrahedron did not close");
  }

  // deterministic shuffled insertion order
  std::vector<int> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    int q = int(i);
    if (q != p0 && q != p1 && q != p2) order.push_back(q);
  }
  Rng rng(0x5851f42d4c957f2dull);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);

  // seed conflicts
  std::vector<int> hint(n + 1, -1);
  for (int q : order) {
    for (int fi = 0; fi < int(hb.faces.size()); ++fi) {
      if (hb.faces[fi].alive && hb.sees(hb.faces[fi], q)) {
        hb.faces[fi].conflict.push_back(q);
        hint[q] = fi;
        break;
      }
    }
  }

  for (int q : order) {
    // find q's current face: scan are rare; conflict lists track liveness
    int at = -1;
    if (hint[q] >= 0 && hb.faces[hint[q]].alive && hb.sees(hb.faces[hint[q]], q))
      at = hint[q];
    else {
      for (int fi = 0; fi < int(hb.faces.size()); ++fi) {
        if (hb.faces[fi].alive && hb.sees(hb.faces[fi], q)) {
          at = fi;
          break;
        }
      }
    }
    if (at < 0) continue;  // inside the current hull
    std::size_t before = hb.faces.size();
    hb.insert_point(q, at);
    for (std::size_t fi = before; fi < hb.faces.size(); ++fi)
      for (int c : hb.faces[fi].conflict) hint[c] = int(fi);
  }

  std::vector<LowerHullFacet> out;
  for (const Face& f : hb.faces) {
    if (!f.alive) continue;
    if (f.v[0] == cap || f.v[1] == cap || f.v[2] == cap) continue;
    if (f.n.z < -1e-12) out.push_back({f.v});
  }
  return out;
}

}  // namespace relaxo::convexify::detail
