#pragma once

// Delaunay triangulation by incremental insertion (Bowyer-Watson) with a
// vertex at infinity, exact predicates, and a final pass that resolves
// cocircular quadrilaterals towards the lexicographically smallest diagonal.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcl/errors.hpp"
#include "mcl/geometry.hpp"
#include "mcl/predicates.hpp"

namespace mcl {

struct Circle {
  Point center;
  double radius = 0.0;
};

// Circumcircle of a, b, c. Computed relative to a in extended precision so
// nearly collinear triples of dense curve samples keep a usable center.
inline Circle circumcircle(Point a, Point b, Point c) {
  const long double bx = static_cast<long double>(b.x) - a.x, by = static_cast<long double>(b.y) - a.y;
  const long double cx = static_cast<long double>(c.x) - a.x, cy = static_cast<long double>(c.y) - a.y;
  const long double d = 2.0L * (bx * cy - by * cx);
  const long double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const long double ux = (cy * b2 - by * c2) / d, uy = (bx * c2 - cx * b2) / d;
  Circle out;
  out.center = {static_cast<double>(a.x + ux), static_cast<double>(a.y + uy)};
  out.radius = static_cast<double>(std::sqrt(ux * ux + uy * uy));
  return out;
}

struct Triangulation {
  static constexpr int kHull = -1;

  std::vector<Point> sites;
  std::vector<std::array<int, 3>> triangles;  // CCW site indices
  // neighbors[t][k] is the triangle across the edge opposite triangles[t][k], or kHull.
  std::vector<std::array<int, 3>> neighbors;
  std::vector<Circle> circumdata;

  std::size_t size() const noexcept { return triangles.size(); }

  // Index k such that triangles[t][k] == v, or -1.
  int local_index(int t, int v) const noexcept {
    for (int k = 0; k < 3; ++k)
      if (triangles[t][k] == v) return k;
    return -1;
  }

  void recompute_circumdata() {
    circumdata.resize(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
      const auto& tri = triangles[t];
      circumdata[t] = circumcircle(sites[tri[0]], sites[tri[1]], sites[tri[2]]);
    }
  }
};

// Flip the edge opposite local vertex k of triangle t. The quadrilateral must
// be strictly convex. Neighbor links and circumdata are kept consistent.
inline void flip_edge(Triangulation& T, int t, int k) {
  const int u = T.neighbors[t][k];
  if (u == Triangulation::kHull) throw DegenerateInput("cannot flip a hull edge");
  const int a = T.triangles[t][k], b = T.triangles[t][(k + 1) % 3], c = T.triangles[t][(k + 2) % 3];
  const int j = T.neighbors[u][0] == t ? 0 : T.neighbors[u][1] == t ? 1 : 2;
  const int d = T.triangles[u][j];
  const int n_ca = T.neighbors[t][(k + 1) % 3], n_ab = T.neighbors[t][(k + 2) % 3];
  // In u = (d, c, b): opposite c is edge (b, d), opposite b is edge (d, c).
  const int jc = T.local_index(u, c), jb = T.local_index(u, b);
  const int n_bd = T.neighbors[u][jc], n_dc = T.neighbors[u][jb];

  T.triangles[t] = {a, b, d};
  T.neighbors[t] = {n_bd, u, n_ab};
  T.triangles[u] = {a, d, c};
  T.neighbors[u] = {n_dc, n_ca, t};
  auto relink = [&](int n, int from, int to) {
    if (n == Triangulation::kHull) return;
    for (int& x : T.neighbors[n])
      if (x == from) x = to;
  };
  relink(n_bd, u, t);
  relink(n_ca, t, u);
  if (T.circumdata.size() == T.triangles.size()) {
    T.circumdata[t] = circumcircle(T.sites[a], T.sites[b], T.sites[d]);
    T.circumdata[u] = circumcircle(T.sites[a], T.sites[d], T.sites[c]);
  }
}

namespace detail {

// Position along a Hilbert curve on a 2^16 grid; used only for insertion order.
inline std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y) {
  constexpr std::uint32_t n = 1u << 16;
  std::uint64_t d = 0;
  for (std::uint32_t s = n / 2; s > 0; s /= 2) {
    const std::uint32_t rx = (x & s) ? 1u : 0u, ry = (y & s) ? 1u : 0u;
    d += static_cast<std::uint64_t>(s) * s * ((3u * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) x = n - 1 - x, y = n - 1 - y;
      std::swap(x, y);
    }
  }
  return d;
}

inline std::vector<int> hilbert_order(std::span<const Point> pts) {
  const BoundingBox box = BoundingBox::of(pts);
  const double scale = 65535.0 / std::max(box.width(), box.height());
  std::vector<std::pair<std::uint64_t, int>> keyed(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto gx = static_cast<std::uint32_t>(std::clamp((pts[i].x - box.xmin) * scale, 0.0, 65535.0));
    const auto gy = static_cast<std::uint32_t>(std::clamp((pts[i].y - box.ymin) * scale, 0.0, 65535.0));
    keyed[i] = {hilbert_index(gx, gy), static_cast<int>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) order[i] = keyed[i].second;
  return order;
}

// Working triangulation with ghost triangles: vertex kGhost is the point at infinity.
class BowyerWatson {
 public:
  static constexpr int kGhost = -1;

  explicit BowyerWatson(std::span<const Point> sites) : pts_(sites) {}

  void run() {
    const std::vector<int> order = hilbert_order(pts_);
    const int a = order[0], b = order[1];
    std::size_t third = 2;
    while (third < order.size() && predicates::orient(pts_[a], pts_[b], pts_[order[third]]) == 0) ++third;
    if (third == order.size()) throw DegenerateInput("all sites are collinear");
    int c = order[third];
    int p = a, q = b;
    if (predicates::orient(pts_[p], pts_[q], pts_[c]) < 0) std::swap(p, q);
    start(p, q, c);
    for (std::size_t i = 2; i < order.size(); ++i)
      if (i != third) insert(order[i]);
  }

  Triangulation finish() && {
    Triangulation T;
    T.sites.assign(pts_.begin(), pts_.end());
    std::vector<int> remap(tris_.size(), -1);
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!alive_[t] || is_ghost(static_cast<int>(t))) continue;
      remap[t] = static_cast<int>(T.triangles.size());
      T.triangles.push_back(tris_[t].v);
    }
    T.neighbors.resize(T.triangles.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (remap[t] < 0) continue;
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nb[k];
        T.neighbors[remap[t]][k] = remap[n] >= 0 ? remap[n] : Triangulation::kHull;
      }
    }
    T.recompute_circumdata();
    return T;
  }

 private:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // opposite v[k]
  };

  bool is_ghost(int t) const { return tris_[t].v[0] == kGhost || tris_[t].v[1] == kGhost || tris_[t].v[2] == kGhost; }

  int make(std::array<int, 3> v) {
    Tri tri{v, {-1, -1, -1}};
    if (!free_.empty()) {
      const int t = free_.back();
      free_.pop_back();
      tris_[t] = tri;
      alive_[t] = true;
      return t;
    }
    tris_.push_back(tri);
    alive_.push_back(true);
    return static_cast<int>(tris_.size()) - 1;
  }

  void link(int t, int k, int u, int j) { tris_[t].nb[k] = u, tris_[u].nb[j] = t; }

  void start(int a, int b, int c) {
    const int t = make({a, b, c});
    const int g0 = make({c, b, kGhost});  // across (b, c)
    const int g1 = make({a, c, kGhost});  // across (c, a)
    const int g2 = make({b, a, kGhost});  // across (a, b)
    link(t, 0, g0, 2);
    link(t, 1, g1, 2);
    link(t, 2, g2, 2);
    // Ghosts meet along the edges through infinity.
    link(g0, 0, g2, 1);  // edge (b, G)
    link(g0, 1, g1, 0);  // edge (G, c)
    link(g1, 1, g2, 0);  // edge (G, a)
    last_ = t;
  }

  bool conflicts(int t, Point x) const {
    const auto& v = tris_[t].v;
    for (int g = 0; g < 3; ++g) {
      if (v[g] != kGhost) continue;
      const Point p = pts_[v[(g + 1) % 3]], q = pts_[v[(g + 2) % 3]];
      const int o = predicates::orient(p, q, x);
      if (o != 0) return o > 0;
      // Collinear with the hull edge: conflict only strictly inside the segment.
      return dot(x - p, q - p) > 0 && dot(x - q, p - q) > 0;
    }
    return predicates::incircle(pts_[v[0]], pts_[v[1]], pts_[v[2]], x) > 0;
  }

  int locate(Point x) const {
    int t = last_;
    if (!alive_[t]) t = first_alive();
    if (is_ghost(t)) t = tris_[t].nb[ghost_slot(t)];
    for (std::size_t steps = 0; steps <= 4 * tris_.size() + 16; ++steps) {
      const auto& tri = tris_[t];
      if (is_ghost(t)) return t;
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        if (predicates::orient(pts_[tri.v[(k + 1) % 3]], pts_[tri.v[(k + 2) % 3]], x) < 0) {
          next = tri.nb[k];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // The visibility walk terminates on Delaunay triangulations; fall back to a scan.
    for (std::size_t u = 0; u < tris_.size(); ++u)
      if (alive_[u] && conflicts(static_cast<int>(u), x)) return static_cast<int>(u);
    throw DegenerateInput("point location failed");
  }

  int ghost_slot(int t) const {
    for (int k = 0; k < 3; ++k)
      if (tris_[t].v[k] == kGhost) return k;
    return -1;
  }

  int first_alive() const {
    for (std::size_t t = 0; t < tris_.size(); ++t)
      if (alive_[t]) return static_cast<int>(t);
    return 0;
  }

  void insert(int s) {
    const Point x = pts_[s];
    const int t0 = locate(x);
    cavity_.clear();
    boundary_.clear();
    stamp_.resize(tris_.size(), 0);
    ++epoch_;
    cavity_.push_back(t0);
    stamp_[t0] = epoch_;
    for (std::size_t i = 0; i < cavity_.size(); ++i) {
      const int t = cavity_[i];
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nb[k];
        if (stamp_[n] == epoch_) continue;
        if (conflicts(n, x)) {
          stamp_[n] = epoch_;
          cavity_.push_back(n);
        } else {
          boundary_.push_back({t, k});
        }
      }
    }
    // A neighbor rejected earlier may join the cavity later; keep only real boundary edges.
    std::vector<std::pair<int, int>> edges;
    edges.reserve(boundary_.size());
    for (auto [t, k] : boundary_)
      if (stamp_[tris_[t].nb[k]] != epoch_) edges.emplace_back(t, k);

    by_start_.clear();
    by_end_.clear();
    std::vector<std::pair<int, int>> created;  // (triangle, outer neighbor)
    for (auto [t, k] : edges) {
      const int u = tris_[t].v[(k + 1) % 3], w = tris_[t].v[(k + 2) % 3], outer = tris_[t].nb[k];
      const int nt = make({u, w, s});  // may reallocate tris_
      created.emplace_back(nt, outer);
    }
    for (int t : cavity_) {
      alive_[t] = false;
      free_.push_back(t);
    }
    for (auto [nt, outer] : created) {
      const auto& v = tris_[nt].v;
      tris_[nt].nb[2] = outer;
      auto& onb = tris_[outer].nb;
      for (int j = 0; j < 3; ++j) {
        const int a = tris_[outer].v[(j + 1) % 3], b = tris_[outer].v[(j + 2) % 3];
        if (a == v[1] && b == v[0]) onb[j] = nt;
      }
      by_start_[v[0]] = nt;
      by_end_[v[1]] = nt;
    }
    for (auto [nt, outer] : created) {
      const auto& v = tris_[nt].v;
      tris_[nt].nb[0] = by_start_.at(v[1]);  // edge (w, s) is shared with the triangle starting at w
      tris_[nt].nb[1] = by_end_.at(v[0]);    // edge (s, u) with the triangle ending at u
    }
    last_ = created.front().first;
  }

  std::span<const Point> pts_;
  std::vector<Tri> tris_;
  std::vector<char> alive_;
  std::vector<int> free_;
  std::vector<int> cavity_;
  std::vector<std::pair<int, int>> boundary_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  std::unordered_map<int, int> by_start_, by_end_;
  int last_ = 0;
};

inline bool lex_less_pair(std::pair<Point, Point> a, std::pair<Point, Point> b) {
  if (lex_less(a.first, b.first)) return true;
  if (lex_less(b.first, a.first)) return false;
  return lex_less(a.second, b.second);
}

inline std::pair<Point, Point> diagonal_key(Point p, Point q) {
  return lex_less(q, p) ? std::make_pair(q, p) : std::make_pair(p, q);
}

// Among cocircular quadrilaterals, keep the diagonal with the smaller key.
// Each flip lowers the sorted multiset of diagonal keys, so the pass terminates.
inline void resolve_cocircular(Triangulation& T) {
  std::vector<std::pair<int, int>> stack;
  for (int t = 0; t < static_cast<int>(T.size()); ++t)
    for (int k = 0; k < 3; ++k)
      if (T.neighbors[t][k] > t) stack.emplace_back(t, k);
  while (!stack.empty()) {
    auto [t, k] = stack.back();
    stack.pop_back();
    const int u = T.neighbors[t][k];
    if (u == Triangulation::kHull) continue;
    const auto& tri = T.triangles[t];
    const int a = tri[k], b = tri[(k + 1) % 3], c = tri[(k + 2) % 3];
    const int j = T.neighbors[u][0] == t ? 0 : T.neighbors[u][1] == t ? 1 : 2;
    if (T.neighbors[u][j] != t) continue;
    const int d = T.triangles[u][j];
    const auto& S = T.sites;
    if (predicates::incircle(S[a], S[b], S[c], S[d]) != 0) continue;
    if (!lex_less_pair(diagonal_key(S[a], S[d]), diagonal_key(S[b], S[c]))) continue;
    flip_edge(T, t, k);
    for (int tt : {t, u})
      for (int kk = 0; kk < 3; ++kk)
        if (T.neighbors[tt][kk] != Triangulation::kHull) stack.emplace_back(tt, kk);
  }
}

}  // namespace detail

/// Delaunay triangulation of at least three distinct, not all collinear sites.
inline Triangulation delaunay_triangulate(std::span<const Point> sites) {
  if (sites.size() < 3) throw DegenerateInput("Delaunay triangulation needs at least 3 sites");
  for (const Point& p : sites)
    if (!is_finite(p)) throw DegenerateInput("non-finite site");
  std::vector<Point> sorted(sites.begin(), sites.end());
  std::sort(sorted.begin(), sorted.end(), lex_less);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DegenerateInput("duplicate sites");

  detail::BowyerWatson bw(sites);
  bw.run();
  Triangulation T = std::move(bw).finish();
  detail::resolve_cocircular(T);
  T.recompute_circumdata();
  return T;
}

inline Triangulation delaunay_triangulate(const std::vector<Point>& sites) {
  return delaunay_triangulate(std::span<const Point>(sites));
}

struct LiftedPoint {
  double x = 0, y = 0, z = 0;
};

// Lift to the paraboloid z = x^2 + y^2.
inline std::vector<LiftedPoint> lift(std::span<const Point> sites) {
  std::vector<LiftedPoint> out;
  out.reserve(sites.size());
  for (const Point& p : sites) out.push_back({p.x, p.y, p.x * p.x + p.y * p.y});
  return out;
}

/// True iff every triangle spans a lower face of the lifted point set: all
/// other lifted sites lie on or above its plane (tolerance relative to the lift's extent).
inline bool verify_lower_hull(const Triangulation& T, double rel_tol = 1e-9) {
  const std::vector<LiftedPoint> L = lift(T.sites);
  double scale = 1.0;
  for (const auto& p : L) scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  for (const auto& tri : T.triangles) {
    const LiftedPoint &A = L[tri[0]], &B = L[tri[1]], &C = L[tri[2]];
    const double ux = B.x - A.x, uy = B.y - A.y, uz = B.z - A.z;
    const double vx = C.x - A.x, vy = C.y - A.y, vz = C.z - A.z;
    const double nx = uy * vz - uz * vy, ny = uz * vx - ux * vz, nz = ux * vy - uy * vx;
    const double nn = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (predicates::orient(T.sites[tri[0]], T.sites[tri[1]], T.sites[tri[2]]) <= 0) return false;
    for (std::size_t s = 0; s < L.size(); ++s) {
      if (static_cast<int>(s) == tri[0] || static_cast<int>(s) == tri[1] || static_cast<int>(s) == tri[2]) continue;
      const double h = (nx * (L[s].x - A.x) + ny * (L[s].y - A.y) + nz * (L[s].z - A.z)) / nn;
      if (h < -rel_tol * scale) return false;
    }
  }
  return true;
}

}  // namespace mcl
