#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "destab/errors.hpp"
#include "destab/matrix.hpp"

namespace destab {

namespace detail {

inline Rational dot(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

inline Rational form(const Matrix& g, const Vector& a, const Vector& b) { return dot(a, g * b); }

}  // namespace detail

struct QpSolution {
  Vector x;
  // Indices of the constraints in the final active set.
  std::vector<std::size_t> active;
};

// Exact dual active-set method (Goldfarb–Idnani) for
//   minimize ½ xᵀ G x  subject to  rows[i]·x ≥ rhs[i],
// with G symmetric positive definite. Starts at the unconstrained minimum
// x = 0 and adds violated constraints one at a time, so no feasible start is
// needed. Returns nullopt when the constraints are infeasible.
inline std::optional<QpSolution> solve_inequality_qp(const Matrix& g, const std::vector<Vector>& rows,
                                                     const Vector& rhs) {
  const std::size_t n = g.rows();
  if (rows.size() != rhs.size()) throw DimensionError("constraint count mismatch");
  for (const auto& r : rows)
    if (r.size() != n) throw DimensionError("constraint row length mismatch");
  const Matrix g_inv = inverse(g);

  Vector x(n);
  std::vector<std::size_t> active;
  Vector mult;
  const std::size_t max_iter = 64 * (rows.size() + n + 1);
  std::size_t iter = 0;

  auto slack = [&](std::size_t j) -> Rational { return detail::dot(rows[j], x) - rhs[j]; };

  for (;;) {
    std::optional<std::size_t> p;
    Rational worst = 0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      Rational s = slack(j);
      if (s < worst) {
        worst = s;
        p = j;
      }
    }
    if (!p) return QpSolution{x, active};

    Rational mult_p = 0;
    for (;;) {
      if (++iter > max_iter) throw InvariantError("quadratic program did not terminate");
      const Vector& np = rows[*p];
      Vector gn = g_inv * np;
      Vector z = gn;
      Vector r;
      if (!active.empty()) {
        const std::size_t k = active.size();
        Matrix nmat(k, n);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t c = 0; c < n; ++c) nmat(a, c) = rows[active[a]][c];
        Matrix m = nmat * g_inv * nmat.transpose();
        r = inverse(m) * (nmat * gn);
        Vector corr = g_inv * (nmat.transpose() * r);
        for (std::size_t c = 0; c < n; ++c) z[c] -= corr[c];
      }

      std::optional<std::size_t> drop;
      std::optional<Rational> t1;
      for (std::size_t a = 0; a < r.size(); ++a) {
        if (sgn(r[a]) <= 0) continue;
        Rational ratio = mult[a] / r[a];
        if (!t1 || ratio < *t1) {
          t1 = ratio;
          drop = a;
        }
      }
      const bool z_zero = std::all_of(z.begin(), z.end(), [](const Rational& v) { return sgn(v) == 0; });
      if (z_zero && !t1) return std::nullopt;

      auto remove_active = [&](std::size_t a) {
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(a));
        mult.erase(mult.begin() + static_cast<std::ptrdiff_t>(a));
      };

      if (z_zero) {
        for (std::size_t a = 0; a < r.size(); ++a) mult[a] -= *t1 * r[a];
        mult_p += *t1;
        remove_active(*drop);
        continue;
      }

      Rational t2 = -slack(*p) / detail::dot(z, np);
      const bool full = !t1 || t2 <= *t1;
      const Rational t = full ? t2 : *t1;
      for (std::size_t c = 0; c < n; ++c) x[c] += t * z[c];
      for (std::size_t a = 0; a < r.size(); ++a) mult[a] -= t * r[a];
      mult_p += t;
      if (full) {
        active.push_back(*p);
        mult.push_back(mult_p);
        break;
      }
      remove_active(*drop);
    }
  }
}

// Point of conv(points) minimizing pᵀ G p (G symmetric positive definite),
// by Wolfe's nearest-point algorithm in exact arithmetic.
inline Vector nearest_point_interior(const std::vector<Vector>& points, const Matrix& g) {
  if (points.empty()) throw PreconditionError("nearest_point_interior needs at least one point");
  const std::size_t n = g.rows();
  for (const auto& p : points)
    if (p.size() != n) throw DimensionError("point length does not match the Gram matrix");

  auto ip = [&](const Vector& a, const Vector& b) { return detail::form(g, a, b); };
  auto combine = [&](const std::vector<std::size_t>& s, const Vector& w) {
    Vector x(n);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t c = 0; c < n; ++c) x[c] += w[i] * points[s[i]][c];
    return x;
  };

  std::size_t start = 0;
  for (std::size_t j = 1; j < points.size(); ++j)
    if (ip(points[j], points[j]) < ip(points[start], points[start])) start = j;
  std::vector<std::size_t> s{start};
  Vector w{Rational(1)};
  Vector x = points[start];

  const std::size_t max_iter = 64 * (points.size() + n + 1);
  std::size_t iter = 0;
  for (;;) {
    if (++iter > max_iter) throw InvariantError("nearest point iteration did not terminate");
    const Rational xx = ip(x, x);
    if (sgn(xx) == 0) return x;
    std::size_t j = 0;
    for (std::size_t k = 1; k < points.size(); ++k)
      if (ip(x, points[k]) < ip(x, points[j])) j = k;
    if (ip(x, points[j]) >= xx) return x;
    if (std::find(s.begin(), s.end(), j) != s.end()) return x;
    s.push_back(j);
    w.push_back(0);

    for (;;) {
      if (++iter > max_iter) throw InvariantError("nearest point iteration did not terminate");
      // Minimum-norm point of the affine hull of s: [K 1; 1ᵀ 0][v; μ] = [0; 1].
      const std::size_t k = s.size();
      Matrix sys(k + 1, k + 1);
      Vector rhs(k + 1);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) sys(a, b) = ip(points[s[a]], points[s[b]]);
        sys(a, k) = 1;
        sys(k, a) = 1;
      }
      rhs[k] = 1;
      auto sol = try_inverse(sys);
      if (!sol) throw InvariantError("affinely dependent corral in nearest point iteration");
      Vector v = *sol * rhs;
      v.resize(k);
      if (std::all_of(v.begin(), v.end(), [](const Rational& c) { return sgn(c) > 0; })) {
        w = v;
        x = combine(s, w);
        break;
      }
      std::optional<Rational> theta;
      for (std::size_t a = 0; a < k; ++a) {
        if (sgn(v[a]) > 0) continue;
        Rational t = w[a] / (w[a] - v[a]);
        if (!theta || t < *theta) theta = t;
      }
      for (std::size_t a = 0; a < k; ++a) w[a] = (1 - *theta) * w[a] + *theta * v[a];
      std::vector<std::size_t> s2;
      Vector w2;
      for (std::size_t a = 0; a < k; ++a)
        if (sgn(w[a]) > 0) {
          s2.push_back(s[a]);
          w2.push_back(w[a]);
        }
      s = std::move(s2);
      w = std::move(w2);
      x = combine(s, w);
    }
  }
}

}  // namespace destab
