#pragma once

// Seeded property corpora. Every case is a JSON document, so a failing case
// can be shrunk and replayed through the same check.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "destab/errors.hpp"
#include "destab/gcr.hpp"
#include "destab/group.hpp"
#include "destab/instability.hpp"
#include "destab/io.hpp"
#include "destab/matrix.hpp"
#include "destab/parallel.hpp"
#include "destab/rational.hpp"
#include "destab/representation.hpp"
#include "destab/rparabolic.hpp"

namespace destab::corpus {

using json = io::json;
using Rng = std::mt19937_64;

struct Outcome {
  enum class Kind { Pass, Skip, Fail, Invalid };
  Kind kind = Kind::Pass;
  std::string message;

  static Outcome pass() { return {}; }
  static Outcome skip(std::string why) { return {Kind::Skip, std::move(why)}; }
  static Outcome fail(std::string why) { return {Kind::Fail, std::move(why)}; }
};

struct Profile {
  std::string name;
  std::size_t default_size;
  std::function<json(Rng&)> generate;
  std::function<Outcome(const json&)> check;
  std::size_t shrink_budget = 200;  // check evaluations spent minimizing one failure
};

struct CaseFailure {
  std::size_t index = 0;
  std::string message;
  json input;
  json minimized;
};

struct CorpusReport {
  std::string profile;
  std::uint64_t seed = 0;
  std::size_t size = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;
  std::vector<CaseFailure> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

inline std::int64_t uniform(Rng& r, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(r);
}
inline bool coin(Rng& r, int percent = 50) { return uniform(r, 0, 99) < percent; }

template <class T>
const T& pick(Rng& r, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uniform(r, 0, static_cast<std::int64_t>(xs.size()) - 1))];
}

inline Rational small_rational(Rng& r) { return q(uniform(r, -3, 3), uniform(r, 1, 3)); }
inline Rational nonzero_rational(Rng& r) {
  std::int64_t n = 0;
  while (n == 0) n = uniform(r, -3, 3);
  return q(n, uniform(r, 1, 3));
}
inline std::int64_t nonzero_int(Rng& r, std::int64_t k) {
  std::int64_t n = 0;
  while (n == 0) n = uniform(r, -k, k);
  return n;
}

inline const Matrix& frame(Rng& r, const std::vector<Matrix>& family) { return pick(r, family); }

// Exponents in [−3, 3] that lie in the cocharacter lattice and are not central.
inline TorusCocharacter noncentral(Rng& r, const GroupSpec& group) {
  for (;;) {
    std::vector<std::int64_t> d(group.dimension());
    for (auto& x : d) x = uniform(r, -3, 3);
    for (std::size_t b = 0; b < group.factors().size(); ++b) {
      if (group.factors()[b].family != Family::SL) continue;
      const auto o = group.block_offset(b), n = group.factors()[b].rank;
      std::int64_t s = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) s += d[o + i];
      d[o + n - 1] = -s;
    }
    TorusCocharacter t(d);
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j)
        if (group.same_block(i, j) && d[i] != d[j]) return t;
  }
}

// base·(1 + N)·base⁻¹ with N supported where d_i > d_j.
inline Matrix ru_element(Rng& r, const GroupSpec& group, const Cocharacter& lambda) {
  const auto m = group.dimension();
  Matrix n = Matrix::identity(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (group.same_block(i, j) && lambda.torus()[i] > lambda.torus()[j]) n(i, j) = small_rational(r);
  return lambda.base() * n * lambda.base_inverse();
}

// base·ℓ·base⁻¹ with ℓ in the Levi of the frame: a torus element (determinant
// one on SL blocks) times transvections inside the level sets of d.
inline Matrix levi_element(Rng& r, const GroupSpec& group, const Cocharacter& lambda) {
  const auto m = group.dimension();
  const auto& d = lambda.torus();
  Matrix l = Matrix::identity(m);
  for (std::size_t b = 0; b < group.factors().size(); ++b) {
    const auto o = group.block_offset(b), n = group.factors()[b].rank;
    Rational prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      l(o + i, o + i) = nonzero_rational(r);
      prod *= l(o + i, o + i);
    }
    if (group.factors()[b].family == Family::SL) l(o + n - 1, o + n - 1) /= prod;
  }
  for (int k = 0; k < 3; ++k) {
    const auto i = static_cast<std::size_t>(uniform(r, 0, static_cast<std::int64_t>(m) - 1));
    const auto j = static_cast<std::size_t>(uniform(r, 0, static_cast<std::int64_t>(m) - 1));
    if (i == j || !group.same_block(i, j) || d[i] != d[j]) continue;
    Matrix t = Matrix::identity(m);
    t(i, j) = small_rational(r);
    l = l * t;
  }
  return lambda.base() * l * lambda.base_inverse();
}

// A product of transvections and (on GL blocks) a diagonal matrix.
inline Matrix invertible(Rng& r, const GroupSpec& group) {
  const auto m = group.dimension();
  Matrix g = Matrix::identity(m);
  for (std::size_t b = 0; b < group.factors().size(); ++b) {
    if (group.factors()[b].family != Family::GL) continue;
    const auto o = group.block_offset(b);
    for (std::size_t i = 0; i < group.factors()[b].rank; ++i) g(o + i, o + i) = Rational(nonzero_int(r, 2));
  }
  for (int k = 0; k < 4; ++k) {
    const auto i = static_cast<std::size_t>(uniform(r, 0, static_cast<std::int64_t>(m) - 1));
    const auto j = static_cast<std::size_t>(uniform(r, 0, static_cast<std::int64_t>(m) - 1));
    if (i == j || !group.same_block(i, j)) continue;
    Matrix t = Matrix::identity(m);
    t(i, j) = Rational(nonzero_int(r, 2));
    g = g * t;
  }
  return g;
}

// Coordinates with the given degree predicate, each nonzero with the given chance.
template <class Keep>
inline Point frame_point(Rng& r, const Representation& rep, const TorusCocharacter& d, Keep keep, int percent = 75) {
  Point w = Point::zero(rep.dim());
  for (std::size_t b = 0; b < rep.dim(); ++b)
    if (keep(pairing(d, rep.weight(b))) && coin(r, percent)) w.coords[b] = nonzero_rational(r);
  return w;
}

struct Setting {
  GroupSpec group;
  Representation rep;
};

// Groups and modules shared by the limit suites: matrix tuples under
// conjugation (including a product group) and binary forms.
inline Setting limit_setting(Rng& r) {
  switch (uniform(r, 0, 6)) {
    case 0: return {GroupSpec::gl(2), Representation::conjugation_tuples(2, static_cast<std::size_t>(uniform(r, 1, 2)))};
    case 1: return {GroupSpec::sl(2), Representation::conjugation_tuples(2, 1)};
    case 2: return {GroupSpec::gl(3), Representation::conjugation_tuples(3, static_cast<std::size_t>(uniform(r, 1, 2)))};
    case 3: return {GroupSpec::sl(3), Representation::conjugation_tuples(3, 1)};
    case 4: return {GroupSpec({{Family::GL, 2}, {Family::SL, 2}}), Representation::conjugation_tuples(4, 1)};
    case 5: return {GroupSpec::gl(2), Representation::sym_power(static_cast<std::size_t>(uniform(r, 2, 5)))};
    default: return {GroupSpec::sl(2), Representation::sym_power(static_cast<std::size_t>(uniform(r, 2, 5)))};
  }
}

inline Cocharacter random_lambda(Rng& r, const GroupSpec& group) {
  const auto family = SearchConfig::weyl_shear(group, 1, 2).family;
  return Cocharacter(group, frame(r, family), noncentral(r, group));
}

inline json point_doc(const Point& p) { return io::to_json(p.coords); }
inline Point point_of(const Representation& rep, const json& j) { return io::point_from_json(rep, j); }

inline std::vector<Point> points_of(const Representation& rep, const json& j) {
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(point_of(rep, p));
  return out;
}

inline std::string show(const Representation& rep, const Point& p) { return io::to_json(rep, p).dump(); }

inline Point sum_where(const Grading& g, std::size_t dim, const std::function<bool(std::int64_t)>& keep) {
  Point s = Point::zero(dim);
  for (const auto& [n, c] : g.components)
    if (keep(n)) s += c;
  return s;
}

inline Point component(const Grading& g, std::int64_t n, std::size_t dim) {
  auto it = g.components.find(n);
  return it == g.components.end() ? Point::zero(dim) : it->second;
}

inline bool subspace(const RowSpace& a, const RowSpace& b) {
  for (const auto& v : a.canonical_basis())
    if (!b.contains(v)) return false;
  return true;
}

inline std::size_t intersection_dim(const RowSpace& a, const RowSpace& b) {
  RowSpace sum = a;
  for (const auto& v : b.canonical_basis()) sum.insert(v);
  return a.dim() + b.dim() - sum.dim();
}

// ---- gcr corpus shared by oracle-agreement, centralizer and lie ----

inline SearchConfig gcr_config(const GroupSpec& group) { return SearchConfig::weyl_shear(group, 4, 2); }

inline Matrix small_int_matrix(Rng& r, std::size_t m) {
  for (;;) {
    Matrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = Rational(uniform(r, -2, 2));
    if (sgn(determinant(a)) != 0) return a;
  }
}

inline Matrix upper_int_matrix(Rng& r, std::size_t m, bool unipotent) {
  Matrix b(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    b(i, i) = unipotent ? Rational(1) : Rational(nonzero_int(r, 2));
    for (std::size_t j = i + 1; j < m; ++j) b(i, j) = Rational(uniform(r, -2, 2));
  }
  return b;
}

inline Matrix diagonal_matrix(Rng& r, std::size_t m) {
  static const std::vector<Rational> entries{q(1), q(-1), q(2), q(3), q(1, 2), q(-2), q(4, 3)};
  Matrix d(m, m);
  for (std::size_t i = 0; i < m; ++i) d(i, i) = pick(r, entries);
  return d;
}

inline json subgroup_doc(const GroupSpec& group, const std::vector<Matrix>& gens) {
  return {{"group", io::to_json(group)}, {"generators", io::to_json(gens)}};
}

// Subgroups of GL_2 / GL_3 from 1–3 generators: random small-integer
// matrices, or conjugates by one family frame of upper triangular and
// diagonal integer matrices.
inline json gcr_case(Rng& r) {
  const auto m = static_cast<std::size_t>(uniform(r, 2, 3));
  const auto group = GroupSpec::gl(m);
  const auto family = gcr_config(group).family;
  const auto count = static_cast<std::size_t>(uniform(r, 1, 3));
  const auto mode = uniform(r, 0, 3);
  const Matrix f = frame(r, family);
  const Matrix f_inv = inverse(f);
  std::vector<Matrix> gens;
  for (std::size_t k = 0; k < count; ++k) {
    switch (mode) {
      case 0: gens.push_back(small_int_matrix(r, m)); break;
      case 1: gens.push_back(f * upper_int_matrix(r, m, coin(r)) * f_inv); break;
      case 2: gens.push_back(f * diagonal_matrix(r, m) * f_inv); break;
      default:
        gens.push_back(f * (coin(r) ? upper_int_matrix(r, m, false) : diagonal_matrix(r, m)) * f_inv);
        break;
    }
  }
  return subgroup_doc(group, gens);
}

// Unipotent and diagonalizable generators, for the Lie comparison.
inline json lie_case(Rng& r) {
  const auto m = static_cast<std::size_t>(uniform(r, 2, 3));
  const auto group = GroupSpec::gl(m);
  const auto family = gcr_config(group).family;
  const Matrix f = coin(r, 80) ? frame(r, family) : invertible(r, group);
  const Matrix f_inv = inverse(f);
  const auto count = static_cast<std::size_t>(uniform(r, 1, 2));
  const auto mode = uniform(r, 0, 2);
  std::vector<Matrix> gens;
  for (std::size_t k = 0; k < count; ++k) {
    const bool unip = mode == 0 || (mode == 2 && k == 0);
    gens.push_back(f * (unip ? upper_int_matrix(r, m, true) : diagonal_matrix(r, m)) * f_inv);
  }
  return subgroup_doc(group, gens);
}

// Rational roots of the characteristic polynomial with multiplicities, or
// nullopt when some root is irrational. Faddeev–LeVerrier for the coefficients.
inline std::optional<std::vector<Rational>> rational_spectrum(const Matrix& a) {
  const auto m = a.rows();
  std::vector<Rational> c(m + 1);  // c[k] multiplies x^(m−k)
  c[0] = 1;
  Matrix mk = Matrix::identity(m);
  for (std::size_t k = 1; k <= m; ++k) {
    Matrix am = a * mk;
    c[k] = -am.trace() / Rational(static_cast<long>(k));
    mk = am + Matrix::identity(m) * c[k];
  }
  std::vector<Rational> poly = c;
  std::vector<Rational> roots;
  // Candidate roots ±p/q: p | numerator of the scaled constant term, q | leading.
  auto divisors = [](mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= n; ++d)
      if (n % d == 0) {
        out.push_back(d);
        if (d * d != n) out.push_back(n / d);
      }
    return out;
  };
  while (poly.size() > 1) {
    if (sgn(poly.back()) == 0) {
      roots.push_back(0);
      poly.pop_back();
      continue;
    }
    mpz_class lcm = 1;
    for (const auto& x : poly) lcm = lcm * x.get_den() / gcd(lcm, x.get_den());
    const mpz_class lead = mpz_class(poly.front() * lcm), tail = mpz_class(poly.back() * lcm);
    std::optional<Rational> root;
    for (const auto& p : divisors(tail)) {
      for (const auto& qd : divisors(lead)) {
        for (int s : {1, -1}) {
          Rational x(p * s, qd);
          x.canonicalize();
          Rational val = 0;
          for (const auto& co : poly) val = val * x + co;
          if (sgn(val) == 0) root = x;
          if (root) break;
        }
        if (root) break;
      }
      if (root) break;
    }
    if (!root) return std::nullopt;
    roots.push_back(*root);
    std::vector<Rational> next(poly.size() - 1);  // synthetic division
    Rational carry = 0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      carry = carry * *root + poly[i];
      next[i] = carry;
    }
    poly = std::move(next);
  }
  return roots;
}

// Tangent directions of the Zariski closure of ⟨g⟩ for g with rational
// spectrum: log of the unipotent part, and for each prime p the semisimple
// direction Σ_c v_p(c)·π_c over generalized eigenspaces.
inline std::optional<std::vector<Matrix>> generator_tangents(const Matrix& g) {
  const auto m = g.rows();
  auto spec = rational_spectrum(g);
  if (!spec) return std::nullopt;
  std::vector<Rational> eig = *spec;
  std::sort(eig.begin(), eig.end());
  eig.erase(std::unique(eig.begin(), eig.end()), eig.end());
  std::vector<Vector> cols;
  std::vector<std::size_t> owner;
  for (std::size_t e = 0; e < eig.size(); ++e) {
    const Matrix n = power(g - Matrix::identity(m) * eig[e], static_cast<unsigned>(m));
    for (auto& v : nullspace(n)) {
      cols.push_back(v);
      owner.push_back(e);
    }
  }
  if (cols.size() != m) throw InvariantError("generalized eigenspaces do not span");
  Matrix b(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) b(i, j) = cols[j][i];
  const Matrix b_inv = inverse(b);
  std::vector<Matrix> proj;
  for (std::size_t e = 0; e < eig.size(); ++e) {
    Matrix d(m, m);
    for (std::size_t j = 0; j < m; ++j)
      if (owner[j] == e) d(j, j) = 1;
    proj.push_back(b * d * b_inv);
  }
  Matrix s(m, m);
  for (std::size_t e = 0; e < eig.size(); ++e) s = s + proj[e] * eig[e];
  std::vector<Matrix> out;
  const Matrix u = inverse(s) * g;
  if (!u.is_identity()) out.push_back(unipotent_log(u));
  std::map<unsigned long, Matrix> by_prime;
  for (std::size_t e = 0; e < eig.size(); ++e) {
    const std::pair<mpz_class, long> parts[] = {{abs(eig[e].get_num()), 1}, {eig[e].get_den(), -1}};
    for (auto [n, sign] : parts) {
      for (unsigned long p = 2; n > 1; ++p) {
        long k = 0;
        while (n % p == 0) {
          n /= p;
          ++k;
        }
        if (k == 0) continue;
        auto [it, _] = by_prime.try_emplace(p, Matrix(m, m));
        it->second = it->second + proj[e] * Rational(sign * k);
      }
    }
  }
  for (auto& [p, t] : by_prime)
    if (!t.is_zero()) out.push_back(t);
  return out;
}

}  // namespace detail

// ---- profiles ----

namespace suites {

using namespace destab::corpus::detail;

inline Profile ruconj() {
  Profile p{"ruconj", 100, nullptr, nullptr};
  p.generate = [](Rng& r) {
    auto [group, rep] = limit_setting(r);
    const auto lambda = random_lambda(r, group);
    const Matrix u = ru_element(r, group, lambda);
    const bool fixed = coin(r);
    // v = u⁻¹·(v₀ + p) with v₀ λ-fixed and p of positive degree (absent when fixed).
    Point w = frame_point(r, rep, lambda.torus(), [](auto n) { return n == 0; });
    if (!fixed) {
      Point extra = frame_point(r, rep, lambda.torus(), [](auto n) { return n != 0; }, 40);
      w += extra;
    }
    const Point v = rep.act(inverse(u), u, from_frame(rep, lambda, w));
    json doc{{"group", io::to_json(group)}, {"rep", io::to_json(rep)}, {"lambda", io::to_json(lambda)},
             {"u", io::to_json(u)},         {"v", point_doc(v)}};
    if (fixed) doc["expect"] = true;
    return doc;
  };
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto rep = io::representation_from_json(doc.at("rep"));
    rep.check_compatible(group);
    const auto lambda = io::cocharacter_from_json(group, doc.at("lambda"));
    const Matrix u = io::matrix_from_json(doc.at("u"));
    const Point v = point_of(rep, doc.at("v"));
    if (classify(group, u, lambda) != MembershipClass::InRu) throw PreconditionError("u is not in R_u(P_lambda)");
    const Matrix u_inv = inverse(u);
    const auto lim = limit(rep, v, lambda);
    const bool lhs = lim && *lim == rep.act(u, u_inv, v);
    const Cocharacter moved(group, u_inv * lambda.base(), lambda.torus());
    const bool rhs = is_fixed(rep, v, moved);
    if (lhs != rhs)
      return Outcome::fail(std::string("limit = u.v is ") + (lhs ? "true" : "false") + " but u^-1.lambda fixes v is " +
                           (rhs ? "true" : "false"));
    if (doc.contains("expect") && doc.at("expect").get<bool>() != lhs) return Outcome::fail("expected direction not met");
    return Outcome::pass();
  };
  return p;
}

inline Profile equivariance() {
  Profile p{"equivariance", 100, nullptr, nullptr};
  p.generate = [](Rng& r) {
    auto [group, rep] = limit_setting(r);
    const auto lambda = random_lambda(r, group);
    const Matrix x = levi_element(r, group, lambda) * ru_element(r, group, lambda);
    const Point w = frame_point(r, rep, lambda.torus(), [](auto n) { return n >= 0; });
    return json{{"group", io::to_json(group)}, {"rep", io::to_json(rep)}, {"lambda", io::to_json(lambda)},
                {"x", io::to_json(x)},         {"v", point_doc(from_frame(rep, lambda, w))}};
  };
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto rep = io::representation_from_json(doc.at("rep"));
    rep.check_compatible(group);
    const auto lambda = io::cocharacter_from_json(group, doc.at("lambda"));
    const Matrix x = io::matrix_from_json(doc.at("x"));
    const Point v = point_of(rep, doc.at("v"));
    if (!in_parabolic(group, x, lambda)) throw PreconditionError("x is not in P_lambda");
    const auto lim = limit(rep, v, lambda);
    if (!lim) throw PreconditionError("v has no limit");
    const auto moved = limit(rep, rep.act(x, v), lambda);
    if (!moved) return Outcome::fail("x.v has no limit");
    const Point expected = rep.act(c_lambda(group, x, lambda), *lim);
    if (*moved != expected)
      return Outcome::fail("lim x.v = " + show(rep, *moved) + " but c_lambda(x).lim v = " + show(rep, expected));
    return Outcome::pass();
  };
  return p;
}

// Jordan-form nilpotents and unstable binary forms, each moved by a family frame.
inline Profile kempf() {
  Profile p{"kempf", 20, nullptr, nullptr, 40};
  p.generate = [](Rng& r) {
    const auto kind = uniform(r, 0, 3);
    GroupSpec group = kind == 1 ? GroupSpec::sl(2) : kind == 2 ? GroupSpec::gl(3) : GroupSpec::gl(2);
    const auto m = group.dimension();
    const std::int64_t box = m == 3 ? 3 : 4, shear = m == 3 ? 1 : 2;
    const auto family = SearchConfig::weyl_shear(group, box, shear).family;
    const Matrix f = frame(r, family), f_inv = inverse(f);
    Representation rep = Representation::conjugation_tuples(m, 1);
    std::vector<Point> xs;
    std::vector<Matrix> samples;
    if (kind == 3) {
      rep = Representation::sym_power(static_cast<std::size_t>(uniform(r, 2, 5)));
      const TorusCocharacter d({1, -1});
      const auto count = uniform(r, 1, 2);
      for (std::int64_t k = 0; k < count; ++k) {
        Point w = frame_point(r, rep, d, [](auto n) { return n > 0; });
        if (w.is_zero()) w = frame_point(r, rep, d, [](auto n) { return n > 0; }, 100);
        xs.push_back(rep.act(f, f_inv, w));
      }
      if (rep.degree() % 2 == 0) samples.push_back(Matrix::identity(2) * Rational(-1));
    } else {
      // Jordan type: one block of size m, or (2, 1) in GL_3.
      Matrix n(m, m);
      const bool regular = m == 2 || coin(r);
      for (std::size_t i = 0; i + 1 < m; ++i)
        if (regular || i == 0) n(i, i + 1) = nonzero_rational(r);
      const Matrix x = f * n * f_inv;
      xs.push_back(point_from_matrices(std::vector<Matrix>{x}));
      const Matrix id = Matrix::identity(m);
      samples.push_back(id + x * nonzero_rational(r));
      if (m == 3) samples.push_back(id + x * x * nonzero_rational(r));
      if (group.factors()[0].family == Family::GL) samples.push_back(id * Rational(2));
    }
    std::vector<Matrix> gs;
    for (int k = 0; k < 5; ++k) gs.push_back(invertible(r, group));
    json pts = json::array();
    for (const auto& x : xs) pts.push_back(point_doc(x));
    return json{{"group", io::to_json(group)},
                {"rep", io::to_json(rep)},
                {"config", {{"exponent_box", box}, {"shear_bound", shear}}},
                {"points", pts},
                {"conjugators", io::to_json(gs)},
                {"samples", io::to_json(samples)}};
  };
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto rep = io::representation_from_json(doc.at("rep"));
    const auto xs = points_of(rep, doc.at("points"));
    const auto gs = io::matrices_from_json(doc.at("conjugators"));
    const auto samples = io::matrices_from_json(doc.at("samples"));
    const auto s = SubvarietySpec::zero_locus(rep);
    for (std::size_t k = 0; k < gs.size(); ++k) {
      SearchConfig cfg = io::config_from_json(group, doc.at("config"));
      cfg.threads = 1;
      const Matrix g = gs[k], g_inv = inverse(g);
      cfg.family.push_back(g_inv);
      cfg.normalizer_samples = samples;
      const auto base = optimize(group, rep, xs, s, cfg);
      if (base.status == OptimizationStatus::Destabilized && !base.certificate.normalizer_outside.empty())
        return Outcome::fail("normalizer sample " + std::to_string(base.certificate.normalizer_outside.front()) +
                             " lies outside P(X,S)");
      std::vector<Point> moved;
      for (const auto& x : xs) moved.push_back(rep.act(g, g_inv, x));
      const auto res = optimize(group, rep, moved, s.transformed(rep, g), cfg.transported(g));
      const std::string tag = "conjugator " + std::to_string(k) + ": ";
      if (res.status != base.status) return Outcome::fail(tag + "status differs");
      if (res.value_sq != base.value_sq)
        return Outcome::fail(tag + "value " + format_rational(res.value_sq) + " vs " + format_rational(base.value_sq));
      if (base.status == OptimizationStatus::Destabilized &&
          !base.parabolic->conjugated(group, g).same_subgroup(*res.parabolic))
        return Outcome::fail(tag + "P(gX, gS) is not g.P(X,S).g^-1");
    }
    return Outcome::pass();
  };
  return p;
}

inline Profile dblecochar() {
  Profile p{"dblecochar", 50, nullptr, nullptr};
  p.generate = [](Rng& r) {
    Setting st = [&]() -> Setting {
      switch (uniform(r, 0, 4)) {
        case 0: return {GroupSpec::gl(2), Representation::conjugation_tuples(2, 1)};
        case 1: return {GroupSpec::gl(3), Representation::conjugation_tuples(3, 1)};
        case 2: return {GroupSpec::sl(3), Representation::conjugation_tuples(3, 1)};
        case 3: return {GroupSpec({{Family::GL, 2}, {Family::SL, 2}}), Representation::conjugation_tuples(4, 1)};
        default: return {GroupSpec::gl(2), Representation::sym_power(static_cast<std::size_t>(uniform(r, 2, 5)))};
      }
    }();
    const auto d = noncentral(r, st.group);
    const auto e = coin(r, 80) ? noncentral(r, st.group) : TorusCocharacter::zero(st.group.dimension());
    Point v = Point::zero(st.rep.dim()), probe = Point::zero(st.rep.dim());
    for (std::size_t b = 0; b < st.rep.dim(); ++b) {
      const auto nl = pairing(d, st.rep.weight(b)), nm = pairing(e, st.rep.weight(b));
      if ((nl > 0 || (nl == 0 && nm >= 0)) && coin(r, 75)) v.coords[b] = nonzero_rational(r);
      probe.coords[b] = nonzero_rational(r);
    }
    return json{{"group", io::to_json(st.group)},
                {"rep", io::to_json(st.rep)},
                {"lambda", d.exponents()},
                {"mu", e.exponents()},
                {"v", point_doc(v)},
                {"probe", point_doc(probe)}};
  };
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto rep = io::representation_from_json(doc.at("rep"));
    rep.check_compatible(group);
    const auto ld = io::integers_from_json(doc.at("lambda"), "lambda");
    const auto md = io::integers_from_json(doc.at("mu"), "mu");
    const auto lambda = Cocharacter::standard(group, ld);
    const auto mu = Cocharacter::standard(group, md);
    const Point v = point_of(rep, doc.at("v"));
    const Point probe = point_of(rep, doc.at("probe"));
    const auto dim = rep.dim();

    // t₀ = 1 + ⌈max |⟨μ,χ⟩| / min nonzero |⟨λ,χ⟩|⌉ over the weights of the
    // module and the roots; the roots govern P_{tλ+μ} ⊆ P_λ.
    std::int64_t top = 0, bottom = 0;
    auto weights = rep.weights();
    for (const auto& a : group.roots()) weights.push_back(a);
    for (const auto& chi : weights) {
      top = std::max<std::int64_t>(top, std::abs(pairing(mu.torus(), chi)));
      const auto a = std::abs(pairing(lambda.torus(), chi));
      if (a > 0 && (bottom == 0 || a < bottom)) bottom = a;
    }
    const std::int64_t t0 = 1 + (bottom == 0 ? 0 : (top + bottom - 1) / bottom);

    const auto vl = limit(rep, v, lambda);
    if (!vl) throw PreconditionError("v has no limit along lambda");
    const auto vlm = limit(rep, *vl, mu);
    if (!vlm) throw PreconditionError("lim v has no limit along mu");

    const ParabolicDescriptor pl(group, lambda), pm(group, mu);
    const auto gl = grade(rep, probe, lambda);
    for (std::int64_t t : {t0, t0 + 3}) {
      std::vector<std::int64_t> nd(ld.size());
      for (std::size_t i = 0; i < nd.size(); ++i) nd[i] = t * ld[i] + md[i];
      const auto nu = Cocharacter::standard(group, nd);
      const std::string tag = "t=" + std::to_string(t) + ": ";
      const auto gn = grade(rep, probe, nu);
      const Point nonneg = sum_where(gn, dim, [](auto n) { return n >= 0; });
      if (grade(rep, nonneg, lambda).min_degree() < 0) return Outcome::fail(tag + "V_{nu,>=0} not in V_{lambda,>=0}");
      const Point pos = sum_where(gl, dim, [](auto n) { return n > 0; });
      const auto gp = grade(rep, pos, nu);
      if (!gp.components.empty() && gp.min_degree() <= 0) return Outcome::fail(tag + "V_{lambda,>0} not in V_{nu,>0}");
      if (component(gn, 0, dim) != component(grade(rep, component(gl, 0, dim), mu), 0, dim))
        return Outcome::fail(tag + "V_{nu,0} differs from V_{lambda,0} cap V_{mu,0}");
      const ParabolicDescriptor pn(group, nu);
      if (!subspace(pn.lie_algebra(), pl.lie_algebra())) return Outcome::fail(tag + "P_nu not in P_lambda");
      const auto ln = pn.levi_lie_algebra(), ll = pl.levi_lie_algebra(), lm = pm.levi_lie_algebra();
      if (!subspace(ln, ll) || !subspace(ln, lm) || ln.dim() != intersection_dim(ll, lm))
        return Outcome::fail(tag + "L_nu differs from L_lambda cap L_mu");
      const auto direct = limit(rep, v, nu);
      if (!direct || *direct != *vlm) return Outcome::fail(tag + "lim along t.lambda+mu differs from iterated limit");
    }
    return Outcome::pass();
  };
  return p;
}

inline Profile oracle_agreement() {
  Profile p{"oracle-agreement", 50, gcr_case, nullptr, 60};
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto h = io::subgroup_from_json(doc);
    const auto cfg = gcr_config(group);
    const auto alg = is_gcr_algebra(group, h);
    const auto search = is_gcr_search(group, h, cfg);
    if (alg.status != search.status)
      return Outcome::fail(std::string("algebra says ") + to_string(alg.status) + ", search says " +
                           to_string(search.status));
    const auto m = group.dimension();
    const auto algebra = enveloping_algebra(h);
    for (const auto& r : alg.radical)
      if (!algebra.contains(r) || !power(r, static_cast<unsigned>(m)).is_zero())
        return Outcome::fail("radical basis element is not a nilpotent element of the algebra");
    if (search.status == GcrStatus::NotCompletelyReducible) {
      if (!search.witness || !search.witness_limit) return Outcome::fail("verdict carries no witness");
      const auto rep = Representation::conjugation_tuples(m, h.generators.size());
      const auto lim = limit(rep, h.tuple(), *search.witness);
      if (!lim || *lim != *search.witness_limit) return Outcome::fail("witness limit does not replay");
      if (find_ru_conjugator(group, rep, h.tuple(), *lim, *search.witness))
        return Outcome::fail("witness limit is R_u-conjugate to the tuple");
    }
    return Outcome::pass();
  };
  return p;
}

inline Profile centralizer() {
  Profile p{"centralizer", 50, gcr_case, nullptr, 30};
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto h = io::subgroup_from_json(doc);
    h.validate(group);
    const auto cfg = gcr_config(group);
    const auto rep = Representation::conjugation_tuples(group.dimension(), h.generators.size());
    const auto patterns = destab::detail::ordering_representatives(group, cfg.exponent_box);
    const auto t = h.tuple();
    const auto base_dim = centralizer_dim(group, h.generators);
    for (std::size_t fi = 0; fi < cfg.family.size(); ++fi) {
      const Cocharacter frame(group, cfg.family[fi], TorusCocharacter::zero(group.dimension()));
      for (const auto& d : patterns) {
        const auto lambda = frame.with_torus(d);
        const auto lim = limit(rep, t, lambda);
        if (!lim || *lim == t) continue;
        const auto limits = matrices_from_point(rep, *lim);
        const auto dim = centralizer_dim(group, limits);
        const bool conj = find_ru_conjugator(group, rep, t, *lim, lambda).has_value();
        std::string where = "frame " + std::to_string(fi) + ", d=" + io::to_json(d).dump() + ": ";
        if (dim < base_dim) return Outcome::fail(where + "centralizer dimension drops");
        if ((dim == base_dim) != conj)
          return Outcome::fail(where + "equal dimension " + (dim == base_dim ? "true" : "false") +
                               " but conjugator found " + (conj ? "true" : "false"));
      }
    }
    return Outcome::pass();
  };
  return p;
}

// P = P_λ = P_λ' for two exponent vectors of one ordering; M = L_{u·λ'} for u
// in R_u(P). Then P ∩ M must be the R-Levi L_{u·λ} of P.
inline Profile levidown() {
  Profile p{"levidown", 50, nullptr, nullptr};
  p.generate = [](Rng& r) {
    const auto group = GroupSpec::gl(static_cast<std::size_t>(uniform(r, 3, 4)));
    const auto lambda = Cocharacter(group, frame(r, SearchConfig::weyl_shear(group, 1, 1).family), noncentral(r, group));
    auto vals = lambda.torus().exponents();
    std::vector<std::int64_t> levels(vals);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<std::int64_t> image;
    std::int64_t cur = uniform(r, -4, 0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      image.push_back(cur);
      cur += uniform(r, 1, 3);
    }
    std::vector<std::int64_t> d2;
    for (auto x : vals)
      d2.push_back(image[static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), x) - levels.begin())]);
    return json{{"group", io::to_json(group)},
                {"lambda", io::to_json(lambda)},
                {"lambda2", d2},
                {"u", io::to_json(ru_element(r, group, lambda))}};
  };
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto lambda = io::cocharacter_from_json(group, doc.at("lambda"));
    const auto lambda2 = lambda.with_torus(TorusCocharacter(io::integers_from_json(doc.at("lambda2"), "lambda2")));
    const Matrix u = io::matrix_from_json(doc.at("u"));
    if (classify(group, u, lambda) != MembershipClass::InRu) throw PreconditionError("u is not in R_u(P_lambda)");
    const ParabolicDescriptor p1(group, lambda), q(group, lambda2);
    if (!p1.same_subgroup(q)) throw PreconditionError("the two cocharacters define different parabolics");
    const ParabolicDescriptor m(group, lambda2.conjugated(u)), l(group, lambda.conjugated(u));
    if (!l.same_subgroup(p1)) return Outcome::fail("u moves the parabolic");
    const auto pm_dim = intersection_dim(p1.lie_algebra(), m.levi_lie_algebra());
    const auto levi = l.levi_lie_algebra();
    if (!subspace(levi, p1.lie_algebra()) || !subspace(levi, m.levi_lie_algebra()) || levi.dim() != pm_dim)
      return Outcome::fail("P cap M is not the R-Levi of P through the conjugated torus");
    return Outcome::pass();
  };
  return p;
}

inline Profile lie() {
  Profile p{"lie", 50, lie_case, nullptr, 30};
  p.check = [](const json& doc) {
    const auto group = io::group_from_json(doc.at("group"));
    const auto h = io::subgroup_from_json(doc);
    const auto cfg = gcr_config(group);
    const auto m = group.dimension();
    if (is_gcr_search(group, h, cfg).status != GcrStatus::CompletelyReducible) return Outcome::skip("not G-cr");
    RowSpace span(m * m);
    for (const auto& g : h.generators) {
      auto ts = generator_tangents(g);
      if (!ts) return Outcome::skip("irrational spectrum");
      for (const auto& t : *ts) span.insert(flatten(t));
    }
    if (span.dim() == 0) return Outcome::skip("finite group");
    std::vector<Matrix> basis;
    for (const auto& v : span.canonical_basis()) basis.push_back(unflatten(v, m, m));
    for (const auto& a : basis)
      for (const auto& b : basis)
        if (!span.contains(flatten(a * b - b * a))) return Outcome::skip("span not closed under the commutator");
    const auto v = lie_is_gcr(group, LieSubalgebra{basis}, cfg);
    if (v.status != GcrStatus::CompletelyReducible)
      return Outcome::fail("group is G-cr but its Lie algebra is not; witness " + io::to_json(*v.witness).dump());
    return Outcome::pass();
  };
  return p;
}

}  // namespace suites

inline const std::vector<Profile>& profiles() {
  static const std::vector<Profile> all{suites::ruconj(),     suites::equivariance(),     suites::kempf(),
                                        suites::dblecochar(), suites::oracle_agreement(), suites::centralizer(),
                                        suites::levidown(),   suites::lie()};
  return all;
}

inline const Profile& find_profile(const std::string& name) {
  for (const auto& p : profiles())
    if (p.name == name) return p;
  throw DomainError("unknown corpus profile \"" + name + "\"");
}

// Runs the check, mapping library errors: an invariant failure is a failed
// case, any other error means the document itself is not a valid case.
inline Outcome evaluate(const Profile& p, const json& doc) {
  try {
    return p.check(doc);
  } catch (const InvariantError& e) {
    return Outcome::fail(std::string("invariant: ") + e.what());
  } catch (const Error& e) {
    return {Outcome::Kind::Invalid, e.what()};
  } catch (const nlohmann::json::exception& e) {
    return {Outcome::Kind::Invalid, e.what()};
  }
}

namespace detail {

inline void rational_leaves(const json& j, const json::json_pointer& at, std::vector<json::json_pointer>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "group" || k == "rep" || k == "config" || k == "expect") continue;
      rational_leaves(v, at / k, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) rational_leaves(j[i], at / i, out);
  } else if (j.is_number_integer() || j.is_string()) {
    out.push_back(at);
  }
}

inline std::vector<json> smaller(const json& leaf) {
  std::vector<json> out;
  if (leaf.is_number_integer()) {
    const auto v = leaf.get<std::int64_t>();
    if (v != 0) out.push_back(0);
    if (v > 1 || v < -1) {
      out.push_back(v / 2);
      out.push_back(v > 0 ? 1 : -1);
    }
    return out;
  }
  Rational x;
  try {
    x = parse_rational(leaf.get<std::string>());
  } catch (const Error&) {
    return out;
  }
  if (sgn(x) == 0) return out;
  out.push_back("0");
  if (!is_integer(x)) out.push_back(format_rational(Rational(mpz_class(x.get_num() / x.get_den()))));
  if (abs(x) > 1) out.push_back(sgn(x) > 0 ? "1" : "-1");
  return out;
}

}  // namespace detail

// Greedy minimization: replace rational leaves by 0, by a truncation or by
// ±1 while the case keeps failing; invalid candidates do not count.
inline json shrink(const Profile& p, json doc) {
  std::size_t budget = p.shrink_budget;
  bool progress = true;
  while (progress && budget > 0) {
    progress = false;
    std::vector<json::json_pointer> leaves;
    detail::rational_leaves(doc, json::json_pointer(), leaves);
    for (const auto& at : leaves) {
      for (const auto& cand : detail::smaller(doc.at(at))) {
        if (budget == 0) break;
        --budget;
        json trial = doc;
        trial.at(at) = cand;
        if (evaluate(p, trial).kind == Outcome::Kind::Fail) {
          doc = std::move(trial);
          progress = true;
          break;
        }
      }
    }
  }
  return doc;
}

inline json generate_case(const Profile& p, std::uint64_t seed, std::size_t index) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : p.name) h = (h ^ c) * 16777619u;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), h};
  Rng rng(seq);
  return p.generate(rng);
}

inline CorpusReport run(const Profile& p, std::uint64_t seed, std::optional<std::size_t> size, unsigned threads) {
  CorpusReport rep;
  rep.profile = p.name;
  rep.seed = seed;
  rep.size = size.value_or(p.default_size);
  std::vector<Outcome> outcomes(rep.size);
  std::vector<json> docs(rep.size);
  parallel_for(rep.size, threads, [&](std::size_t i) {
    docs[i] = generate_case(p, seed, i);
    outcomes[i] = evaluate(p, docs[i]);
  });
  for (std::size_t i = 0; i < rep.size; ++i) {
    switch (outcomes[i].kind) {
      case Outcome::Kind::Pass: ++rep.passed; break;
      case Outcome::Kind::Skip: ++rep.skipped; break;
      case Outcome::Kind::Invalid:
        rep.failures.push_back({i, "generated case rejected: " + outcomes[i].message, docs[i], docs[i]});
        break;
      case Outcome::Kind::Fail:
        rep.failures.push_back({i, outcomes[i].message, docs[i], shrink(p, docs[i])});
        break;
    }
  }
  return rep;
}

inline json to_json(const CorpusReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"index", f.index}, {"message", f.message}, {"input", f.input}, {"minimized", f.minimized}});
  return {{"profile", r.profile},   {"seed", r.seed},       {"size", r.size},
          {"passed", r.passed},     {"skipped", r.skipped}, {"failed", r.failures.size()},
          {"failures", failures}};
}

}  // namespace destab::corpus
