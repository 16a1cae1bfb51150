#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"

using namespace destab;
using namespace testing_support;

namespace {

const auto gl2 = GroupSpec::gl(2);
const auto mat2 = Representation::conjugation_tuples(2, 1);

Rational power_of(const Rational& a, std::int64_t n) {
  Rational p = 1;
  for (std::int64_t k = 0; k < (n < 0 ? -n : n); ++k) p *= a;
  return n < 0 ? Rational(1 / p) : p;
}

Point scaled(const Point& v, const Rational& c) {
  Point out = v;
  for (auto& x : out.coords) x *= c;
  return out;
}

Point minus(const Point& a, const Point& b) {
  Point out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.coords[i] -= b.coords[i];
  return out;
}

struct Setting {
  GroupSpec group;
  Representation rep;
};

std::vector<Setting> settings() {
  return {{GroupSpec::gl(2), Representation::conjugation_tuples(2, 2)},
          {GroupSpec::gl(3), Representation::conjugation_tuples(3, 1)},
          {GroupSpec::sl(2), Representation::sym_power(4)},
          {GroupSpec::sl(2), Representation::sym_power(3)},
          {GroupSpec::gl(3), Representation::adjoint(3)},
          {GroupSpec::gl(2), Representation::direct_sum({Representation::sym_power(2), Representation::conjugation_tuples(2, 1)})}};
}

// A cocharacter of the group with a random base; SL factors get sum-zero exponents.
Cocharacter random_lambda(Rand& r, const GroupSpec& g) {
  auto d = r.exponents(g.dimension(), 3);
  if (g.factors().front().family == Family::SL) d.back() = -std::accumulate(d.begin(), d.end() - 1, std::int64_t{0});
  // Unitriangular products have det 1, so the base suits SL too.
  return Cocharacter(g, r.invertible(g.dimension()), TorusCocharacter(d));
}

}  // namespace

TEST(Support, Examples) {
  EXPECT_EQ(support(mat2, tuple({e(2, 0, 1)})), std::set<Character>{Character({1, -1})});
  const auto sym4 = Representation::sym_power(4);
  Point x3y = Point::zero(5);
  x3y.coords[1] = 1;  // basis x^(4−i) y^i, i = 1
  const auto s = support(sym4, x3y);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(*s.begin(), Character({3, 1}));
  // In the SL2 weight coordinate this is 3 − 1 = 2.
  EXPECT_EQ(pairing(TorusCocharacter({1, -1}), *s.begin()), 2);
  EXPECT_TRUE(support(mat2, Point::zero(4)).empty());
}

TEST(Support, SymPowerWeightsAreMonomialDegrees) {
  for (std::size_t d = 1; d <= 6; ++d) {
    const auto rep = Representation::sym_power(d);
    ASSERT_EQ(rep.dim(), d + 1);
    for (std::size_t i = 0; i <= d; ++i)
      EXPECT_EQ(rep.weight(i), Character({static_cast<std::int64_t>(d - i), static_cast<std::int64_t>(i)}));
  }
}

TEST(Grade, Examples) {
  const auto lambda = std_lambda(gl2, {1, -1});
  const auto g = grade(mat2, tuple({mat({{1, 1}, {0, 1}})}), lambda);
  ASSERT_EQ(g.components.size(), 2u);
  EXPECT_EQ(g.components.at(0), tuple({Matrix::identity(2)}));
  EXPECT_EQ(g.components.at(2), tuple({e(2, 0, 1)}));

  const auto v = tuple({mat({{1, 2}, {3, 4}})});
  const auto zero = grade(mat2, v, std_lambda(gl2, {0, 0}));
  ASSERT_EQ(zero.components.size(), 1u);
  EXPECT_EQ(zero.components.at(0), v);

  const auto neg = grade(mat2, tuple({e(2, 1, 0)}), lambda);
  ASSERT_EQ(neg.components.size(), 1u);
  EXPECT_EQ(neg.components.begin()->first, -2);
}

TEST(Limit, Examples) {
  const auto lambda = std_lambda(gl2, {1, -1});
  const auto lim = limit(mat2, tuple({mat({{2, q(-3, 2)}, {0, q(1, 2)}})}), lambda);
  ASSERT_TRUE(lim);
  EXPECT_EQ(*lim, tuple({diag({2, q(1, 2)})}));
  EXPECT_FALSE(limit(mat2, tuple({e(2, 1, 0)}), lambda));
  const auto zero = limit(mat2, tuple({e(2, 0, 1)}), lambda);
  ASSERT_TRUE(zero);
  EXPECT_TRUE(zero->is_zero());
}

TEST(Limit, DimensionErrors) {
  EXPECT_THROW(limit(mat2, Point::zero(3), std_lambda(gl2, {1, -1})), DimensionError);
  EXPECT_THROW(grade(mat2, Point::zero(4), std_lambda(GroupSpec::gl(3), {1, 0, -1})), DimensionError);
}

TEST(Isotypic, Examples) {
  // Coordinates of Mat_2: x11 = 0, x12 = 1, x21 = 2, x22 = 3.
  const auto x11 = Polynomial::variable(0), x12 = Polynomial::variable(1), x22 = Polynomial::variable(3);
  auto one = isotypic_decompose(mat2, x12);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].first, Character({1, -1}));

  Polynomial trace = x11;
  trace += x22;
  auto tr = isotypic_decompose(mat2, trace);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(tr[0].first, Character({0, 0}));
  EXPECT_EQ(tr[0].second, trace);

  auto prod = isotypic_decompose(mat2, x11 * x12);
  ASSERT_EQ(prod.size(), 1u);
  EXPECT_EQ(prod[0].first, Character({1, -1}));
}

TEST(Isotypic, ComponentsTransformByTheirCharacter) {
  // f(t·w) = Σ χ(t) F_χ(w) for diagonal t, checked at a random point.
  Rand r(23);
  const auto rep = Representation::conjugation_tuples(2, 2);
  const Matrix frame = mat({{1, 0}, {2, 1}});
  Polynomial f = Polynomial::variable(1) * Polynomial::variable(4);
  f += Polynomial::variable(2);
  f += Polynomial::constant(3) * Polynomial::variable(0) * Polynomial::variable(7);
  const auto comps = isotypic_decompose(rep, f, frame, inverse(frame));
  Polynomial sum;
  for (const auto& [chi, part] : comps) sum += part;
  EXPECT_EQ(sum, f.compose_linear(rep.action_matrix(frame)));
  const Point w = r.point(rep.dim());
  const Rational s = 2, t = 5;
  const Point tw = rep.act(diag({s, t}), w);
  Rational rhs = 0;
  for (const auto& [chi, part] : comps) rhs += power_of(s, chi[0]) * power_of(t, chi[1]) * part.evaluate(w.coords);
  EXPECT_EQ(f.compose_linear(rep.action_matrix(frame)).evaluate(tw.coords), rhs);
}

TEST(Action, TorusScalesBasisVectorsByWeights) {
  for (const auto& [group, rep] : settings()) {
    const auto m = group.dimension();
    std::vector<Rational> t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = q(static_cast<long>(i) + 2, 1);
    const Matrix tm = Matrix::diagonal(t);
    for (std::size_t b = 0; b < rep.dim(); ++b) {
      Point v = Point::zero(rep.dim());
      v.coords[b] = 1;
      Rational c = 1;
      for (std::size_t i = 0; i < m; ++i) c *= power_of(t[i], rep.weight(b)[i]);
      EXPECT_EQ(rep.act(tm, v), scaled(v, c)) << rep.label(b);
    }
  }
}

TEST(Action, IsAHomomorphism) {
  Rand r(29);
  for (const auto& [group, rep] : settings()) {
    for (int k = 0; k < 5; ++k) {
      const Matrix g = r.invertible(group.dimension()), h = r.invertible(group.dimension());
      const Point v = r.point(rep.dim());
      EXPECT_EQ(rep.act(g * h, v), rep.act(g, rep.act(h, v)));
      EXPECT_EQ(rep.action_matrix(g * h), rep.action_matrix(g) * rep.action_matrix(h));
    }
  }
}

TEST(Properties, Reconstruction) {
  Rand r(31);
  for (const auto& [group, rep] : settings())
    for (int k = 0; k < 20; ++k) {
      const Point v = r.point(rep.dim());
      EXPECT_EQ(grade(rep, v, random_lambda(r, group)).reconstruct(rep.dim()), v);
    }
}

TEST(Properties, TorusActionScalesComponents) {
  Rand r(37);
  for (const auto& [group, rep] : settings())
    for (int k = 0; k < 10; ++k) {
      const Point v = r.point(rep.dim());
      const auto lambda = random_lambda(r, group);
      const auto g = grade(rep, v, lambda);
      for (long a : {2, 3, 5}) {
        Point expected = Point::zero(rep.dim());
        for (const auto& [n, c] : g.components) expected += scaled(c, power_of(q(a), n));
        EXPECT_EQ(rep.act(lambda.element_at(q(a)), v), expected);
      }
    }
}

TEST(Properties, LimitIsDegreeZeroProjection) {
  Rand r(41);
  int with_limit = 0;
  for (const auto& [group, rep] : settings())
    for (int k = 0; k < 40; ++k) {
      const auto lambda = random_lambda(r, group);
      // Bias towards existing limits: keep only nonnegative-degree parts.
      Point v = Point::zero(rep.dim());
      for (const auto& [n, c] : grade(rep, r.point(rep.dim()), lambda).components)
        if (n >= 0 || r.integer(0, 3) == 0) v += c;
      const auto lim = limit(rep, v, lambda);
      const auto g = grade(rep, v, lambda);
      EXPECT_EQ(lim.has_value(), g.min_degree() >= 0);
      if (!lim) continue;
      ++with_limit;
      const auto it = g.components.find(0);
      EXPECT_EQ(*lim, it == g.components.end() ? Point::zero(rep.dim()) : it->second);
      EXPECT_TRUE(grade(rep, *lim, lambda).concentrated_at_zero());
      EXPECT_TRUE(is_fixed(rep, *lim, lambda));
    }
  EXPECT_GT(with_limit, 50);
}

TEST(Properties, UnipotentPerturbationRaisesDegree) {
  // u ∈ R_u(P_λ) moves v ∈ V_{λ,≥0} only by terms of positive degree.
  Rand r(43);
  for (const auto& [group, rep] : settings())
    for (int k = 0; k < 15; ++k) {
      const auto lambda = random_lambda(r, group);
      const auto m = group.dimension();
      const auto& d = lambda.torus();
      Matrix u0 = Matrix::identity(m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (d[i] > d[j]) u0(i, j) = r.rational();
      const Matrix u = lambda.base() * u0 * lambda.base_inverse();
      Point v = Point::zero(rep.dim());
      for (const auto& [n, c] : grade(rep, r.point(rep.dim()), lambda).components)
        if (n >= 0) v += c;
      const auto diff = grade(rep, minus(rep.act(u, v), v), lambda);
      for (const auto& [n, c] : diff.components) EXPECT_GT(n, 0);
    }
}

TEST(Frames, RoundTrip) {
  Rand r(47);
  const auto rep = Representation::conjugation_tuples(3, 2);
  const auto g = GroupSpec::gl(3);
  for (int k = 0; k < 10; ++k) {
    const auto lambda = random_lambda(r, g);
    const Point v = r.point(rep.dim());
    EXPECT_EQ(from_frame(rep, lambda, to_frame(rep, lambda, v)), v);
  }
}

TEST(Matrices, PointRoundTrip) {
  const auto rep = Representation::conjugation_tuples(2, 2);
  const std::vector<Matrix> ms{mat({{1, 2}, {3, 4}}), mat({{q(1, 2), 0}, {0, -1}})};
  EXPECT_EQ(matrices_from_point(rep, point_from_matrices(ms)), ms);
  EXPECT_EQ(rep.label(1), "x0_12");
}

TEST(Compatibility, GroupDimensionMustMatch) {
  EXPECT_THROW(Representation::sym_power(3).check_compatible(GroupSpec::gl(3)), DimensionError);
  EXPECT_NO_THROW(Representation::sym_power(3).check_compatible(GroupSpec::sl(2)));
}
