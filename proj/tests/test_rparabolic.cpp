#include <gtest/gtest.h>

#include "support.hpp"

using namespace destab;
using namespace testing_support;

namespace {

const auto gl2 = GroupSpec::gl(2);
const auto gl3 = GroupSpec::gl(3);
const auto mat2 = Representation::conjugation_tuples(2, 1);

Cocharacter diag_a(const GroupSpec& g) { return std_lambda(g, {1, -1}); }

// base·x·base⁻¹ with x block upper triangular for the exponent order of d:
// an element of P_λ built directly from the definition.
Matrix parabolic_element(Rand& r, const Cocharacter& lambda, bool levi_only = false, bool unipotent = false) {
  const auto& d = lambda.torus();
  const auto m = d.size();
  Matrix x(m, m);
  for (;;) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const bool allowed = levi_only ? d[i] == d[j] : d[i] >= d[j];
        if (unipotent)
          x(i, j) = i == j ? Rational(1) : (d[i] > d[j] ? r.rational() : Rational(0));
        else
          x(i, j) = allowed ? r.rational() : Rational(0);
      }
    if (sgn(determinant(x)) != 0) break;
  }
  return lambda.base() * x * lambda.base_inverse();
}

Cocharacter random_lambda(Rand& r, const GroupSpec& g) {
  return Cocharacter(g, r.invertible(g.dimension()), TorusCocharacter(r.exponents(g.dimension(), 2)));
}

// Oracle for P_λ-membership and c_λ straight from the curve a ↦ λ(a)gλ(a)⁻¹:
// its frame entries are x_ij·a^(d_i−d_j), so sampling at two small values of
// a separates bounded from unbounded terms.
bool curve_bounded(const Matrix& g, const Cocharacter& lambda) {
  const Rational a1 = q(1, 1000), a2 = q(1, 2000);
  const Matrix m1 = lambda.base_inverse() * lambda.element_at(a1) * g * inverse(lambda.element_at(a1)) * lambda.base();
  const Matrix m2 = lambda.base_inverse() * lambda.element_at(a2) * g * inverse(lambda.element_at(a2)) * lambda.base();
  // Unbounded entries at least double when a halves; bounded ones do not grow.
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (abs(m2(i, j)) > abs(m1(i, j)) && sgn(m1(i, j)) != 0) return false;
  return true;
}

}  // namespace

TEST(Classify, Examples) {
  const auto lambda = diag_a(gl2);
  EXPECT_EQ(classify(gl2, mat({{2, 3}, {0, 5}}), lambda), MembershipClass::InPnotLnotRu);
  EXPECT_EQ(classify(gl2, mat({{2, 0}, {0, 5}}), lambda), MembershipClass::InL);
  EXPECT_EQ(classify(gl2, mat({{1, 0}, {1, 1}}), lambda), MembershipClass::NotInP);
  EXPECT_EQ(classify(gl2, mat({{1, 5}, {0, 1}}), lambda), MembershipClass::InRu);
  EXPECT_EQ(classify(gl2, Matrix::identity(2), lambda), MembershipClass::InRu);
}

TEST(Classify, AgreesWithCurveOracle) {
  Rand r(3);
  for (int k = 0; k < 60; ++k) {
    const auto lambda = random_lambda(r, gl3);
    const Matrix g = k % 2 ? parabolic_element(r, lambda) : r.invertible(3);
    const bool in_p = classify(gl3, g, lambda) != MembershipClass::NotInP;
    EXPECT_EQ(in_p, curve_bounded(g, lambda));
  }
}

TEST(CLambda, Examples) {
  const auto lambda = diag_a(gl2);
  EXPECT_EQ(c_lambda(gl2, mat({{2, q(-3, 2)}, {0, q(1, 2)}}), lambda), diag({2, q(1, 2)}));
  const Matrix l = mat({{7, 0}, {0, q(2, 3)}});
  EXPECT_EQ(c_lambda(gl2, l, lambda), l);
  EXPECT_EQ(c_lambda(gl2, std::vector<Matrix>{mat({{1, 1}, {0, 1}})}, lambda), std::vector<Matrix>{Matrix::identity(2)});
}

TEST(CLambda, OutsidePIsPreconditionError) {
  const auto lambda = diag_a(gl2);
  EXPECT_THROW(c_lambda(gl2, mat({{1, 0}, {1, 1}}), lambda), PreconditionError);
  try {
    c_lambda(gl2, std::vector<Matrix>{Matrix::identity(2), mat({{1, 0}, {1, 1}})}, lambda);
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("component 1"), std::string::npos);
  }
}

TEST(CLambda, HomomorphismOnP) {
  Rand r(5);
  for (int k = 0; k < 40; ++k) {
    const auto lambda = random_lambda(r, gl3);
    const Matrix g = parabolic_element(r, lambda), h = parabolic_element(r, lambda);
    EXPECT_EQ(c_lambda(gl3, g * h, lambda), c_lambda(gl3, g, lambda) * c_lambda(gl3, h, lambda));
    EXPECT_EQ(classify(gl3, c_lambda(gl3, g, lambda), lambda) == MembershipClass::NotInP, false);
    // c_λ is a retraction onto L_λ.
    const Matrix c = c_lambda(gl3, g, lambda);
    EXPECT_EQ(c_lambda(gl3, c, lambda), c);
  }
}

TEST(CLambda, LimitEquivariance) {
  // lim λ(a)·(x·v) = c_λ(x)·lim λ(a)·v for x ∈ P_λ.
  Rand r(7);
  const auto rep = Representation::conjugation_tuples(3, 2);
  for (int k = 0; k < 40; ++k) {
    const auto lambda = random_lambda(r, gl3);
    Point v = Point::zero(rep.dim());
    for (const auto& [n, c] : grade(rep, r.point(rep.dim()), lambda).components)
      if (n >= 0) v += c;
    const Matrix x = parabolic_element(r, lambda);
    const auto lhs = limit(rep, rep.act(x, v), lambda);
    ASSERT_TRUE(lhs);
    EXPECT_EQ(*lhs, rep.act(c_lambda(gl3, x, lambda), *limit(rep, v, lambda)));
  }
}

TEST(FindRu, Examples) {
  const auto lambda = diag_a(gl2);
  const Point v = tuple({mat({{2, q(-3, 2)}, {0, q(1, 2)}})});
  const Point target = tuple({diag({2, q(1, 2)})});
  const auto u = find_ru_conjugator(gl2, mat2, v, target, lambda);
  ASSERT_TRUE(u);
  EXPECT_EQ(*u, mat({{1, -1}, {0, 1}}));

  const Point fixed = tuple({diag({3, 4})});
  const auto id = find_ru_conjugator(gl2, mat2, fixed, fixed, lambda);
  ASSERT_TRUE(id);
  EXPECT_TRUE(id->is_identity());

  EXPECT_FALSE(find_ru_conjugator(gl2, mat2, tuple({mat({{1, 1}, {0, 1}})}), tuple({Matrix::identity(2)}), lambda));
}

TEST(FindRu, SymPowerIsUnsupported) {
  const auto sl2 = GroupSpec::sl(2);
  const auto rep = Representation::sym_power(2);
  EXPECT_THROW(find_ru_conjugator(sl2, rep, Point::zero(3), Point::zero(3), diag_a(sl2)), UnsupportedError);
}

TEST(FindRu, SoundAndCompleteOnConstructedPairs) {
  Rand r(11);
  const auto rep = Representation::conjugation_tuples(3, 2);
  int found = 0, refused = 0;
  for (int k = 0; k < 40; ++k) {
    const auto lambda = random_lambda(r, gl3);
    // A Levi tuple moved by a radical element: the conjugator must exist.
    const Matrix u0 = parabolic_element(r, lambda, false, true);
    const Point l = tuple({parabolic_element(r, lambda, true), parabolic_element(r, lambda, true)});
    const Point v = rep.act(inverse(u0), l);
    const auto u = find_ru_conjugator(gl3, rep, v, l, lambda);
    ASSERT_TRUE(u);
    EXPECT_EQ(classify(gl3, *u, lambda), MembershipClass::InRu);
    EXPECT_EQ(rep.act(*u, v), l);
    ++found;
    // Against an arbitrary target every returned answer must still check out.
    const Point w = tuple({parabolic_element(r, lambda), parabolic_element(r, lambda)});
    const auto lim = limit(rep, w, lambda);
    ASSERT_TRUE(lim);
    if (auto u2 = find_ru_conjugator(gl3, rep, w, *lim, lambda)) {
      EXPECT_EQ(classify(gl3, *u2, lambda), MembershipClass::InRu);
      EXPECT_EQ(rep.act(*u2, w), *lim);
    } else {
      ++refused;
    }
  }
  EXPECT_EQ(found, 40);
  EXPECT_GT(refused, 0);
}

TEST(LieClassify, Examples) {
  const auto sl2 = GroupSpec::sl(2);
  const auto lambda = diag_a(sl2);
  EXPECT_EQ(lie_classify(sl2, e(2, 0, 1), lambda), MembershipClass::InRu);
  EXPECT_EQ(lie_classify(sl2, diag({1, -1}), lambda), MembershipClass::InL);
  EXPECT_EQ(lie_classify(sl2, e(2, 1, 0), lambda), MembershipClass::NotInP);
  EXPECT_EQ(lie_classify(sl2, mat({{1, 1}, {0, -1}}), lambda), MembershipClass::InPnotLnotRu);
  EXPECT_THROW(lie_classify(sl2, diag({1, 0}), lambda), DomainError);
}

TEST(Descriptor, PartitionAndProperness) {
  const ParabolicDescriptor p(gl3, std_lambda(gl3, {1, 0, 1}));
  ASSERT_EQ(p.partition().size(), 1u);
  EXPECT_EQ(p.partition()[0], (std::vector<std::vector<std::size_t>>{{0, 2}, {1}}));
  EXPECT_TRUE(p.is_proper());
  EXPECT_FALSE(ParabolicDescriptor(gl3, std_lambda(gl3, {2, 2, 2})).is_proper());
  const GroupSpec prod({{Family::GL, 2}, {Family::GL, 1}});
  const ParabolicDescriptor pp(prod, std_lambda(prod, {0, 0, 5}));
  EXPECT_FALSE(pp.is_proper());  // a central cocharacter in each block
}

TEST(Descriptor, LieAlgebraDimensions) {
  const ParabolicDescriptor borel(gl3, std_lambda(gl3, {1, 0, -1}));
  EXPECT_EQ(borel.lie_algebra().dim(), 6u);
  EXPECT_EQ(borel.levi_lie_algebra().dim(), 3u);
  EXPECT_EQ(borel.radical_lie_algebra().dim(), 3u);
  const ParabolicDescriptor maximal(gl3, std_lambda(gl3, {1, 1, 0}));
  EXPECT_EQ(maximal.lie_algebra().dim(), 7u);
  EXPECT_EQ(maximal.levi_lie_algebra().dim(), 5u);
  EXPECT_EQ(maximal.radical_lie_algebra().dim(), 2u);
}

TEST(Descriptor, SameSubgroupDependsOnOrderOnly) {
  const auto p = [](std::vector<std::int64_t> d) { return ParabolicDescriptor(gl2, std_lambda(gl2, std::move(d))); };
  EXPECT_TRUE(p({1, -1}).same_subgroup(p({2, -2})));
  EXPECT_TRUE(p({1, -1}).same_subgroup(p({3, 1})));
  EXPECT_FALSE(p({1, -1}).same_subgroup(p({-1, 1})));
  EXPECT_TRUE(p({1, -1}).same_levi(p({-1, 1})));
}

TEST(Descriptor, ConjugationTransportsTheLieAlgebra) {
  Rand r(13);
  for (int k = 0; k < 10; ++k) {
    const auto lambda = random_lambda(r, gl3);
    const Matrix h = r.invertible(3);
    const ParabolicDescriptor p(gl3, lambda);
    const auto moved = p.conjugated(gl3, h).lie_algebra();
    for (const auto& b : p.lie_algebra().canonical_basis()) {
      const Matrix x = unflatten(b, 3, 3);
      EXPECT_TRUE(moved.contains(flatten(h * x * inverse(h))));
    }
  }
}

TEST(Descriptor, FlagIsStabilized) {
  Rand r(17);
  for (int k = 0; k < 20; ++k) {
    const auto lambda = random_lambda(r, gl3);
    const ParabolicDescriptor p(gl3, lambda);
    const Matrix g = parabolic_element(r, lambda);
    const auto flag = p.flag();
    for (const auto& subspace : flag[0]) {
      RowSpace span(3);
      for (const auto& c : subspace) span.insert(c);
      for (const auto& c : subspace) {
        Vector image(3);
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) image[i] += g(i, j) * c[j];
        EXPECT_TRUE(span.contains(image));
      }
    }
  }
}

TEST(Ruconj, BothDirections) {
  // For u ∈ R_u(P_λ): lim λ(a)·v = u·v  ⟺  u⁻¹·λ fixes v.
  Rand r(19);
  const auto rep = Representation::conjugation_tuples(2, 2);
  for (int k = 0; k < 60; ++k) {
    const auto lambda = random_lambda(r, gl2);
    const Matrix u = parabolic_element(r, lambda, false, true);
    Point v = rep.act(inverse(u), tuple({parabolic_element(r, lambda, true), parabolic_element(r, lambda, true)}));
    if (k % 3 == 0) v = tuple({parabolic_element(r, lambda), parabolic_element(r, lambda)});
    const auto lim = limit(rep, v, lambda);
    const bool lhs = lim && *lim == rep.act(u, v);
    const bool rhs = is_fixed(rep, v, lambda.conjugated(inverse(u)));
    EXPECT_EQ(lhs, rhs);
  }
}
