#include <gtest/gtest.h>

#include "support.hpp"

using namespace destab;
using namespace testing_support;

namespace {

const auto gl2 = GroupSpec::gl(2);
const auto gl3 = GroupSpec::gl(3);
const auto sl2 = GroupSpec::sl(2);

const Matrix unip = mat({{1, 1}, {0, 1}});
const Matrix swap2 = mat({{0, 1}, {1, 0}});
const Matrix rotation = mat({{0, -1}, {1, 0}});

SubgroupPresentation gens(std::vector<Matrix> g) { return SubgroupPresentation{std::move(g)}; }

// Oracle: {x : x·h = h·x for all h} from an explicit m²-column linear system.
RowSpace linear_centralizer(const std::vector<Matrix>& hs) {
  const auto m = hs.front().rows();
  std::vector<Vector> rows;
  for (const auto& h : hs)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        // (xh − hx)_ij = Σ_k x_ik h_kj − h_ik x_kj
        Vector row(m * m);
        for (std::size_t k = 0; k < m; ++k) {
          row[i * m + k] += h(k, j);
          row[k * m + j] -= h(i, k);
        }
        rows.push_back(std::move(row));
      }
  RowSpace out(m * m);
  for (const auto& v : nullspace(Matrix::from_rows(rows, m * m))) out.insert(v);
  return out;
}

// exp of a nilpotent matrix by its finite series.
Matrix nilpotent_exp(const Matrix& n) {
  const auto m = n.rows();
  Matrix out = Matrix::identity(m), p = Matrix::identity(m);
  Rational fact = 1;
  for (std::size_t k = 1; k <= m; ++k) {
    p = p * n;
    fact *= static_cast<long>(k);
    Matrix t = p;
    t *= Rational(1 / fact);
    out += t;
  }
  return out;
}

Matrix upper_unipotent(Rand& r, std::size_t m) {
  Matrix u = Matrix::identity(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) u(i, j) = r.rational();
  return u;
}

}  // namespace

TEST(Enveloping, Dimensions) {
  const auto a = enveloping_algebra(gens({unip}));
  EXPECT_EQ(a.dimension(), 2u);
  EXPECT_TRUE(a.contains(Matrix::identity(2)));
  EXPECT_TRUE(a.contains(e(2, 0, 1)));
  EXPECT_EQ(enveloping_algebra(gens({diag({2, 3})})).dimension(), 2u);
  EXPECT_TRUE(enveloping_algebra(gens({diag({2, 3})})).contains(diag({1, 0})));
  EXPECT_EQ(enveloping_algebra(gens({Matrix::identity(2)})).dimension(), 1u);
  EXPECT_EQ(enveloping_algebra(gens({diag({2, 3}), swap2})).dimension(), 4u);
  EXPECT_THROW(enveloping_algebra(gens({})), PreconditionError);
}

TEST(GenericTuple, Examples) {
  const auto h = gens({diag({2, 3}), swap2});
  EXPECT_TRUE(is_generic_tuple(h.generators, h));
  EXPECT_FALSE(is_generic_tuple({diag({2, 3})}, h));
  EXPECT_FALSE(is_generic_tuple({Matrix::identity(2)}, h));
  EXPECT_TRUE(is_generic_tuple({diag({2, 3}) * swap2}, gens({diag({2, 3}) * swap2})));
  EXPECT_THROW(is_generic_tuple({e(2, 1, 0) + Matrix::identity(2)}, gens({unip})), PreconditionError);
}

TEST(Radical, Examples) {
  const auto u = enveloping_algebra(gens({unip}));
  EXPECT_EQ(radical_dim(u), 1u);
  const auto rad = radical_basis(u);
  ASSERT_EQ(rad.size(), 1u);
  EXPECT_TRUE(rad[0](0, 0) == 0 && rad[0](1, 0) == 0 && rad[0](1, 1) == 0 && rad[0](0, 1) != 0);
  EXPECT_EQ(radical_dim(enveloping_algebra(gens({diag({2, 3})}))), 0u);
  EXPECT_EQ(radical_dim(enveloping_algebra(gens({Matrix::identity(2)}))), 0u);
  // Distinct eigenvalues: a split semisimple algebra. The second pair spans
  // the upper triangular algebra, whose radical is the strictly upper part.
  EXPECT_EQ(radical_dim(enveloping_algebra(gens({mat({{1, 1, 0}, {0, 2, 1}, {0, 0, 3}})}))), 0u);
  EXPECT_EQ(radical_dim(enveloping_algebra(gens({mat({{1, 1, 0}, {0, 1, 0}, {0, 0, 2}}), mat({{1, 0, 0}, {0, 1, 1}, {0, 0, 1}})}))),
            3u);
}

TEST(GcrAlgebra, Examples) {
  const auto u = is_gcr_algebra(gl2, gens({unip}));
  EXPECT_EQ(u.status, GcrStatus::NotCompletelyReducible);
  EXPECT_EQ(u.radical.size(), 1u);
  EXPECT_EQ(is_gcr_algebra(gl2, gens({swap2})).status, GcrStatus::CompletelyReducible);
  EXPECT_EQ(is_gcr_algebra(gl2, gens({Matrix::identity(2)})).status, GcrStatus::CompletelyReducible);
  EXPECT_THROW(is_gcr_algebra(sl2, gens({unip})), UnsupportedError);
  EXPECT_THROW(is_gcr_algebra(gl2, gens({mat({{1, 1}, {1, 1}})})), DomainError);
}

TEST(GcrSearch, Examples) {
  const auto cfg = SearchConfig::weyl_shear(gl2, 4, 2);
  const auto u = is_gcr_search(gl2, gens({unip}), cfg);
  EXPECT_EQ(u.status, GcrStatus::NotCompletelyReducible);
  ASSERT_TRUE(u.witness);
  EXPECT_EQ(u.witness->torus(), TorusCocharacter({1, -1}));

  const auto d = is_gcr_search(gl2, gens({diag({2, 3})}), cfg);
  EXPECT_EQ(d.status, GcrStatus::CompletelyReducible);
  EXPECT_TRUE(d.bounded);
  EXPECT_EQ(d.bound, 4);

  const auto r = is_gcr_search(sl2, gens({rotation}), SearchConfig::weyl_shear(sl2, 4, 2));
  EXPECT_EQ(r.status, GcrStatus::CompletelyReducible);
  EXPECT_TRUE(r.bounded);
  EXPECT_EQ(r.admissible, 0u);
}

TEST(GcrSearch, AgreesWithAlgebraOnSmallGroups) {
  Rand r(3);
  const auto cfg2 = SearchConfig::weyl_shear(gl2, 4, 2);
  const auto cfg3 = SearchConfig::weyl_shear(gl3, 3, 1);
  int reducible = 0, irreducible = 0;
  for (int k = 0; k < 24; ++k) {
    const bool three = k % 3 == 2;
    const auto& group = three ? gl3 : gl2;
    const auto& cfg = three ? cfg3 : cfg2;
    const auto m = group.dimension();
    // Frame-conjugates of triangular or diagonal generators keep the search
    // within reach of the family.
    const Matrix f = cfg.family[static_cast<std::size_t>(r.integer(0, static_cast<std::int64_t>(cfg.family.size()) - 1))];
    std::vector<Matrix> g;
    for (int i = 0; i < 2; ++i) {
      Matrix x = k % 2 ? upper_unipotent(r, m) : Matrix::identity(m);
      for (std::size_t j = 0; j < m; ++j) x(j, j) = q(static_cast<long>(r.integer(1, 3)));
      g.push_back(f * x * inverse(f));
    }
    const auto h = gens(g);
    const auto alg = is_gcr_algebra(group, h);
    const auto search = is_gcr_search(group, h, cfg);
    EXPECT_EQ(alg.status, search.status) << "case " << k;
    (alg.status == GcrStatus::CompletelyReducible ? irreducible : reducible)++;
  }
  EXPECT_GT(reducible, 0);
  EXPECT_GT(irreducible, 0);
}

TEST(CentralizerDim, Examples) {
  EXPECT_EQ(centralizer_dim(gl2, {Matrix::identity(2)}), 4u);
  EXPECT_EQ(centralizer_dim(gl2, {unip}), 2u);
  EXPECT_EQ(centralizer_dim(gl2, {diag({2, 3})}), 2u);
  EXPECT_EQ(centralizer_dim(sl2, {Matrix::identity(2)}), 3u);
  EXPECT_EQ(centralizer_dim(sl2, {unip}), 1u);
}

TEST(CentralizerDim, MatchesLinearOracleOnGl) {
  Rand r(5);
  for (int k = 0; k < 30; ++k) {
    std::vector<Matrix> t{r.invertible(3)};
    if (k % 2) t.push_back(upper_unipotent(r, 3));
    if (k % 5 == 0) t = {diag({2, 2, 3})};
    EXPECT_EQ(centralizer_dim(gl3, t), linear_centralizer(t).dim());
  }
}

TEST(CentralizerDim, MonotoneUnderCLambda) {
  // H ⊆ P_λ: dim C(c_λ(t)) ≥ dim C(t), equal iff t and c_λ(t) are R_u-conjugate.
  Rand r(7);
  const auto rep = Representation::conjugation_tuples(3, 2);
  int strict = 0, equal = 0;
  for (int k = 0; k < 40; ++k) {
    const TorusCocharacter d(r.exponents(3, 2));
    const auto lambda = Cocharacter(gl3, r.invertible(3), d);
    std::vector<Matrix> t;
    for (int i = 0; i < 2; ++i) {
      Matrix x(3, 3);
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          if (d[a] >= d[b]) x(a, b) = a == b ? q(static_cast<long>(r.integer(1, 3))) : (r.coin() ? r.rational() : Rational(0));
      t.push_back(lambda.base() * x * lambda.base_inverse());
    }
    const auto c = c_lambda(gl3, t, lambda);
    const auto before = centralizer_dim(gl3, t), after = centralizer_dim(gl3, c);
    EXPECT_GE(after, before);
    const bool conj = find_ru_conjugator(gl3, rep, point_from_matrices(t), point_from_matrices(c), lambda).has_value();
    EXPECT_EQ(after == before, conj) << "case " << k;
    (after == before ? equal : strict)++;
  }
  EXPECT_GT(strict, 0);
  EXPECT_GT(equal, 0);
}

TEST(GenericTuple, CentralizerTransfer) {
  Rand r(11);
  for (int k = 0; k < 10; ++k) {
    const Matrix a = r.invertible(3), b = upper_unipotent(r, 3);
    const auto h = gens({a, b, a * b, b * a * b});
    const std::vector<Matrix> t{a, b};
    ASSERT_TRUE(is_generic_tuple(t, h));
    EXPECT_EQ(linear_centralizer(t), linear_centralizer(h.generators));
  }
}

TEST(GenericTuple, ProjectionStaysGeneric) {
  Rand r(13);
  for (int k = 0; k < 15; ++k) {
    const auto lambda = Cocharacter(gl3, r.invertible(3), TorusCocharacter(r.exponents(3, 2)));
    const auto& d = lambda.torus();
    std::vector<Matrix> g;
    for (int i = 0; i < 3; ++i) {
      Matrix x(3, 3);
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          if (d[a] >= d[b]) x(a, b) = a == b ? q(static_cast<long>(r.integer(1, 4))) : r.rational();
      g.push_back(lambda.base() * x * lambda.base_inverse());
    }
    const auto h = gens(g);
    const std::vector<Matrix> t{g[0], g[1], g[2], g[0] * g[1]};
    ASSERT_TRUE(is_generic_tuple(t, h));
    const auto projected = gens(c_lambda(gl3, h.generators, lambda));
    EXPECT_TRUE(is_generic_tuple(c_lambda(gl3, t, lambda), projected));
  }
}

TEST(Reduce, Examples) {
  const auto cfg = SearchConfig::weyl_shear(gl2, 4, 2);
  const auto u = reduce_to_gcr(gl2, gens({unip}), cfg);
  ASSERT_EQ(u.chain.size(), 1u);
  EXPECT_EQ(u.chain[0].torus(), TorusCocharacter({1, -1}));
  EXPECT_EQ(u.m.generators, std::vector<Matrix>{Matrix::identity(2)});
  EXPECT_EQ(u.algebra_certifies, true);

  const auto rot = reduce_to_gcr(sl2, gens({rotation}), SearchConfig::weyl_shear(sl2, 4, 2));
  EXPECT_TRUE(rot.chain.empty());
  EXPECT_EQ(rot.m.generators, std::vector<Matrix>{rotation});
  EXPECT_FALSE(rot.algebra_certifies.has_value());

  const auto d = reduce_to_gcr(gl2, gens({diag({2, 3})}), cfg);
  EXPECT_TRUE(d.chain.empty());
  EXPECT_EQ(d.m.generators, std::vector<Matrix>{diag({2, 3})});
}

TEST(Reduce, IdempotentAndCertified) {
  Rand r(17);
  const auto cfg = SearchConfig::weyl_shear(gl3, 3, 1);
  for (int k = 0; k < 8; ++k) {
    const Matrix f = cfg.family[static_cast<std::size_t>(r.integer(0, 161))];
    std::vector<Matrix> g;
    for (int i = 0; i < 2; ++i) {
      Matrix x = upper_unipotent(r, 3);
      x(0, 0) = q(static_cast<long>(r.integer(1, 3)));
      g.push_back(f * x * inverse(f));
    }
    const auto red = reduce_to_gcr(gl3, gens(g), cfg);
    EXPECT_EQ(red.algebra_certifies, true) << "case " << k;
    EXPECT_TRUE(reduce_to_gcr(gl3, red.m, cfg).chain.empty());
    std::size_t dim = centralizer_dim(gl3, g);
    for (const auto& lambda : red.chain) {
      g = c_lambda(gl3, g, lambda);
      const auto next = centralizer_dim(gl3, g);
      EXPECT_GT(next, dim);
      dim = next;
    }
    EXPECT_EQ(g, red.m.generators);
  }
}

TEST(OptimalParabolic, Examples) {
  const auto cfg = SearchConfig::weyl_shear(gl2, 4, 2);
  const auto res = optimal_parabolic_subgroup(gl2, gens({unip}), ParabolicMode::UnipotentIdentity, cfg);
  EXPECT_EQ(res.status, OptimizationStatus::Destabilized);
  EXPECT_TRUE(res.parabolic->same_subgroup(ParabolicDescriptor(gl2, std_lambda(gl2, {1, -1}))));
  EXPECT_EQ(classify(gl2, unip, *res.lambda), MembershipClass::InRu);

  const auto id = optimal_parabolic_subgroup(gl2, gens({Matrix::identity(2)}), ParabolicMode::UnipotentIdentity, cfg);
  EXPECT_EQ(id.status, OptimizationStatus::Trivial);
  EXPECT_FALSE(id.parabolic->is_proper());

  auto cfg3 = SearchConfig::weyl_shear(gl3, 3, 1);
  cfg3.oracle_mode = true;
  const Matrix g = Matrix::identity(3) + e(3, 0, 2);
  const auto r3 = optimal_parabolic_subgroup(gl3, gens({g}), ParabolicMode::UnipotentIdentity, cfg3);
  EXPECT_EQ(r3.status, OptimizationStatus::Destabilized);
  EXPECT_TRUE(r3.parabolic->is_proper());
  EXPECT_EQ(classify(gl3, g, *r3.lambda), MembershipClass::InRu);
  EXPECT_TRUE(r3.global_verified);
  EXPECT_EQ(r3.value_sq, 2);  // λ = (1,0,−1): a = 2, ‖λ‖² = 2
}

TEST(OptimalParabolic, Errors) {
  const auto cfg = SearchConfig::weyl_shear(gl2, 3, 1);
  EXPECT_THROW(optimal_parabolic_subgroup(gl2, gens({diag({2, 3})}), ParabolicMode::UnipotentIdentity, cfg), PreconditionError);
  EXPECT_THROW(optimal_parabolic_subgroup(gl2, gens({unip}), ParabolicMode::Custom, cfg), PreconditionError);
  auto bad = cfg;
  bad.normalizer_samples = {swap2};
  EXPECT_THROW(optimal_parabolic_subgroup(gl2, gens({unip}), ParabolicMode::UnipotentIdentity, bad), PreconditionError);
  EXPECT_THROW(optimal_parabolic_subgroup(gl2, gens({}), ParabolicMode::UnipotentIdentity, cfg), PreconditionError);
}

TEST(OptimalParabolic, CustomModeScalars) {
  // H = ⟨2·u⟩ with M = scalars: S = scalar tuples, still destabilized by (1,−1).
  const auto rep = Representation::conjugation_tuples(2, 1);
  Polynomial diff = Polynomial::variable(0);
  diff -= Polynomial::variable(3);
  const auto s = SubvarietySpec::custom(rep, {Polynomial::variable(1), Polynomial::variable(2), diff}, true);
  const Matrix g = mat({{2, 2}, {0, 2}});
  const auto res = optimal_parabolic_subgroup(gl2, gens({g}), ParabolicMode::Custom, SearchConfig::weyl_shear(gl2, 4, 2), s);
  EXPECT_EQ(res.status, OptimizationStatus::Destabilized);
  EXPECT_EQ(res.lambda->torus(), TorusCocharacter({1, -1}));
  EXPECT_EQ(classify(gl2, g, *res.lambda), MembershipClass::InPnotLnotRu);
}

TEST(BuildingCentre, Examples) {
  const auto b = building_centre(sl2, gens({unip}), ParabolicMode::UnipotentIdentity, SearchConfig::weyl_shear(sl2, 4, 2));
  EXPECT_TRUE(b.has_centre);
  ASSERT_EQ(b.flag.size(), 1u);
  ASSERT_EQ(b.flag[0].size(), 1u);  // a vertex: the line spanned by e1
  ASSERT_EQ(b.flag[0][0].size(), 1u);
  const auto& line = b.flag[0][0][0];
  EXPECT_TRUE(sgn(line[0]) != 0 && sgn(line[1]) == 0);

  const auto none = building_centre(gl2, gens({Matrix::identity(2)}), ParabolicMode::UnipotentIdentity, SearchConfig::weyl_shear(gl2, 3, 1));
  EXPECT_FALSE(none.has_centre);
  EXPECT_FALSE(none.parabolic.has_value());
  EXPECT_TRUE(none.flag.empty());
}

TEST(BuildingCentre, StableUnderNormalizer) {
  auto cfg = SearchConfig::weyl_shear(gl3, 3, 1);
  cfg.oracle_mode = true;
  const Matrix swap23 = mat({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  cfg.normalizer_samples = {swap23, diag({5, 5, 5})};
  const auto h = gens({Matrix::identity(3) + e(3, 0, 1), Matrix::identity(3) + e(3, 0, 2)});
  const auto c = building_centre(gl3, h, ParabolicMode::UnipotentIdentity, cfg);
  EXPECT_TRUE(c.has_centre);
  EXPECT_TRUE(c.parabolic->is_proper());
  EXPECT_EQ(c.stabilizing_samples, (std::vector<std::size_t>{0, 1}));
  for (const auto& g : h.generators) EXPECT_EQ(classify(gl3, g, *c.optimum.lambda), MembershipClass::InRu);
  EXPECT_NE(classify(gl3, swap23, *c.optimum.lambda), MembershipClass::NotInP);
}

TEST(LieGcr, Examples) {
  const auto cfg = SearchConfig::weyl_shear(sl2, 4, 2);
  const auto n = lie_is_gcr(sl2, LieSubalgebra{{e(2, 0, 1)}}, cfg);
  EXPECT_EQ(n.status, GcrStatus::NotCompletelyReducible);
  ASSERT_TRUE(n.witness);
  EXPECT_EQ(n.witness->element_at(3), diag({3, q(1, 3)}));
  EXPECT_TRUE(n.witness_limit->is_zero());

  const auto h = lie_is_gcr(sl2, LieSubalgebra{{diag({1, -1})}}, cfg);
  EXPECT_EQ(h.status, GcrStatus::CompletelyReducible);
  EXPECT_TRUE(h.bounded);

  const auto full = lie_is_gcr(sl2, LieSubalgebra{{e(2, 0, 1), e(2, 1, 0), diag({1, -1})}}, cfg);
  EXPECT_EQ(full.status, GcrStatus::CompletelyReducible);
  EXPECT_EQ(full.admissible, 0u);
}

TEST(LieGcr, Errors) {
  const auto cfg = SearchConfig::weyl_shear(sl2, 3, 1);
  EXPECT_THROW(lie_is_gcr(sl2, LieSubalgebra{{e(2, 0, 1), e(2, 1, 0)}}, cfg), InvariantError);
  EXPECT_THROW(lie_is_gcr(sl2, LieSubalgebra{{diag({1, 0})}}, cfg), DomainError);
  EXPECT_THROW(lie_is_gcr(sl2, LieSubalgebra{{}}, cfg), PreconditionError);
}

TEST(UnipotentLog, Examples) {
  EXPECT_EQ(unipotent_log(unip), e(2, 0, 1));
  const Matrix j = Matrix::identity(3) + e(3, 0, 1) + e(3, 1, 2);
  const Matrix n = e(3, 0, 1) + e(3, 1, 2);
  Matrix half = n * n;
  half *= q(-1, 2);
  EXPECT_EQ(unipotent_log(j), n + half);
  EXPECT_TRUE(unipotent_log(Matrix::identity(3)).is_zero());
  EXPECT_THROW(unipotent_log(diag({2, 1})), PreconditionError);
}

TEST(UnipotentLog, InvertsExp) {
  Rand r(19);
  for (int k = 0; k < 20; ++k) {
    const Matrix f = r.invertible(3);
    const Matrix u = f * upper_unipotent(r, 3) * inverse(f);
    EXPECT_EQ(nilpotent_exp(unipotent_log(u)), u);
  }
}
