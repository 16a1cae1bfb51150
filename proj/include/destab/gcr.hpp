#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "destab/errors.hpp"
#include "destab/group.hpp"
#include "destab/instability.hpp"
#include "destab/matrix.hpp"
#include "destab/representation.hpp"
#include "destab/rparabolic.hpp"

namespace destab {

// H given by generators; H stands for the Zariski closure of the group they
// generate.
struct SubgroupPresentation {
  std::vector<Matrix> generators;

  void validate(const GroupSpec& group) const {
    if (generators.empty()) throw PreconditionError("subgroup needs at least one generator");
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (!group.contains(generators[i]))
        throw DomainError("generator " + std::to_string(i) + " is not an element of the group");
  }

  Point tuple() const { return point_from_matrices(generators); }
};

// The associative subalgebra of Mat_m spanned by a set of matrices.
class EnvelopingAlgebra {
 public:
  // Span closure of {I} under multiplication by the generators on both sides.
  static EnvelopingAlgebra generated_by(std::size_t m, const std::vector<Matrix>& gens) {
    EnvelopingAlgebra a(m);
    std::deque<Matrix> queue;
    auto add = [&](const Matrix& x) {
      if (a.space_.insert(flatten(x))) {
        a.basis_.push_back(x);
        queue.push_back(x);
      }
    };
    add(Matrix::identity(m));
    while (!queue.empty()) {
      Matrix b = std::move(queue.front());
      queue.pop_front();
      for (const auto& g : gens) {
        add(g * b);
        add(b * g);
      }
    }
    a.verify_closure();
    return a;
  }

  std::size_t m() const { return m_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Matrix>& basis() const { return basis_; }
  bool contains(const Matrix& x) const { return space_.contains(flatten(x)); }

  void verify_closure() const {
    for (const auto& a : basis_)
      for (const auto& b : basis_)
        if (!contains(a * b)) throw InvariantError("enveloping algebra is not closed under multiplication");
  }

 private:
  explicit EnvelopingAlgebra(std::size_t m) : m_(m), space_(m * m) {}

  std::size_t m_;
  RowSpace space_;
  std::vector<Matrix> basis_;
};

inline EnvelopingAlgebra enveloping_algebra(const SubgroupPresentation& h) {
  if (h.generators.empty()) throw PreconditionError("subgroup needs at least one generator");
  return EnvelopingAlgebra::generated_by(h.generators.front().rows(), h.generators);
}

// t is generic for H when it generates the same algebra.
inline bool is_generic_tuple(const std::vector<Matrix>& t, const SubgroupPresentation& h) {
  const auto a = enveloping_algebra(h);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!a.contains(t[i]))
      throw PreconditionError("tuple component " + std::to_string(i) + " is not in the algebra of H");
  return EnvelopingAlgebra::generated_by(a.m(), t).dimension() == a.dimension();
}

// Radical of A in characteristic zero: the kernel of the trace form.
inline std::vector<Matrix> radical_basis(const EnvelopingAlgebra& a) {
  const auto& b = a.basis();
  Matrix gram(b.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i; j < b.size(); ++j) gram(i, j) = gram(j, i) = (b[i] * b[j]).trace();
  std::vector<Matrix> out;
  for (const auto& c : nullspace(gram)) {
    Matrix x(a.m(), a.m());
    for (std::size_t i = 0; i < b.size(); ++i)
      if (sgn(c[i]) != 0) {
        Matrix t = b[i];
        t *= c[i];
        x += t;
      }
    out.push_back(std::move(x));
  }
  return out;
}

inline std::size_t radical_dim(const EnvelopingAlgebra& a) { return radical_basis(a).size(); }

enum class GcrStatus { CompletelyReducible, NotCompletelyReducible };

inline const char* to_string(GcrStatus s) {
  return s == GcrStatus::CompletelyReducible ? "completely_reducible" : "not_completely_reducible";
}

struct GcrVerdict {
  GcrStatus status = GcrStatus::CompletelyReducible;
  std::optional<Cocharacter> witness;     // search route
  std::optional<Point> witness_limit;
  std::vector<Matrix> radical;            // algebra route
  bool bounded = false;                   // completely_reducible only within the search bound
  std::int64_t bound = 0;
  std::size_t family_size = 0;
  std::size_t examined = 0;
  std::size_t admissible = 0;
};

// GL(V)-complete reducibility over ℚ via semisimplicity of the enveloping
// algebra.
inline GcrVerdict is_gcr_algebra(const GroupSpec& group, const SubgroupPresentation& h) {
  if (!group.is_single_gl())
    throw UnsupportedError("the algebra criterion needs a single GL factor; use the search instead");
  h.validate(group);
  GcrVerdict v;
  v.radical = radical_basis(enveloping_algebra(h));
  v.status = v.radical.empty() ? GcrStatus::CompletelyReducible : GcrStatus::NotCompletelyReducible;
  return v;
}

namespace detail {

inline GcrVerdict verdict_from(const ClosednessVerdict& c) {
  GcrVerdict v;
  v.status = c.closed ? GcrStatus::CompletelyReducible : GcrStatus::NotCompletelyReducible;
  v.witness = c.witness;
  v.witness_limit = c.witness_limit;
  v.bounded = c.closed;
  v.bound = c.bound;
  v.family_size = c.family_size;
  v.examined = c.examined;
  v.admissible = c.admissible;
  return v;
}

}  // namespace detail

// G-cr through cocharacter-closedness of the generator tuple.
inline GcrVerdict is_gcr_search(const GroupSpec& group, const SubgroupPresentation& h, const SearchConfig& cfg) {
  h.validate(group);
  const auto rep = Representation::conjugation_tuples(group.dimension(), h.generators.size());
  return detail::verdict_from(is_cochar_closed(group, rep, h.tuple(), cfg));
}

// dim of {x in Lie(G) : x h = h x for every h in the tuple}.
inline std::size_t centralizer_dim(const GroupSpec& group, const std::vector<Matrix>& tuple) {
  const auto m = group.dimension();
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (group.same_block(i, j)) vars.emplace_back(i, j);
  std::vector<Vector> rows;
  for (const auto& h : tuple) {
    if (h.rows() != m || h.cols() != m) throw DimensionError("tuple component has the wrong size");
    // (x h − h x)(r,c) = Σ_k x(r,k) h(k,c) − h(r,k) x(k,c).
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        Vector row(vars.size());
        for (std::size_t p = 0; p < vars.size(); ++p) {
          const auto [i, j] = vars[p];
          if (i == r) row[p] += h(j, c);
          if (j == c) row[p] -= h(r, i);
        }
        rows.push_back(std::move(row));
      }
  }
  for (std::size_t b = 0; b < group.factors().size(); ++b) {
    if (group.factors()[b].family != Family::SL) continue;
    Vector row(vars.size());
    for (std::size_t p = 0; p < vars.size(); ++p)
      if (vars[p].first == vars[p].second && group.block_of(vars[p].first) == b) row[p] = 1;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return vars.size();
  return vars.size() - rank(Matrix::from_rows(rows, vars.size()));
}

struct Reduction {
  std::vector<Cocharacter> chain;
  SubgroupPresentation m;
  std::optional<bool> algebra_certifies;  // GL only: the algebra criterion agrees M is G-cr
};

// Descends along non-closedness witnesses: each step replaces H by c_λ(H)
// for a λ whose limit is not R_u(P_λ)-conjugate to the tuple, so the
// centralizer dimension strictly grows and the loop terminates.
inline Reduction reduce_to_gcr(const GroupSpec& group, const SubgroupPresentation& h, const SearchConfig& cfg) {
  h.validate(group);
  Reduction out;
  out.m = h;
  const auto rep = Representation::conjugation_tuples(group.dimension(), h.generators.size());
  std::size_t dim = centralizer_dim(group, h.generators);
  for (;;) {
    auto c = is_cochar_closed(group, rep, out.m.tuple(), cfg);
    if (c.closed) break;
    out.chain.push_back(*c.witness);
    out.m.generators = c_lambda(group, out.m.generators, *c.witness);
    const auto next = centralizer_dim(group, out.m.generators);
    if (next <= dim) throw InvariantError("reduction step did not enlarge the centralizer");
    dim = next;
  }
  if (group.is_single_gl()) out.algebra_certifies = is_gcr_algebra(group, out.m).status == GcrStatus::CompletelyReducible;
  return out;
}

enum class ParabolicMode { UnipotentIdentity, Custom };

namespace detail {

inline bool is_unipotent(const Matrix& g) {
  const auto m = g.rows();
  return power(g - Matrix::identity(m), static_cast<unsigned>(m)).is_zero();
}

// g permutes the generator set, so g normalizes H.
inline bool permutes_generators(const Matrix& g, const std::vector<Matrix>& gens) {
  const Matrix g_inv = inverse(g);
  for (const auto& h : gens)
    if (std::find(gens.begin(), gens.end(), g * h * g_inv) == gens.end()) return false;
  return true;
}

}  // namespace detail

// P(H): the Kempf parabolic of the generator tuple. In unipotent mode S is
// the identity tuple (M trivial); otherwise the caller supplies S. The
// normalizer samples of cfg must permute the generators.
inline OptimizationResult optimal_parabolic_subgroup(const GroupSpec& group, const SubgroupPresentation& h,
                                                     ParabolicMode mode, const SearchConfig& cfg,
                                                     const std::optional<SubvarietySpec>& custom = std::nullopt) {
  h.validate(group);
  const auto rep = Representation::conjugation_tuples(group.dimension(), h.generators.size());
  std::optional<SubvarietySpec> s;
  if (mode == ParabolicMode::UnipotentIdentity) {
    for (std::size_t i = 0; i < h.generators.size(); ++i)
      if (!detail::is_unipotent(h.generators[i]))
        throw PreconditionError("unipotent mode: generator " + std::to_string(i) + " is not unipotent");
    s = SubvarietySpec::identity_tuple(rep);
  } else {
    if (!custom) throw PreconditionError("custom mode needs a subvariety");
    s = *custom;
  }
  for (std::size_t k = 0; k < cfg.normalizer_samples.size(); ++k)
    if (!detail::permutes_generators(cfg.normalizer_samples[k], h.generators))
      throw PreconditionError("normalizer sample " + std::to_string(k) + " does not permute the generators");

  SearchConfig inner = cfg;
  inner.normalizer_samples.clear();
  auto res = optimize(group, rep, {h.tuple()}, *s, inner);
  if (res.status != OptimizationStatus::Destabilized) return res;

  for (std::size_t i = 0; i < h.generators.size(); ++i) {
    const auto c = classify(group, h.generators[i], *res.lambda);
    if (c == MembershipClass::NotInP) throw InvariantError("generator " + std::to_string(i) + " is not in P(H)");
    if (mode == ParabolicMode::UnipotentIdentity && c != MembershipClass::InRu)
      throw InvariantError("unipotent generator " + std::to_string(i) + " is not in R_u(P(H))");
  }
  for (std::size_t k = 0; k < cfg.normalizer_samples.size(); ++k)
    if (classify(group, cfg.normalizer_samples[k], *res.lambda) == MembershipClass::NotInP)
      res.certificate.normalizer_outside.push_back(k);
  if (res.global_verified && !res.certificate.normalizer_outside.empty())
    throw InvariantError("a normalizer sample lies outside P(H)");
  return res;
}

struct CentreSimplex {
  bool has_centre = false;
  std::optional<ParabolicDescriptor> parabolic;
  // Per factor block, the subspaces of the stabilized flag (column bases).
  std::vector<std::vector<std::vector<Vector>>> flag;
  std::vector<std::size_t> stabilizing_samples;  // samples with g·P·g⁻¹ = P
  OptimizationResult optimum;
};

// The simplex of P(H) in the building, whose barycentre is the fixed centre.
inline CentreSimplex building_centre(const GroupSpec& group, const SubgroupPresentation& h, ParabolicMode mode,
                                     const SearchConfig& cfg,
                                     const std::optional<SubvarietySpec>& custom = std::nullopt) {
  CentreSimplex out;
  out.optimum = optimal_parabolic_subgroup(group, h, mode, cfg, custom);
  if (out.optimum.status != OptimizationStatus::Destabilized) return out;
  out.has_centre = true;
  out.parabolic = out.optimum.parabolic;
  out.flag = out.parabolic->flag();
  bool all = true;
  for (std::size_t k = 0; k < cfg.normalizer_samples.size(); ++k) {
    if (out.parabolic->conjugated(group, cfg.normalizer_samples[k]).same_subgroup(*out.parabolic))
      out.stabilizing_samples.push_back(k);
    else
      all = false;
  }
  if (out.optimum.global_verified && !all) throw InvariantError("a normalizer sample moves the centre simplex");
  return out;
}

// A Lie subalgebra of Lie(G) given by a basis.
struct LieSubalgebra {
  std::vector<Matrix> basis;

  void validate(const GroupSpec& group) const {
    if (basis.empty()) throw PreconditionError("Lie subalgebra needs at least one basis element");
    RowSpace span(group.dimension() * group.dimension());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!group.in_lie_algebra(basis[i]))
        throw DomainError("basis element " + std::to_string(i) + " is not in the Lie algebra of the group");
      span.insert(flatten(basis[i]));
    }
    for (const auto& a : basis)
      for (const auto& b : basis)
        if (!span.contains(flatten(a * b - b * a))) throw InvariantError("basis is not closed under the commutator");
  }
};

// G-cr for a Lie subalgebra: closedness of G·(basis tuple) under the adjoint
// action, tested through the same bounded cocharacter search.
inline GcrVerdict lie_is_gcr(const GroupSpec& group, const LieSubalgebra& h, const SearchConfig& cfg) {
  h.validate(group);
  const auto rep = Representation::conjugation_tuples(group.dimension(), h.basis.size());
  return detail::verdict_from(is_cochar_closed(group, rep, point_from_matrices(h.basis), cfg));
}

// log u = Σ_{k≥1} (−1)^{k+1} (u − 1)^k / k for unipotent u.
inline Matrix unipotent_log(const Matrix& u) {
  if (!detail::is_unipotent(u)) throw PreconditionError("logarithm needs a unipotent matrix");
  const auto m = u.rows();
  const Matrix n = u - Matrix::identity(m);
  Matrix out(m, m), p = n;
  for (std::size_t k = 1; k <= m; ++k) {
    Matrix t = p;
    t *= q(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
    out += t;
    p = p * n;
  }
  return out;
}

}  // namespace destab
