#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "destab/errors.hpp"
#include "destab/group.hpp"
#include "destab/matrix.hpp"
#include "destab/representation.hpp"

namespace destab {

enum class MembershipClass { InRu, InL, InPnotLnotRu, NotInP };

inline const char* to_string(MembershipClass c) {
  switch (c) {
    case MembershipClass::InRu: return "InRu";
    case MembershipClass::InL: return "InL";
    case MembershipClass::InPnotLnotRu: return "InPnotLnotRu";
    case MembershipClass::NotInP: return "NotInP";
  }
  return "?";
}

namespace detail {

// Limit of λ_d(a)·x·λ_d(a)⁻¹ for x already in the torus frame. Entry (i,j)
// scales by a^(d_i - d_j).
inline std::optional<Matrix> frame_conjugation_limit(const Matrix& x, const TorusCocharacter& d) {
  Matrix lim(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (sgn(x(i, j)) == 0) continue;
      if (d[i] < d[j]) return std::nullopt;
      if (d[i] == d[j]) lim(i, j) = x(i, j);
    }
  return lim;
}

}  // namespace detail

// P_λ together with its Levi L_λ and unipotent radical R_u(P_λ). For a
// cocharacter g·λ_d·g⁻¹ on GL/SL factors, P_λ = g·P_d·g⁻¹ where P_d is block
// upper triangular for the ordering of the exponents.
class ParabolicDescriptor {
 public:
  ParabolicDescriptor(const GroupSpec& group, Cocharacter lambda) : lambda_(std::move(lambda)) {
    const auto& d = lambda_.torus();
    for (std::size_t b = 0; b < group.factors().size(); ++b) {
      std::map<std::int64_t, std::vector<std::size_t>, std::greater<>> levels;
      const auto o = group.block_offset(b);
      for (std::size_t i = 0; i < group.factors()[b].rank; ++i) levels[d[o + i]].push_back(o + i);
      std::vector<std::vector<std::size_t>> parts;
      for (auto& [value, idx] : levels) parts.push_back(std::move(idx));
      partition_.push_back(std::move(parts));
    }
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j)
        if (group.same_block(i, j)) pairs_.emplace_back(i, j);
  }

  const Cocharacter& cocharacter() const { return lambda_; }

  // Per factor block: index groups ordered by descending exponent.
  const std::vector<std::vector<std::vector<std::size_t>>>& partition() const { return partition_; }

  bool is_proper() const {
    for (const auto& parts : partition_)
      if (parts.size() > 1) return true;
    return false;
  }

  // Lie algebra of P_λ inside Mat_m, as a subspace of flattened matrices.
  RowSpace lie_algebra() const { return span_of([](auto di, auto dj) { return di >= dj; }); }
  RowSpace levi_lie_algebra() const { return span_of([](auto di, auto dj) { return di == dj; }); }
  RowSpace radical_lie_algebra() const { return span_of([](auto di, auto dj) { return di > dj; }); }

  // Both descriptors denote the same (connected) subgroup.
  bool same_subgroup(const ParabolicDescriptor& other) const { return lie_algebra() == other.lie_algebra(); }
  bool same_levi(const ParabolicDescriptor& other) const { return levi_lie_algebra() == other.levi_lie_algebra(); }

  // The partial flag stabilized by P_λ: per block, the subspaces
  // g·span{e_i : d_i ≥ c} for each exponent level c below the top, as
  // column bases. Whole-block and zero subspaces are omitted.
  std::vector<std::vector<std::vector<Vector>>> flag() const {
    std::vector<std::vector<std::vector<Vector>>> out;
    const auto& g = lambda_.base();
    for (const auto& parts : partition_) {
      std::vector<std::vector<Vector>> subspaces;
      std::vector<std::size_t> acc;
      for (std::size_t p = 0; p + 1 < parts.size(); ++p) {
        acc.insert(acc.end(), parts[p].begin(), parts[p].end());
        std::vector<Vector> basis;
        for (auto i : acc) {
          Vector col(g.rows());
          for (std::size_t r = 0; r < g.rows(); ++r) col[r] = g(r, i);
          basis.push_back(std::move(col));
        }
        subspaces.push_back(std::move(basis));
      }
      out.push_back(std::move(subspaces));
    }
    return out;
  }

  ParabolicDescriptor conjugated(const GroupSpec& group, const Matrix& h) const {
    return ParabolicDescriptor(group, lambda_.conjugated(h));
  }

 private:
  template <class Pred>
  RowSpace span_of(Pred keep) const {
    const auto& d = lambda_.torus();
    const auto m = d.size();
    RowSpace s(m * m);
    for (const auto& [i, j] : pairs_) {
      if (!keep(d[i], d[j])) continue;
      // g e_ij g⁻¹ = (column i of g)(row j of g⁻¹).
      Vector v(m * m);
      for (std::size_t r = 0; r < m; ++r) {
        if (sgn(lambda_.base()(r, i)) == 0) continue;
        for (std::size_t c = 0; c < m; ++c) v[r * m + c] = lambda_.base()(r, i) * lambda_.base_inverse()(j, c);
      }
      s.insert(v);
    }
    return s;
  }

  Cocharacter lambda_;
  std::vector<std::vector<std::vector<std::size_t>>> partition_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

// InP iff λ(a) g λ(a)⁻¹ has a limit; InL iff that limit is g; InRu iff it is
// the identity. The identity element is reported as InRu.
inline MembershipClass classify(const GroupSpec& group, const Matrix& g, const Cocharacter& lambda) {
  group.require_element(g, "classified element");
  Matrix x = lambda.base_inverse() * g * lambda.base();
  auto lim = detail::frame_conjugation_limit(x, lambda.torus());
  if (!lim) return MembershipClass::NotInP;
  if (lim->is_identity()) return MembershipClass::InRu;
  if (*lim == x) return MembershipClass::InL;
  return MembershipClass::InPnotLnotRu;
}

inline bool in_parabolic(const GroupSpec& group, const Matrix& g, const Cocharacter& lambda) {
  return classify(group, g, lambda) != MembershipClass::NotInP;
}

// The projection c_λ : P_λ → L_λ.
inline Matrix c_lambda(const GroupSpec& group, const Matrix& g, const Cocharacter& lambda) {
  group.require_element(g, "c_lambda argument");
  Matrix x = lambda.base_inverse() * g * lambda.base();
  auto lim = detail::frame_conjugation_limit(x, lambda.torus());
  if (!lim) throw PreconditionError("c_lambda: element is not in P_lambda");
  return lambda.base() * *lim * lambda.base_inverse();
}

inline std::vector<Matrix> c_lambda(const GroupSpec& group, const std::vector<Matrix>& tuple, const Cocharacter& lambda) {
  std::vector<Matrix> out;
  out.reserve(tuple.size());
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    group.require_element(tuple[k], "c_lambda tuple component");
    Matrix x = lambda.base_inverse() * tuple[k] * lambda.base();
    auto lim = detail::frame_conjugation_limit(x, lambda.torus());
    if (!lim) throw PreconditionError("c_lambda: tuple component " + std::to_string(k) + " is not in P_lambda");
    out.push_back(lambda.base() * *lim * lambda.base_inverse());
  }
  return out;
}

// Lie algebra version: InRu iff the limit of Ad(λ(a))x is 0.
inline MembershipClass lie_classify(const GroupSpec& group, const Matrix& x, const Cocharacter& lambda) {
  if (!group.in_lie_algebra(x)) throw DomainError("matrix is not in the Lie algebra of the group");
  Matrix y = lambda.base_inverse() * x * lambda.base();
  auto lim = detail::frame_conjugation_limit(y, lambda.torus());
  if (!lim) return MembershipClass::NotInP;
  if (lim->is_zero()) return MembershipClass::InRu;
  if (*lim == y) return MembershipClass::InL;
  return MembershipClass::InPnotLnotRu;
}

// Solves u·h_k = h'_k·u for u ∈ R_u(P_λ). In the torus frame u = 1 + N with
// N supported on same-block pairs (i,j) with d_i > d_j, so the relations are
// affine-linear in N.
inline std::optional<Matrix> find_ru_conjugator(const GroupSpec& group, const Representation& rep, const Point& v,
                                                const Point& v_target, const Cocharacter& lambda) {
  if (!rep.is_conjugation())
    throw UnsupportedError("find_ru_conjugator needs a conjugation representation (matrix tuples or adjoint)");
  rep.check_compatible(group);
  rep.check_point(v);
  rep.check_point(v_target);
  const auto m = rep.group_dim();
  const auto& d = lambda.torus();
  auto hs = matrices_from_point(rep, v);
  auto ts = matrices_from_point(rep, v_target);
  for (auto& h : hs) h = lambda.base_inverse() * h * lambda.base();
  for (auto& t : ts) t = lambda.base_inverse() * t * lambda.base();

  std::vector<std::pair<std::size_t, std::size_t>> vars;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (group.same_block(i, j) && d[i] > d[j]) vars.emplace_back(i, j);

  Matrix a(hs.size() * m * m, vars.size());
  Vector rhs(hs.size() * m * m);
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const auto& h = hs[k];
    const auto& t = ts[k];
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        const std::size_t row = k * m * m + r * m + c;
        rhs[row] = t(r, c) - h(r, c);
        for (std::size_t p = 0; p < vars.size(); ++p) {
          const auto [i, j] = vars[p];
          Rational coeff = 0;
          if (r == i) coeff += h(j, c);
          if (c == j) coeff -= t(r, i);
          a(row, p) = coeff;
        }
      }
  }
  auto sol = solve_affine(a, rhs);
  if (!sol) return std::nullopt;
  Matrix n = Matrix::identity(m);
  for (std::size_t p = 0; p < vars.size(); ++p) n(vars[p].first, vars[p].second) += (*sol)[p];
  Matrix u = lambda.base() * n * lambda.base_inverse();

  Matrix u_inv = inverse(u);
  if (rep.act(u, u_inv, v) != v_target) throw InvariantError("conjugator does not map v to the target");
  if (classify(group, u, lambda) != MembershipClass::InRu) throw InvariantError("conjugator is not in R_u(P_lambda)");
  return u;
}

inline bool in_unipotent_radical(const GroupSpec& group, const Matrix& u, const Cocharacter& lambda) {
  return classify(group, u, lambda) == MembershipClass::InRu;
}

}  // namespace destab
