#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "destab/errors.hpp"
#include "destab/matrix.hpp"
#include "destab/rational.hpp"

namespace destab {

enum class Family { GL, SL };

inline const char* to_string(Family f) { return f == Family::GL ? "GL" : "SL"; }

struct Factor {
  Family family = Family::GL;
  std::size_t rank = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

// A torus weight: integer vector of length m, one entry per diagonal slot.
class Character {
 public:
  Character() = default;
  explicit Character(std::vector<std::int64_t> w) : w_(std::move(w)) {}

  static Character zero(std::size_t m) { return Character(std::vector<std::int64_t>(m, 0)); }

  std::size_t size() const { return w_.size(); }
  const std::vector<std::int64_t>& weights() const { return w_; }
  std::int64_t operator[](std::size_t i) const { return w_[i]; }
  bool is_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](auto x) { return x == 0; });
  }

  Character& operator+=(const Character& o) {
    if (o.size() != size()) throw DimensionError("character length mismatch");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] += o.w_[i];
    return *this;
  }
  friend Character operator+(Character a, const Character& b) { return a += b; }
  friend Character operator*(std::int64_t k, Character a) {
    for (auto& x : a.w_) x *= k;
    return a;
  }

  friend auto operator<=>(const Character&, const Character&) = default;

 private:
  std::vector<std::int64_t> w_;
};

// A cocharacter of the standard diagonal torus: a ↦ diag(a^d_1, ..., a^d_m).
class TorusCocharacter {
 public:
  TorusCocharacter() = default;
  explicit TorusCocharacter(std::vector<std::int64_t> d) : d_(std::move(d)) {}

  static TorusCocharacter zero(std::size_t m) { return TorusCocharacter(std::vector<std::int64_t>(m, 0)); }

  std::size_t size() const { return d_.size(); }
  const std::vector<std::int64_t>& exponents() const { return d_; }
  std::int64_t operator[](std::size_t i) const { return d_[i]; }

  bool is_zero() const {
    return std::all_of(d_.begin(), d_.end(), [](auto x) { return x == 0; });
  }

  std::int64_t content() const {
    std::int64_t g = 0;
    for (auto x : d_) g = std::gcd(g, x);
    return g;
  }

  // gcd of the nonzero entries is one (the zero cocharacter is not primitive).
  bool is_primitive() const { return content() == 1; }

  TorusCocharacter primitive() const {
    auto g = content();
    if (g == 0) return *this;
    std::vector<std::int64_t> p(d_);
    for (auto& x : p) x /= g;
    return TorusCocharacter(std::move(p));
  }

  friend TorusCocharacter operator+(const TorusCocharacter& a, const TorusCocharacter& b) {
    if (a.size() != b.size()) throw DimensionError("cocharacter length mismatch");
    std::vector<std::int64_t> s(a.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.d_[i] + b.d_[i];
    return TorusCocharacter(std::move(s));
  }
  friend TorusCocharacter operator*(std::int64_t k, const TorusCocharacter& a) {
    std::vector<std::int64_t> s(a.d_);
    for (auto& x : s) x *= k;
    return TorusCocharacter(std::move(s));
  }

  friend auto operator<=>(const TorusCocharacter&, const TorusCocharacter&) = default;

 private:
  std::vector<std::int64_t> d_;
};

// ⟨λ, χ⟩ = Σ d_i χ_i.
inline std::int64_t pairing(const TorusCocharacter& lambda, const Character& chi) {
  if (lambda.size() != chi.size())
    throw DimensionError("pairing: cocharacter has length " + std::to_string(lambda.size()) +
                         " but character has length " + std::to_string(chi.size()));
  std::int64_t s = 0;
  for (std::size_t i = 0; i < chi.size(); ++i) s += lambda[i] * chi[i];
  return s;
}

// Permutation of {0..m-1}; entry i is the image of i.
using Permutation = std::vector<std::size_t>;

class GroupSpec;

// Weyl-invariant positive-definite integer form on the cocharacter lattice.
class Norm {
 public:
  Norm() = default;

  const Matrix& gram() const { return gram_; }

  Rational norm_sq(const TorusCocharacter& d) const {
    if (d.size() != gram_.rows()) throw DimensionError("norm: cocharacter length mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == 0) continue;
      for (std::size_t j = 0; j < d.size(); ++j)
        if (d[j] != 0) s += gram_(i, j) * Rational(d[i]) * Rational(d[j]);
    }
    return s;
  }

 private:
  friend class GroupSpec;
  explicit Norm(Matrix gram) : gram_(std::move(gram)) {}
  Matrix gram_;
};

// A split classical group: block-diagonal product of GL_n and SL_n factors
// acting on k^m, m = Σ n_i, with its standard diagonal maximal torus.
class GroupSpec {
 public:
  explicit GroupSpec(std::vector<Factor> factors, std::optional<Matrix> gram = std::nullopt)
      : factors_(std::move(factors)) {
    if (factors_.empty()) throw DomainError("group needs at least one factor");
    for (const auto& f : factors_) {
      if (f.rank < 1) throw DomainError("factor rank must be at least 1");
      offsets_.push_back(dim_);
      for (std::size_t i = 0; i < f.rank; ++i) block_.push_back(offsets_.size() - 1);
      dim_ += f.rank;
    }
    norm_ = Norm(gram ? *gram : Matrix::identity(dim_));
    validate_gram();
  }

  static GroupSpec gl(std::size_t n) { return GroupSpec({{Family::GL, n}}); }
  static GroupSpec sl(std::size_t n) { return GroupSpec({{Family::SL, n}}); }

  std::size_t dimension() const { return dim_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const Norm& norm() const { return norm_; }

  std::size_t block_of(std::size_t i) const { return block_.at(i); }
  std::size_t block_offset(std::size_t b) const { return offsets_.at(b); }
  bool same_block(std::size_t i, std::size_t j) const { return block_.at(i) == block_.at(j); }

  bool is_single_gl() const { return factors_.size() == 1 && factors_[0].family == Family::GL; }

  // SL factors force the block entries of d to sum to zero.
  bool in_lattice(const TorusCocharacter& d) const {
    if (d.size() != dim_) return false;
    for (std::size_t b = 0; b < factors_.size(); ++b) {
      if (factors_[b].family != Family::SL) continue;
      std::int64_t s = 0;
      for (std::size_t i = 0; i < factors_[b].rank; ++i) s += d[offsets_[b] + i];
      if (s != 0) return false;
    }
    return true;
  }

  bool is_block_diagonal(const Matrix& g) const {
    if (g.rows() != dim_ || g.cols() != dim_) return false;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        if (!same_block(i, j) && sgn(g(i, j)) != 0) return false;
    return true;
  }

  Matrix block(const Matrix& g, std::size_t b) const {
    const auto n = factors_.at(b).rank, o = offsets_.at(b);
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = g(o + i, o + j);
    return out;
  }

  bool contains(const Matrix& g) const {
    if (!is_block_diagonal(g)) return false;
    for (std::size_t b = 0; b < factors_.size(); ++b) {
      Rational det = determinant(block(g, b));
      if (sgn(det) == 0) return false;
      if (factors_[b].family == Family::SL && det != 1) return false;
    }
    return true;
  }

  void require_element(const Matrix& g, const char* what) const {
    if (!contains(g)) throw DomainError(std::string(what) + " is not an element of the group");
  }

  bool in_lie_algebra(const Matrix& x) const {
    if (!is_block_diagonal(x)) return false;
    for (std::size_t b = 0; b < factors_.size(); ++b)
      if (factors_[b].family == Family::SL && sgn(block(x, b).trace()) != 0) return false;
    return true;
  }

  // {e_i − e_j : i ≠ j in the same block}.
  std::vector<Character> roots() const {
    std::vector<Character> out;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        if (i == j || !same_block(i, j)) continue;
        std::vector<std::int64_t> w(dim_, 0);
        w[i] = 1;
        w[j] = -1;
        out.emplace_back(std::move(w));
      }
    return out;
  }

  bool respects_blocks(const Permutation& w) const {
    if (w.size() != dim_) return false;
    std::vector<bool> seen(dim_, false);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (w[i] >= dim_ || seen[w[i]] || !same_block(i, w[i])) return false;
      seen[w[i]] = true;
    }
    return true;
  }

  // All block-respecting permutations, identity first.
  std::vector<Permutation> weyl_group() const {
    std::vector<std::vector<Permutation>> per_block;
    for (std::size_t b = 0; b < factors_.size(); ++b) {
      std::vector<std::size_t> p(factors_[b].rank);
      std::iota(p.begin(), p.end(), 0);
      std::vector<Permutation> perms;
      do perms.push_back(p);
      while (std::next_permutation(p.begin(), p.end()));
      per_block.push_back(std::move(perms));
    }
    std::vector<Permutation> out{Permutation(dim_)};
    std::iota(out[0].begin(), out[0].end(), 0);
    for (std::size_t b = 0; b < factors_.size(); ++b) {
      std::vector<Permutation> next;
      for (const auto& w : out)
        for (const auto& p : per_block[b]) {
          Permutation v = w;
          for (std::size_t i = 0; i < p.size(); ++i) v[offsets_[b] + i] = offsets_[b] + p[i];
          next.push_back(std::move(v));
        }
      out = std::move(next);
    }
    return out;
  }

  // Matrix sending e_i to ±e_{w(i)}; on an SL block an odd permutation has one
  // column negated so the representative has determinant one.
  Matrix weyl_representative(const Permutation& w) const {
    if (!respects_blocks(w)) throw DomainError("permutation does not respect the factor blocks");
    Matrix p(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) p(w[i], i) = 1;
    for (std::size_t b = 0; b < factors_.size(); ++b) {
      if (factors_[b].family != Family::SL) continue;
      if (determinant(block(p, b)) == -1) {
        const auto o = offsets_[b];
        for (std::size_t i = 0; i < dim_; ++i) p(i, o) = -p(i, o);
      }
    }
    return p;
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.factors_ == b.factors_ && a.norm_.gram() == b.norm_.gram();
  }

 private:
  void validate_gram() const {
    const Matrix& q = norm_.gram();
    if (q.rows() != dim_ || q.cols() != dim_) throw DimensionError("gram matrix must be m x m");
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        if (!is_integer(q(i, j))) throw DomainError("gram matrix must have integer entries");
        if (q(i, j) != q(j, i)) throw DomainError("gram matrix must be symmetric");
      }
    // Sylvester: all leading principal minors positive.
    for (std::size_t k = 1; k <= dim_; ++k) {
      Matrix minor(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = q(i, j);
      if (sgn(determinant(minor)) <= 0) throw DomainError("gram matrix must be positive definite");
    }
    for (const auto& w : weyl_group()) {
      for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
          if (q(w[i], w[j]) != q(i, j)) throw DomainError("gram matrix is not Weyl-invariant");
    }
  }

  std::vector<Factor> factors_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> block_;
  std::size_t dim_ = 0;
  Norm norm_;
};

// The cocharacter g·λ_d·g⁻¹: a basepoint group element and a torus part.
class Cocharacter {
 public:
  Cocharacter(const GroupSpec& group, Matrix base, TorusCocharacter torus)
      : base_(std::move(base)), torus_(std::move(torus)) {
    if (torus_.size() != group.dimension()) throw DimensionError("cocharacter length does not match the group");
    if (!group.in_lattice(torus_)) throw DomainError("exponents violate the SL sum-zero constraint");
    group.require_element(base_, "cocharacter base");
    base_inv_ = inverse(base_);
  }

  static Cocharacter standard(const GroupSpec& group, TorusCocharacter torus) {
    return Cocharacter(group, Matrix::identity(group.dimension()), std::move(torus));
  }
  static Cocharacter standard(const GroupSpec& group, std::vector<std::int64_t> d) {
    return standard(group, TorusCocharacter(std::move(d)));
  }

  const Matrix& base() const { return base_; }
  const Matrix& base_inverse() const { return base_inv_; }
  const TorusCocharacter& torus() const { return torus_; }
  std::size_t dimension() const { return torus_.size(); }
  bool is_zero() const { return torus_.is_zero(); }

  // h·λ = (h g) λ_d (h g)⁻¹. The caller vouches that h lies in the group.
  Cocharacter conjugated(const Matrix& h, const Matrix& h_inv) const {
    Cocharacter c = *this;
    c.base_ = h * base_;
    c.base_inv_ = base_inv_ * h_inv;
    return c;
  }
  Cocharacter conjugated(const Matrix& h) const { return conjugated(h, inverse(h)); }

  Cocharacter with_torus(TorusCocharacter t) const {
    Cocharacter c = *this;
    if (t.size() != torus_.size()) throw DimensionError("cocharacter length mismatch");
    c.torus_ = std::move(t);
    return c;
  }

  // λ(a) as a matrix, for a nonzero rational a.
  Matrix element_at(const Rational& a) const {
    if (sgn(a) == 0) throw DomainError("cocharacters are evaluated at nonzero points");
    Vector diag(torus_.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
      Rational p = 1;
      const auto e = torus_[i];
      for (std::int64_t k = 0; k < (e < 0 ? -e : e); ++k) p *= a;
      diag[i] = e < 0 ? Rational(1 / p) : p;
    }
    return base_ * Matrix::diagonal(diag) * base_inv_;
  }

 private:
  Matrix base_;
  Matrix base_inv_;
  TorusCocharacter torus_;
};

inline Rational norm_sq(const GroupSpec& group, const TorusCocharacter& d) { return group.norm().norm_sq(d); }

// Depends only on the torus part.
inline Rational norm_sq(const GroupSpec& group, const Cocharacter& lambda) {
  return group.norm().norm_sq(lambda.torus());
}

// Result entry w(i) receives d_i, i.e. w·λ_d·w⁻¹ for the permutation matrix of w.
inline TorusCocharacter weyl_conjugate(const GroupSpec& group, const Permutation& w, const TorusCocharacter& d) {
  if (!group.respects_blocks(w)) throw DomainError("permutation crosses factor blocks");
  if (d.size() != group.dimension()) throw DimensionError("cocharacter length mismatch");
  std::vector<std::int64_t> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[w[i]] = d[i];
  return TorusCocharacter(std::move(out));
}

}  // namespace destab
