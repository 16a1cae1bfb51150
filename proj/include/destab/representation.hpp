#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "destab/errors.hpp"
#include "destab/group.hpp"
#include "destab/matrix.hpp"
#include "destab/polynomial.hpp"

namespace destab {

// Coordinates of a vector in a representation, indexed by its basis.
struct Point {
  Vector coords;

  Point() = default;
  explicit Point(Vector c) : coords(std::move(c)) {}
  static Point zero(std::size_t n) { return Point(Vector(n)); }

  std::size_t size() const { return coords.size(); }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rational& x) { return sgn(x) == 0; });
  }

  Point& operator+=(const Point& o) {
    if (o.size() != size()) throw DimensionError("point length mismatch");
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    if (o.size() != size()) throw DimensionError("point length mismatch");
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
    return *this;
  }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(const Rational& s, Point a) {
    for (auto& x : a.coords) x *= s;
    return a;
  }
  friend bool operator==(const Point&, const Point&) = default;
};

// A weight-diagonalized linear representation of a split classical group
// acting on k^m. Supported kinds form a closed set; a new kind needs basis
// weights for the diagonal torus and an exact action.
class Representation {
 public:
  enum class Kind { ConjugationTuples, SymPower, Adjoint, DirectSum };

  // n-tuples of m×m matrices under simultaneous conjugation.
  static Representation conjugation_tuples(std::size_t m, std::size_t count) {
    if (m == 0 || count == 0) throw DomainError("conjugation tuples need m >= 1 and count >= 1");
    Representation r(Kind::ConjugationTuples, m);
    r.count_ = count;
    for (std::size_t k = 0; k < count; ++k)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          std::vector<std::int64_t> w(m, 0);
          w[i] += 1;
          w[j] -= 1;
          r.weights_.emplace_back(std::move(w));
          r.labels_.push_back("x" + std::to_string(k) + "_" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    return r;
  }

  // Sym^d of the natural 2-dimensional module, basis x^(d-i) y^i.
  static Representation sym_power(std::size_t degree) {
    Representation r(Kind::SymPower, 2);
    r.degree_ = degree;
    for (std::size_t i = 0; i <= degree; ++i) {
      r.weights_.emplace_back(
          std::vector<std::int64_t>{static_cast<std::int64_t>(degree - i), static_cast<std::int64_t>(i)});
      r.labels_.push_back("x^" + std::to_string(degree - i) + "y^" + std::to_string(i));
    }
    return r;
  }

  // The Lie algebra gl_m (or a subalgebra of it) under the adjoint action.
  static Representation adjoint(std::size_t m) {
    Representation r = conjugation_tuples(m, 1);
    r.kind_ = Kind::Adjoint;
    return r;
  }

  static Representation direct_sum(std::vector<Representation> summands) {
    if (summands.empty()) throw DomainError("direct sum needs at least one summand");
    Representation r(Kind::DirectSum, summands.front().m_);
    for (const auto& s : summands) {
      if (s.m_ != r.m_) throw DimensionError("direct sum summands act through different groups");
      r.offsets_.push_back(r.weights_.size());
      r.weights_.insert(r.weights_.end(), s.weights_.begin(), s.weights_.end());
      for (const auto& l : s.labels_) r.labels_.push_back("s" + std::to_string(r.offsets_.size() - 1) + ":" + l);
    }
    r.summands_ = std::make_shared<const std::vector<Representation>>(std::move(summands));
    return r;
  }

  Kind kind() const { return kind_; }
  std::size_t group_dim() const { return m_; }
  std::size_t dim() const { return weights_.size(); }
  std::size_t count() const { return count_; }
  std::size_t degree() const { return degree_; }
  const std::vector<Representation>& summands() const {
    static const std::vector<Representation> none;
    return summands_ ? *summands_ : none;
  }

  bool is_conjugation() const { return kind_ == Kind::ConjugationTuples || kind_ == Kind::Adjoint; }

  const Character& weight(std::size_t b) const { return weights_.at(b); }
  const std::vector<Character>& weights() const { return weights_; }
  const std::string& label(std::size_t b) const { return labels_.at(b); }

  void check_compatible(const GroupSpec& group) const {
    if (group.dimension() != m_)
      throw DimensionError("representation acts on k^" + std::to_string(m_) + " but the group has dimension " +
                           std::to_string(group.dimension()));
  }

  void check_point(const Point& v) const {
    if (v.size() != dim())
      throw DimensionError("point has " + std::to_string(v.size()) + " coordinates, representation has " +
                           std::to_string(dim()));
  }

  // g·v, given g and g⁻¹.
  Point act(const Matrix& g, const Matrix& g_inv, const Point& v) const {
    check_point(v);
    switch (kind_) {
      case Kind::ConjugationTuples:
      case Kind::Adjoint: {
        Point out = Point::zero(dim());
        const std::size_t block = m_ * m_;
        for (std::size_t k = 0; k * block < dim(); ++k) {
          Matrix h = unflatten(std::span(v.coords).subspan(k * block, block), m_, m_);
          Matrix c = g * h * g_inv;
          std::copy(c.data().begin(), c.data().end(), out.coords.begin() + k * block);
        }
        return out;
      }
      case Kind::SymPower:
        return Point(sym_power_matrix(g) * v.coords);
      case Kind::DirectSum: {
        Point out = Point::zero(dim());
        const auto& parts = *summands_;
        for (std::size_t s = 0; s < parts.size(); ++s) {
          Point slice(Vector(v.coords.begin() + offsets_[s], v.coords.begin() + offsets_[s] + parts[s].dim()));
          Point img = parts[s].act(g, g_inv, slice);
          std::copy(img.coords.begin(), img.coords.end(), out.coords.begin() + offsets_[s]);
        }
        return out;
      }
    }
    throw DomainError("unknown representation kind");
  }

  Point act(const Matrix& g, const Point& v) const { return act(g, inverse(g), v); }

  // Matrix of v ↦ g·v in the weight basis.
  Matrix action_matrix(const Matrix& g, const Matrix& g_inv) const {
    if (kind_ == Kind::SymPower) return sym_power_matrix(g);
    Matrix a(dim(), dim());
    for (std::size_t b = 0; b < dim(); ++b) {
      Point e = Point::zero(dim());
      e.coords[b] = 1;
      Point img = act(g, g_inv, e);
      for (std::size_t i = 0; i < dim(); ++i) a(i, b) = img.coords[i];
    }
    return a;
  }
  Matrix action_matrix(const Matrix& g) const { return action_matrix(g, inverse(g)); }

  Character monomial_weight(const Monomial& mono) const {
    Character w = Character::zero(m_);
    for (const auto& [v, e] : mono.factors()) {
      if (v >= dim()) throw DimensionError("monomial variable out of range");
      w += static_cast<std::int64_t>(e) * weight(v);
    }
    return w;
  }

 private:
  Representation(Kind kind, std::size_t m) : kind_(kind), m_(m) {}

  // (g·x, g·y) = (g11 x + g21 y, g12 x + g22 y); column i is the expansion of
  // (g·x)^(d-i) (g·y)^i in the basis x^(d-j) y^j.
  Matrix sym_power_matrix(const Matrix& g) const {
    if (g.rows() != 2 || g.cols() != 2) throw DimensionError("Sym^d acts through 2x2 matrices");
    const std::size_t d = degree_;
    Matrix a(d + 1, d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      // Coefficients c[j] of x^(deg-j) y^j for the running product.
      Vector c{Rational(1)};
      auto multiply = [&](const Rational& alpha, const Rational& beta) {
        Vector n(c.size() + 1);
        for (std::size_t j = 0; j < c.size(); ++j) {
          n[j] += alpha * c[j];
          n[j + 1] += beta * c[j];
        }
        c = std::move(n);
      };
      for (std::size_t k = 0; k < d - i; ++k) multiply(g(0, 0), g(1, 0));
      for (std::size_t k = 0; k < i; ++k) multiply(g(0, 1), g(1, 1));
      for (std::size_t j = 0; j <= d; ++j) a(j, i) = c[j];
    }
    return a;
  }

  Kind kind_;
  std::size_t m_;
  std::size_t count_ = 0;
  std::size_t degree_ = 0;
  std::vector<Character> weights_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> offsets_;
  std::shared_ptr<const std::vector<Representation>> summands_;
};

inline Point point_from_matrices(std::span<const Matrix> mats) {
  Point p;
  for (const auto& m : mats) p.coords.insert(p.coords.end(), m.data().begin(), m.data().end());
  return p;
}

inline std::vector<Matrix> matrices_from_point(const Representation& rep, const Point& v) {
  if (!rep.is_conjugation()) throw UnsupportedError("point is not a tuple of matrices");
  rep.check_point(v);
  const auto m = rep.group_dim();
  std::vector<Matrix> out;
  for (std::size_t k = 0; k * m * m < v.size(); ++k)
    out.push_back(unflatten(std::span(v.coords).subspan(k * m * m, m * m), m, m));
  return out;
}

// Coordinates of v in the torus frame of λ: base⁻¹·v.
inline Point to_frame(const Representation& rep, const Cocharacter& lambda, const Point& v) {
  return rep.act(lambda.base_inverse(), lambda.base(), v);
}
inline Point from_frame(const Representation& rep, const Cocharacter& lambda, const Point& w) {
  return rep.act(lambda.base(), lambda.base_inverse(), w);
}

// V_{λ,n}-components of a point. Only nonzero components are stored.
struct Grading {
  std::map<std::int64_t, Point> components;

  Point reconstruct(std::size_t dim) const {
    Point s = Point::zero(dim);
    for (const auto& [n, c] : components) s += c;
    return s;
  }
  bool concentrated_at_zero() const {
    return components.empty() || (components.size() == 1 && components.begin()->first == 0);
  }
  std::int64_t min_degree() const { return components.empty() ? 0 : components.begin()->first; }
};

// supp_T(g⁻¹·v) for the frame g: weights carrying a nonzero coordinate.
inline std::set<Character> support(const Representation& rep, const Point& v, const Matrix& frame) {
  rep.check_point(v);
  Point w = rep.act(inverse(frame), frame, v);
  std::set<Character> out;
  for (std::size_t b = 0; b < rep.dim(); ++b)
    if (sgn(w.coords[b]) != 0) out.insert(rep.weight(b));
  return out;
}

inline std::set<Character> support(const Representation& rep, const Point& v) {
  return support(rep, v, Matrix::identity(rep.group_dim()));
}

inline Grading grade(const Representation& rep, const Point& v, const Cocharacter& lambda) {
  rep.check_point(v);
  if (lambda.dimension() != rep.group_dim()) throw DimensionError("cocharacter does not act on this representation");
  Point w = to_frame(rep, lambda, v);
  std::map<std::int64_t, Point> in_frame;
  for (std::size_t b = 0; b < rep.dim(); ++b) {
    if (sgn(w.coords[b]) == 0) continue;
    auto n = pairing(lambda.torus(), rep.weight(b));
    auto [it, _] = in_frame.try_emplace(n, Point::zero(rep.dim()));
    it->second.coords[b] = w.coords[b];
  }
  Grading g;
  for (auto& [n, c] : in_frame) g.components.emplace(n, from_frame(rep, lambda, c));
  return g;
}

// lim_{a→0} λ(a)·v: exists iff no component of negative degree is nonzero,
// and then equals the degree-zero component.
inline std::optional<Point> limit(const Representation& rep, const Point& v, const Cocharacter& lambda) {
  rep.check_point(v);
  Point w = to_frame(rep, lambda, v);
  Point w0 = Point::zero(rep.dim());
  for (std::size_t b = 0; b < rep.dim(); ++b) {
    if (sgn(w.coords[b]) == 0) continue;
    auto n = pairing(lambda.torus(), rep.weight(b));
    if (n < 0) return std::nullopt;
    if (n == 0) w0.coords[b] = w.coords[b];
  }
  return from_frame(rep, lambda, w0);
}

// λ fixes v iff v lies in V_{λ,0}.
inline bool is_fixed(const Representation& rep, const Point& v, const Cocharacter& lambda) {
  return grade(rep, v, lambda).concentrated_at_zero();
}

using IsotypicComponents = std::vector<std::pair<Character, Polynomial>>;

// f∘g split by torus weight: f(g·w) = Σ_χ F_χ(w), each F_χ transforming by χ.
inline IsotypicComponents isotypic_decompose(const Representation& rep, const Polynomial& f, const Matrix& frame,
                                             const Matrix& frame_inv) {
  Polynomial composed = f.compose_linear(rep.action_matrix(frame, frame_inv));
  std::map<Character, Polynomial::Terms> parts;
  for (const auto& [mono, c] : composed.terms()) parts[rep.monomial_weight(mono)].emplace(mono, c);
  IsotypicComponents out;
  for (auto& [chi, terms] : parts) out.emplace_back(chi, Polynomial(std::move(terms)));
  return out;
}

inline IsotypicComponents isotypic_decompose(const Representation& rep, const Polynomial& f) {
  const auto id = Matrix::identity(rep.group_dim());
  return isotypic_decompose(rep, f, id, id);
}

}  // namespace destab
