#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "destab/errors.hpp"
#include "destab/matrix.hpp"
#include "destab/rational.hpp"

namespace destab {

// Product of coordinate powers; factors are (variable, exponent) sorted by
// variable with positive exponents.
class Monomial {
 public:
  using Factor = std::pair<std::uint32_t, std::uint32_t>;

  Monomial() = default;
  explicit Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) { normalize(); }

  static Monomial variable(std::uint32_t v) { return Monomial({{v, 1}}); }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_constant() const { return factors_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    std::vector<Factor> f(a.factors_);
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return Monomial(std::move(f));
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  void normalize() {
    std::sort(factors_.begin(), factors_.end());
    std::vector<Factor> merged;
    for (const auto& f : factors_) {
      if (f.second == 0) continue;
      if (!merged.empty() && merged.back().first == f.first)
        merged.back().second += f.second;
      else
        merged.push_back(f);
    }
    factors_ = std::move(merged);
  }

  std::vector<Factor> factors_;
};

// Polynomial in the coordinates of a representation, stored as an exact
// monomial -> coefficient map without zero coefficients.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(Terms terms) : terms_(std::move(terms)) { prune(); }

  static Polynomial constant(const Rational& c) {
    Polynomial p;
    if (sgn(c) != 0) p.terms_[Monomial()] = c;
    return p;
  }
  static Polynomial variable(std::uint32_t v) {
    Polynomial p;
    p.terms_[Monomial::variable(v)] = 1;
    return p;
  }
  static Polynomial monomial(const Monomial& m, const Rational& c) {
    Polynomial p;
    if (sgn(c) != 0) p.terms_[m] = c;
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  std::uint32_t max_variable() const {
    std::uint32_t v = 0;
    for (const auto& [m, c] : terms_)
      for (const auto& f : m.factors()) v = std::max(v, f.first + 1);
    return v;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) p.add_term(ma * mb, ca * cb);
    return p;
  }
  friend Polynomial operator*(const Rational& s, const Polynomial& a) {
    Polynomial p;
    if (sgn(s) == 0) return p;
    for (const auto& [m, c] : a.terms_) p.terms_[m] = s * c;
    return p;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Rational evaluate(std::span<const Rational> x) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (const auto& [v, e] : m.factors()) {
        if (v >= x.size()) throw DimensionError("polynomial variable out of range");
        for (std::uint32_t k = 0; k < e; ++k) t *= x[v];
        if (sgn(t) == 0) break;
      }
      total += t;
    }
    return total;
  }

  // f(A w) as a polynomial in w: every variable x_i becomes Σ_j A(i,j) w_j.
  Polynomial compose_linear(const Matrix& a) const {
    std::map<std::uint32_t, Polynomial> forms;
    auto form = [&](std::uint32_t v) -> const Polynomial& {
      auto it = forms.find(v);
      if (it != forms.end()) return it->second;
      if (v >= a.rows()) throw DimensionError("polynomial variable out of range for substitution");
      Polynomial f;
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (sgn(a(v, j)) != 0) f.terms_[Monomial::variable(static_cast<std::uint32_t>(j))] = a(v, j);
      return forms.emplace(v, std::move(f)).first->second;
    };
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      Polynomial t = constant(c);
      for (const auto& [v, e] : m.factors())
        for (std::uint32_t k = 0; k < e; ++k) t = t * form(v);
      out += t;
    }
    return out;
  }

 private:
  void add_term(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = sgn(it->second) == 0 ? terms_.erase(it) : std::next(it);
  }

  Terms terms_;
};

}  // namespace destab
