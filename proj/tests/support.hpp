// Small builders shared by the unit tests.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "destab/destab.hpp"

namespace testing_support {

using namespace destab;

inline Matrix mat(std::initializer_list<std::initializer_list<Rational>> rows) {
  std::vector<Vector> rs;
  for (const auto& r : rows) rs.emplace_back(r);
  return Matrix::from_rows(rs, rs.front().size());
}

inline Matrix e(std::size_t m, std::size_t i, std::size_t j) { return Matrix::unit(m, i, j); }

inline Matrix diag(std::initializer_list<Rational> d) { return Matrix::diagonal(std::vector<Rational>(d)); }

inline Point tuple(std::vector<Matrix> ms) { return point_from_matrices(ms); }

inline Cocharacter std_lambda(const GroupSpec& g, std::vector<std::int64_t> d) { return Cocharacter::standard(g, std::move(d)); }

struct Rand {
  std::mt19937_64 gen;
  explicit Rand(std::uint64_t seed) : gen(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen); }

  Rational rational() {
    const auto n = integer(-4, 4);
    return q(static_cast<long>(n), static_cast<long>(integer(1, 3)));
  }

  Matrix matrix(std::size_t m) {
    Matrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = rational();
    return a;
  }

  // Unitriangular times permutation: always invertible with det ±1.
  Matrix invertible(std::size_t m) {
    Matrix l = Matrix::identity(m), u = Matrix::identity(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        l(i, j) = rational();
        u(j, i) = rational();
      }
    return l * u;
  }

  Point point(std::size_t n) {
    Vector v(n);
    for (auto& x : v) x = coin() ? rational() : Rational(0);
    return Point(v);
  }

  bool coin() { return integer(0, 1) == 1; }

  std::vector<std::int64_t> exponents(std::size_t m, std::int64_t box) {
    std::vector<std::int64_t> d(m);
    for (auto& x : d) x = integer(-box, box);
    return d;
  }
};

}  // namespace testing_support
