#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "destab/errors.hpp"

namespace destab {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "p/q", "-p/q". The Unicode minus sign (U+2212) is accepted in
// place of '-'.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2212 is E2 88 92 in UTF-8.
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0x92) {
      s.push_back('-');
      i += 2;
      continue;
    }
    if (text[i] == ' ' || text[i] == '+') continue;
    s.push_back(text[i]);
  }
  if (s.empty()) throw SchemaError("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw SchemaError("malformed rational literal '" + std::string(text) + "'");
  if (q.get_den() == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::string format_rational(const Rational& q) { return q.get_str(10); }

// Shorthand for literals in code and tests.
inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::int64_t to_int64(const Rational& q) {
  if (!is_integer(q) || !q.get_num().fits_slong_p()) throw DomainError("rational is not a machine integer");
  return q.get_num().get_si();
}

// Smallest positive integer multiple of the direction `v` with integer
// entries whose gcd is one. The zero vector maps to zeros.
inline std::vector<std::int64_t> primitive_integer_direction(std::span<const Rational> v) {
  Integer lcm = 1;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<Integer> ints;
  ints.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = x.get_num() * (lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    ints.push_back(n);
  }
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (auto& n : ints) {
    if (g != 0) n /= g;
    if (!n.fits_slong_p()) throw DomainError("primitive direction does not fit a machine integer");
    out.push_back(n.get_si());
  }
  return out;
}

}  // namespace destab
