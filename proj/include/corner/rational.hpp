#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corner {

using Q = boost::multiprecision::mpq_rational;
using Z = boost::multiprecision::mpz_int;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;  // row-major
using ZVec = std::vector<Z>;
using ZMat = std::vector<ZVec>;

// Malformed input: bad JSON shape, bad rational literal, wrong field types.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input violating a mathematical precondition.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int sgn(const Q& q) { return q.sign(); }
inline int sgn(const Z& z) { return z.sign(); }

inline bool is_integer(const Q& q) {
  return boost::multiprecision::denominator(q) == 1;
}

inline Z floor_z(const Q& q) {
  Z n = boost::multiprecision::numerator(q);
  Z d = boost::multiprecision::denominator(q);
  Z r = n / d;  // truncates toward zero
  if (n.sign() < 0 && r * d != n) r -= 1;
  return r;
}

inline Z ceil_z(const Q& q) { return -floor_z(-q); }

inline Z to_z(const Q& q) {
  if (!is_integer(q)) throw PreconditionError("expected an integer, got " + q.str());
  return boost::multiprecision::numerator(q);
}

// Canonical literal: "p" for integers, "p/q" otherwise, always in lowest terms.
inline std::string to_string(const Q& q) { return q.str(); }

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Accepts "p", "-p", "+p", "p/q" with q a positive decimal literal.
inline Q parse_rational(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw SchemaError("malformed rational literal \"" + std::string(text) + "\"");
  Z n{std::string(num)};
  Z d{std::string(den)};
  if (d == 0) throw SchemaError("zero denominator in rational literal \"" + std::string(text) + "\"");
  Q q(n, d);
  return neg ? Q(-q) : q;
}

inline Vec zero_vec(std::size_t n) { return Vec(n, Q(0)); }

inline Mat zero_mat(std::size_t r, std::size_t c) { return Mat(r, Vec(c, Q(0))); }

inline Mat identity_mat(std::size_t n) {
  Mat m = zero_mat(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline std::string to_string(const Vec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

}  // namespace corner
