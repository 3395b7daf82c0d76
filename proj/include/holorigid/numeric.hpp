#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

namespace holorigid {

using Complex = std::complex<double>;

// Locale-independent float formatting with 17 significant digits ('.' decimal
// point is guaranteed because snprintf with the C locale is used; the CLI
// never calls setlocale).
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_complex(Complex z) {
  return fmt_double(z.real()) + (z.imag() < 0 ? "-" : "+") +
         fmt_double(std::abs(z.imag())) + "i";
}

// Lexicographic order by (re, im); the canonical order used whenever point
// sets must be listed deterministically.
inline bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Lexicographic order with a tie band: coordinates closer than eps are
// treated as equal, so canonical representatives stay stable under solver
// noise (points of one cycle are recomputed from several seeds and may
// differ in the last few bits).
inline bool lex_less_tol(Complex a, Complex b, double eps) {
  if (std::abs(a.real() - b.real()) > eps) return a.real() < b.real();
  if (std::abs(a.imag() - b.imag()) > eps) return a.imag() < b.imag();
  return false;
}

// Rounds a point onto a tolerance grid; used as a deduplication key.
inline std::pair<long long, long long> grid_key(Complex z, double tol) {
  return {static_cast<long long>(std::llround(z.real() / tol)),
          static_cast<long long>(std::llround(z.imag() / tol))};
}

// 64-bit FNV-1a; used for config fingerprints embedded in output files.
inline std::string fnv1a_hex(const std::string& data) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

}  // namespace holorigid
