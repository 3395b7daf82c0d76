#pragma once

#include <algorithm>
#include <cmath>

#include "holorigid/numeric.hpp"

namespace holorigid {

// Closed real interval. Outward rounding is not tracked (desk-scale
// tolerances sit far above one ulp); the arithmetic is still conservative in
// the set sense: the result interval contains every pointwise result.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double a, double b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  static Interval point(double x) { return {x, x}; }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  Interval operator+(const Interval& o) const { return make(lo + o.lo, hi + o.hi); }
  Interval operator-(const Interval& o) const { return make(lo - o.hi, hi - o.lo); }
  Interval operator*(const Interval& o) const {
    double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return make(std::min(std::min(a, b), std::min(c, d)),
                std::max(std::max(a, b), std::max(c, d)));
  }
  Interval operator+(double x) const { return make(lo + x, hi + x); }
  Interval operator*(double x) const {
    return x >= 0 ? make(lo * x, hi * x) : make(hi * x, lo * x);
  }

 private:
  static Interval make(double a, double b) {
    Interval r;
    r.lo = a;
    r.hi = b;
    return r;
  }
};

// Axis-aligned rectangle in the complex plane used as an interval enclosure.
struct ComplexBox {
  Interval re;
  Interval im;

  ComplexBox() = default;
  ComplexBox(Interval r, Interval i) : re(r), im(i) {}
  static ComplexBox point(Complex z) {
    return {Interval::point(z.real()), Interval::point(z.imag())};
  }

  Complex mid() const { return {re.mid(), im.mid()}; }

  ComplexBox operator+(const ComplexBox& o) const { return {re + o.re, im + o.im}; }
  ComplexBox operator*(const ComplexBox& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  ComplexBox operator+(Complex z) const { return {re + z.real(), im + z.imag()}; }
  ComplexBox operator*(Complex z) const {
    return {re * z.real() - im * z.imag(), re * z.imag() + im * z.real()};
  }

  // Range of |z| over the box.
  Interval abs() const {
    double xlo = std::max(0.0, std::max(re.lo, -re.hi));
    double ylo = std::max(0.0, std::max(im.lo, -im.hi));
    double xhi = std::max(std::fabs(re.lo), std::fabs(re.hi));
    double yhi = std::max(std::fabs(im.lo), std::fabs(im.hi));
    return {std::hypot(xlo, ylo), std::hypot(xhi, yhi)};
  }

  bool contains(Complex z) const {
    return re.contains(z.real()) && im.contains(z.imag());
  }

  ComplexBox inflated(double r) const {
    return {Interval(re.lo - r, re.hi + r), Interval(im.lo - r, im.hi + r)};
  }
};

}  // namespace holorigid
