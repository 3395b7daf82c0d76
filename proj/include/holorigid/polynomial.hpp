#pragma once

#include <vector>

#include "holorigid/interval.hpp"
#include "holorigid/numeric.hpp"

namespace holorigid {

// Dense complex polynomial, coefficients in ascending degree order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
    trim();
  }

  const std::vector<Complex>& coeffs() const { return c_; }
  int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }

  Complex eval(Complex z) const {
    Complex acc(0.0, 0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  ComplexBox eval(const ComplexBox& z) const {
    ComplexBox acc = ComplexBox::point(Complex(0.0, 0.0));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial({Complex(0.0, 0.0)});
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
      d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  // k-th derivative value at z (direct, no factorial overflow for small k).
  Complex derivative_at(Complex z, int order = 1) const;

  Polynomial compose(const Polynomial& inner) const;

  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(Complex s) const;

 private:
  void trim() {
    while (c_.size() > 1 && std::abs(c_.back()) == 0.0) c_.pop_back();
    if (c_.empty()) c_.push_back(Complex(0.0, 0.0));
  }
  std::vector<Complex> c_;
};

}  // namespace holorigid
