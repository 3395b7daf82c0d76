#include "holorigid/polynomial.hpp"

namespace holorigid {

Complex Polynomial::derivative_at(Complex z, int order) const {
  Polynomial p = *this;
  for (int k = 0; k < order; ++k) p = p.derivative();
  return p.eval(z);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<Complex> out(c_.size() + o.c_.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Complex> out(std::max(c_.size(), o.c_.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(Complex s) const {
  std::vector<Complex> out = c_;
  for (auto& v : out) v *= s;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::compose(const Polynomial& inner) const {
  // Horner: result = (((c_n) * inner + c_{n-1}) * inner + ...)
  Polynomial acc({Complex(0.0, 0.0)});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * inner;
    acc = acc + Polynomial({*it});
  }
  return acc;
}

}  // namespace holorigid
