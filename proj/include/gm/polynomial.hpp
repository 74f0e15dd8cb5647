#ifndef GM_POLYNOMIAL_HPP
#define GM_POLYNOMIAL_HPP

#include <cmath>
#include <vector>

namespace gm {

/// Dense univariate polynomial, coeffs[k] * x^k.
struct Poly1 {
  std::vector<double> coeffs;

  Poly1() = default;
  explicit Poly1(std::vector<double> c) : coeffs(std::move(c)) {}

  static Poly1 monomial(int degree, double c = 1.0) {
    std::vector<double> v(degree + 1, 0.0);
    v[degree] = c;
    return Poly1(std::move(v));
  }

  int degree() const { return coeffs.empty() ? 0 : int(coeffs.size()) - 1; }

  double operator()(double x) const {
    double acc = 0.0;
    for (int k = degree(); k >= 0; --k) acc = acc * x + coeffs[k];
    return acc;
  }

  Poly1 derivative2() const {
    if (coeffs.size() < 3) return Poly1{};
    std::vector<double> d(coeffs.size() - 2);
    for (size_t k = 2; k < coeffs.size(); ++k)
      d[k - 2] = coeffs[k] * double(k) * double(k - 1);
    return Poly1(std::move(d));
  }
};

/// Convolution of a polynomial with the centred Gaussian density of the
/// given variance: (p * N(0,v))(x) = sum_k p^(2k)(x) v^k / (2^k k!).
inline Poly1 gauss_smooth(const Poly1& p, double variance) {
  Poly1 out = p;
  Poly1 der = p;
  double factor = 1.0;
  for (int k = 1; 2 * k <= p.degree(); ++k) {
    der = der.derivative2();
    factor *= variance / (2.0 * k);
    for (size_t j = 0; j < der.coeffs.size(); ++j)
      out.coeffs[j] += factor * der.coeffs[j];
  }
  return out;
}

}  // namespace gm

#endif
