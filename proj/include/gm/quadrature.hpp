#ifndef GM_QUADRATURE_HPP
#define GM_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace gm {

struct QuadResult {
  std::complex<double> value{};
  double error = 0.0;
};

/// Thrown when a quadrature or extrapolation fails to reach the requested
/// tolerance. Carries the best estimate and the error actually achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadResult best_)
      : std::runtime_error(what), best(best_) {}
  QuadResult best;
};

/// Adaptive Gauss-Legendre 15 with panel bisection, max depth 40.
QuadResult integrate(const std::function<std::complex<double>(double)>& f,
                     double a, double b, double tol);

double integrate_real(const std::function<double(double)>& f, double a,
                      double b, double tol);

/// Cauchy principal value of \int_a^b f over a simple pole inside (a,b):
/// symmetric excision with a geometric epsilon ladder and Richardson
/// extrapolation to epsilon -> 0.
double principal_value(const std::function<double(double)>& f, double pole,
                       double a, double b, double tol);

/// H[u](t) = (1/pi) p.v. \int u(tau)/(t - tau) dtau over the real line.
/// The tail is truncated adaptively; u must be absolutely integrable.
double hilbert_transform(const std::function<double(double)>& u, double t,
                         double tol, double initial_halfwidth = 16.0);

}  // namespace gm

#endif
