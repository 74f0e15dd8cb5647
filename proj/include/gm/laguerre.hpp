#ifndef GM_LAGUERRE_HPP
#define GM_LAGUERRE_HPP

#include <stdexcept>

namespace gm {

/// Associated Laguerre polynomial L_n^{(alpha)}(x) by the three-term
/// recurrence; valid for integer alpha >= -n (the recurrence coefficients
/// are polynomial in alpha, so negative integer orders are fine).
template <typename Real>
Real laguerre(int n, int alpha, Real x) {
  if (n < 0) throw std::invalid_argument("laguerre: n must be >= 0");
  if (alpha < -n) throw std::invalid_argument("laguerre: need alpha >= -n");
  Real p0 = Real(1);
  if (n == 0) return p0;
  Real p1 = Real(1 + alpha) - x;
  for (int k = 1; k < n; ++k) {
    Real p2 = ((Real(2 * k + 1 + alpha) - x) * p1 - Real(k + alpha) * p0) /
              Real(k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace gm

#endif
