#ifndef GM_WEYLHEISENBERG_HPP
#define GM_WEYLHEISENBERG_HPP

#include <functional>
#include <optional>
#include <vector>

#include "gm/gabor.hpp"
#include "gm/grid.hpp"
#include "gm/probe.hpp"

namespace gm {

/// Truncated Fock basis |0> ... |N-1> of the harmonic operator, units
/// w0 = t0 = 1.
struct FockTruncation {
  int N = 64;
  explicit FockTruncation(int n) : N(n) {
    if (n < 2) throw std::invalid_argument("FockTruncation: need N >= 2");
  }
};

/// Hermitian, unit-trace, positive matrix on the truncated Fock basis.
struct DensityOperator {
  int dim = 0;
  Eigen::MatrixXcd matrix;
  bool truncation_warning = false;  // basis too small for the requested state

  /// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity
  /// (eigenvalues >= -1e-10).
  static DensityOperator from_matrix(Eigen::MatrixXcd m, bool warning = false);
};

/// Filter function Pi(b, w) on the time-frequency plane (the Weyl transform
/// of the quantization's base operator). Pi(0,0) = 1.
struct Apodization {
  enum class Provenance { FromProbe, Gaussian, ConstantOne, Custom };

  Provenance provenance = Provenance::Custom;
  double sigma = 0.0, tau = 0.0;  // gaussian: e^{-b^2/2sigma^2 - w^2/2tau^2}
  std::optional<Probe> probe;     // from-probe
  std::function<Complex(double, double)> eval;

  Complex operator()(double b, double w) const { return eval(b, w); }

  static Apodization gaussian(double sigma, double tau);
  static Apodization constant_one();
  static Apodization custom(std::function<Complex(double, double)> f);
};

/// Matrix of the displacement operator D(b, w) on the truncated Fock basis,
/// with z = (b + iw)/sqrt(2): D_mn = sqrt(n!/m!) e^{-|z|^2/2} z^{m-n}
/// L_n^{(m-n)}(|z|^2) for m >= n, and the symmetric completion below the
/// diagonal. Factorial ratios go through log-gamma.
Eigen::MatrixXcd displacement_matrix(double b, double w,
                                     const FockTruncation& trunc);

/// f_s[F](b, w) = (2pi)^{-1} \iint e^{-i(b w' - b' w)} F(b', w') db' dw',
/// an involution. The plane is truncated at [-radius, radius]^2.
Complex symplectic_fourier(const std::function<Complex(double, double)>& F,
                           const PhaseSpacePoint& p, double radius = 12.0,
                           double tol = 1e-8);

/// Pi_psi(b, w) = <psi | D(-b, -w) psi>.
Apodization apodization_from_probe(const Probe& psi);

/// W_psi(b, w) = (2pi)^{-1} \int e^{-iwt} conj(psi(b + t/2)) psi(b - t/2) dt;
/// satisfies f_s[Pi_psi](b, w) = 2pi W_psi(-b, -w).
double wigner_of_probe(const Probe& psi, const PhaseSpacePoint& p);

/// Thermal-like diagonal state (1 - e^{-1/Theta}) e^{-n/Theta}, renormalized
/// to unit trace on the truncation. Sets truncation_warning if the dropped
/// tail e^{-N/Theta} exceeds 1e-12.
DensityOperator boltzmann_planck(double theta, const FockTruncation& trunc);

/// L_n(w) = \int_0^inf e^{-u/2} L_n(u) w(u) du with adaptive tail extension.
double laguerre_transform(const std::function<double(double)>& w, int n);

/// Hermitian unit-trace candidate built from an apodization; positivity is
/// reported, not assumed.
struct Q0Result {
  Eigen::MatrixXcd matrix;  // Hermitized
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  bool positive = false;  // min_eigenvalue >= -1e-8
  double hermiticity_defect = 0.0;
};

/// (Q0)_mn = (2pi)^{-1} \iint D_mn(b, w) Pi(b, w) db dw over the square of
/// the given radius (default 0.6 sqrt(2N), the displacement accuracy region).
Q0Result q0_from_apodization(const Apodization& pi, const FockTruncation& trunc,
                             double radius = -1.0);

/// Nonnegative weight ell(t) supported in (1/2, inf), given as point masses
/// plus an optional density on [density_lo, density_hi]. Its Laplace
/// transform w(u) = \int e^{-ut} ell(t) dt yields the diagonal state with
/// entries \int ell(t) (1 - q) q^n dt, q = (t - 1/2)/(t + 1/2), i.e. a convex
/// mixture of thermal states; always positive.
struct LaplaceWeight {
  struct Atom {
    double t = 1.0;
    double mass = 1.0;
  };
  std::vector<Atom> atoms;
  std::function<double(double)> density;
  double density_lo = 0.5, density_hi = 0.5;
};

DensityOperator q0_from_laplace_weight(const LaplaceWeight& ell,
                                       const FockTruncation& trunc);

/// Quantization with an arbitrary apodization, kernel
/// A_f(t,t') = (2pi)^{-1} \int fhat_w(b, t'-t) Pihat_w(t-t', b-(t+t')/2) db.
/// With a from-probe apodization this reduces to the probe quantization.
OperatorKernel quantize_general(const PhaseSpaceFunction& f,
                                const Apodization& pi);
OperatorKernel quantize_general(const PhaseSpaceFunction& f,
                                const Apodization& pi, const Grid1D& grid);

}  // namespace gm

#endif
