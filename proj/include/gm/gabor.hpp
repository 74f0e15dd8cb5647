#ifndef GM_GABOR_HPP
#define GM_GABOR_HPP

#include <functional>
#include <optional>

#include "gm/grid.hpp"
#include "gm/polynomial.hpp"
#include "gm/probe.hpp"

namespace gm {

struct PhaseSpacePoint {
  double b = 0.0;  // time
  double w = 0.0;  // angular frequency
};

/// Phase-space symbol f(b, w) with an optional structural declaration that
/// lets quantize() pick a closed form: a polynomial in b alone, a polynomial
/// in w alone, a separable product u(b)v(w), or a general evaluator.
struct PhaseSpaceFunction {
  enum class Kind { TimeOnly, FrequencyOnly, Separable, General };

  Kind kind = Kind::General;
  std::function<Complex(double, double)> eval;

  std::optional<Poly1> u_poly;  // time factor when polynomial
  std::optional<Poly1> v_poly;  // frequency factor when polynomial
  std::function<Complex(double)> u;  // time factor
  std::function<Complex(double)> v;  // frequency factor
  // Fourier transform of the frequency factor,
  // vhat(tau) = (2pi)^{-1/2} \int e^{-i tau w} v(w) dw, when known in
  // closed form; separable dense kernels fall back to quadrature otherwise.
  std::function<Complex(double)> vhat;

  static PhaseSpaceFunction constant(Complex c);
  static PhaseSpaceFunction time_poly(Poly1 p);
  static PhaseSpaceFunction freq_poly(Poly1 p);
  static PhaseSpaceFunction time_function(std::function<Complex(double)> u);
  static PhaseSpaceFunction freq_function(std::function<Complex(double)> v,
                                          std::function<Complex(double)> vhat = {});
  static PhaseSpaceFunction separable(std::function<Complex(double)> u,
                                      std::function<Complex(double)> v,
                                      std::function<Complex(double)> vhat = {});
  static PhaseSpaceFunction general(std::function<Complex(double, double)> f);
};

/// Operator produced by quantization. Multipliers act pointwise in time,
/// convolvers act as a spectral multiplier M(w) (their time kernel is the
/// band-limited inverse transform of M on the target grid), dense kernels
/// act as step-weighted matrices: (A s)_i = step * sum_j K_ij s_j.
struct OperatorKernel {
  enum class Kind { Multiplier, Convolver, Dense };

  Kind kind = Kind::Multiplier;
  std::function<Complex(double)> multiplier;  // m(t)
  std::function<Complex(double)> spectral;    // M(w)
  std::optional<Poly1> spectral_poly;         // M when polynomial
  Grid1D grid;                                // dense only
  Eigen::MatrixXcd matrix;                    // dense only

  static OperatorKernel make_multiplier(std::function<Complex(double)> m);
  static OperatorKernel make_convolver(std::function<Complex(double)> M,
                                       std::optional<Poly1> poly = {});
  static OperatorKernel make_dense(Grid1D grid, Eigen::MatrixXcd K);
};

struct GaborCoefficients {
  Grid1D bgrid{0, 1, 2}, wgrid{0, 1, 2};
  Eigen::MatrixXcd S;  // S(i, j) at (bgrid.point(i), wgrid.point(j))
  double plancherel_ratio = 0.0;  // ||S||^2 / (2 pi ||s||^2)
  bool coarse_grid_warning = false;  // |ratio - 1| > 5%
};

/// S(b, w) = <psi_{b,w} | s> with psi_{b,w}(t) = e^{iwt} psi(t - b).
GaborCoefficients gabor_transform(const SampledFunction& s, const Probe& psi,
                                  const Grid1D& bgrid, const Grid1D& wgrid);

/// s(t) = (2pi)^{-1} \iint S(b, w) psi_{b,w}(t) db dw on tgrid.
SampledFunction gabor_reconstruct(const Eigen::MatrixXcd& S, const Probe& psi,
                                  const Grid1D& bgrid, const Grid1D& wgrid,
                                  const Grid1D& tgrid);

/// A_f = \iint (db dw / 2pi) f(b, w) |psi_{b,w}><psi_{b,w}|. Dispatches on
/// the declared symbol kind; separable and general symbols produce a dense
/// kernel on the given grid (default [-8r, 8r] with 257 points, r the probe
/// support scale). General symbols must be integrable in w.
OperatorKernel quantize(const PhaseSpaceFunction& f, const Probe& psi);
OperatorKernel quantize(const PhaseSpaceFunction& f, const Probe& psi,
                        const Grid1D& grid);

SampledFunction apply(const OperatorKernel& k, const SampledFunction& s);

/// Matrix of the kernel on a grid, normalized so that apply(s) = step*K*s.
Eigen::MatrixXcd densify(const OperatorKernel& k, const Grid1D& grid);

/// R_psipsi(t) = \int psi(t') conj(psi(t' - t)) dt'.
std::function<Complex(double)> autocorrelation(const Probe& psi);

/// Coherent-state overlap at phase-space points p = (b,w), q = (b',w'),
/// normalized so overlap(p,p) = 1; for the Gaussian probe the phase is
/// e^{-i(w'-w)(b+b')/2}.
Complex overlap(const Probe& psi, const PhaseSpacePoint& p,
                const PhaseSpacePoint& q);

/// Semi-classical portrait: (2pi)^{-1} \iint f(q) |<psi_p|psi_q>|^2 dq.
Complex portrait(const PhaseSpaceFunction& f, const Probe& psi,
                 const PhaseSpacePoint& p);

}  // namespace gm

#endif
