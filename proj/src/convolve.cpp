#include "gm/convolve.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace gm {

SampledFunction convolve(const SampledFunction& f, const SampledFunction& g) {
  const double step = f.grid.step;
  if (std::abs(g.grid.step - step) > 1e-12 * step)
    throw std::invalid_argument("convolve: grids must share the same step");

  const int nf = f.grid.count, ng = g.grid.count;
  const int nout = nf + ng - 1;
  int nfft = 1;
  while (nfft < 2 * (nf + ng)) nfft <<= 1;

  std::vector<Complex> fa(nfft, Complex(0)), gb(nfft, Complex(0));
  for (int i = 0; i < nf; ++i) fa[i] = f.values[i];
  for (int i = 0; i < ng; ++i) gb[i] = g.values[i];

  Eigen::FFT<double> fft;
  std::vector<Complex> Fa, Gb;
  fft.fwd(Fa, fa);
  fft.fwd(Gb, gb);
  for (int i = 0; i < nfft; ++i) Fa[i] *= Gb[i];
  std::vector<Complex> out;
  fft.inv(out, Fa);

  Eigen::VectorXcd v(nout);
  for (int i = 0; i < nout; ++i) v[i] = out[i] * step;
  return SampledFunction(Grid1D(f.grid.start + g.grid.start, step, nout),
                         std::move(v));
}

}  // namespace gm
