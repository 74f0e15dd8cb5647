#ifndef GM_CONVOLVE_HPP
#define GM_CONVOLVE_HPP

#include "gm/grid.hpp"

namespace gm {

/// Linear convolution of two sampled functions sharing the same step,
/// via zero-padded FFT, scaled by step so it approximates
/// \int f(x-y) g(y) dy. Output grid covers the full support sum.
SampledFunction convolve(const SampledFunction& f, const SampledFunction& g);

}  // namespace gm

#endif
