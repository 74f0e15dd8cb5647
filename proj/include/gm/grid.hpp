#ifndef GM_GRID_HPP
#define GM_GRID_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace gm {

using Complex = std::complex<double>;

/// Uniform 1-D grid: points start + i*step, i in [0, count).
struct Grid1D {
  double start = 0.0;
  double step = 1.0;
  int count = 2;

  Grid1D() = default;
  Grid1D(double start_, double step_, int count_)
      : start(start_), step(step_), count(count_) {
    if (step <= 0.0) throw std::invalid_argument("Grid1D: step must be > 0");
    if (count < 2) throw std::invalid_argument("Grid1D: count must be >= 2");
  }

  static Grid1D from_range(double a, double b, int count) {
    if (count < 2) throw std::invalid_argument("Grid1D: count must be >= 2");
    return Grid1D(a, (b - a) / (count - 1), count);
  }

  double point(int i) const { return start + i * step; }
  double back() const { return point(count - 1); }
};

/// Complex samples on a uniform grid.
struct SampledFunction {
  Grid1D grid;
  Eigen::VectorXcd values;

  SampledFunction() = default;
  SampledFunction(Grid1D g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.count)
      throw std::invalid_argument("SampledFunction: values.length != grid.count");
  }

  template <typename F>
  static SampledFunction sample(const Grid1D& g, F&& f) {
    Eigen::VectorXcd v(g.count);
    for (int i = 0; i < g.count; ++i) v[i] = Complex(f(g.point(i)));
    return SampledFunction(g, std::move(v));
  }

  /// Discrete L2 norm squared, step-weighted.
  double norm2() const { return values.squaredNorm() * grid.step; }
};

}  // namespace gm

#endif
