#ifndef VISCOWAVE_VOLTERRA_HPP
#define VISCOWAVE_VOLTERRA_HPP

#include <functional>
#include <span>
#include <variant>
#include <vector>
#include "viscowave/time_grid.hpp"

namespace viscowave
{

// k(t, s) on 0 <= s <= t <= T.
using KernelFunction = std::function<double(double t, double s)>;

// k(t, s) = samples[(t - s) / dt] on the problem grid.
struct ConvolutionKernel
{
  std::vector<double> samples;
};

//
// y(t) = g(t) + int_0^t k(t, s) y(s) ds on a uniform grid.
//
struct VolterraProblem
{
  std::vector<double> forcing;
  std::variant<KernelFunction, ConvolutionKernel> kernel;
};

// Trapezoidal product rule with the diagonal term solved implicitly at each node. The
// returned samples satisfy the discrete equations exactly. Throws StepSizeError when
// 1 - dt/2 k(t_j, t_j) vanishes.
std::vector<double> SolveMarching(const VolterraProblem &problem, const TimeGrid &grid);

// Weights a with sum_j c_j y_j = sum_j a_j g_j for every forcing g, where y solves the
// marching equations with a convolution kernel: the transposed triangular solve.
std::vector<double> SolveMarchingTransposed(const ConvolutionKernel &kernel,
                                            std::span<const double> functional,
                                            const TimeGrid &grid);

struct PicardResult
{
  std::vector<double> y;
  double contraction_estimate = 0.0;  // ||y^(N) - y^(N-1)||_inf
  std::vector<double> increments;     // ||y^(k) - y^(k-1)||_inf, k = 1..N
};

// N Picard sweeps starting from y^(0) = g, each integral by the full trapezoidal rule.
PicardResult SolvePicard(const VolterraProblem &problem, const TimeGrid &grid, int iterations);

}  // namespace viscowave

#endif  // VISCOWAVE_VOLTERRA_HPP
