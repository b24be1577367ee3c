#include "viscowave/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include "viscowave/errors.hpp"

namespace viscowave
{

namespace
{

void CheckProblem(const VolterraProblem &problem, const TimeGrid &grid)
{
  if (problem.forcing.size() != grid.Size())
  {
    throw std::invalid_argument("Volterra forcing has " + std::to_string(problem.forcing.size()) +
                                " samples but the grid has " + std::to_string(grid.Size()));
  }
  if (const auto *conv = std::get_if<ConvolutionKernel>(&problem.kernel))
  {
    if (conv->samples.size() < grid.Size())
    {
      throw std::invalid_argument("convolution kernel does not cover the grid");
    }
  }
  else if (!std::get<KernelFunction>(problem.kernel))
  {
    throw std::invalid_argument("Volterra kernel is empty");
  }
}

//
// Trapezoidal quadrature of int_0^{t_j} k(t_j, s) y(s) ds, split into the part that
// uses y_0..y_{j-1} and the diagonal weight multiplying y_j.
//
class TrapezoidQuadrature
{
public:
  TrapezoidQuadrature(const VolterraProblem &problem, const TimeGrid &grid)
    : grid_(grid), conv_(std::get_if<ConvolutionKernel>(&problem.kernel)),
      function_(conv_ ? nullptr : &std::get<KernelFunction>(problem.kernel))
  {
  }

  double Kernel(std::size_t j, std::size_t i) const
  {
    if (conv_)
    {
      return conv_->samples[j - i];
    }
    return (*function_)(grid_.Time(static_cast<int>(j)), grid_.Time(static_cast<int>(i)));
  }

  // dt * (k_{j0} y_0 / 2 + sum_{0<i<j} k_{ji} y_i)
  double History(std::size_t j, const std::vector<double> &y) const
  {
    double sum = 0.5 * Kernel(j, 0) * y[0];
    if (conv_)
    {
      const double *k = conv_->samples.data();
      for (std::size_t i = 1; i < j; i++)
      {
        sum += k[j - i] * y[i];
      }
    }
    else
    {
      for (std::size_t i = 1; i < j; i++)
      {
        sum += Kernel(j, i) * y[i];
      }
    }
    return grid_.Dt() * sum;
  }

  double Diagonal(std::size_t j) const { return 0.5 * grid_.Dt() * Kernel(j, j); }

private:
  const TimeGrid &grid_;
  const ConvolutionKernel *conv_;
  const KernelFunction *function_;
};

}  // namespace

std::vector<double> SolveMarching(const VolterraProblem &problem, const TimeGrid &grid)
{
  CheckProblem(problem, grid);
  const TrapezoidQuadrature quad(problem, grid);
  const auto &g = problem.forcing;
  std::vector<double> y(g.size(), 0.0);
  y[0] = g[0];
  for (std::size_t j = 1; j < y.size(); j++)
  {
    const double factor = 1.0 - quad.Diagonal(j);
    if (std::abs(factor) < 1e-14)
    {
      throw StepSizeError("singular trapezoidal diagonal factor at node " + std::to_string(j) +
                            "; reduce the time step",
                          static_cast<int>(j));
    }
    y[j] = (g[j] + quad.History(j, y)) / factor;
  }
  return y;
}

std::vector<double> SolveMarchingTransposed(const ConvolutionKernel &kernel,
                                            std::span<const double> functional,
                                            const TimeGrid &grid)
{
  if (functional.size() != grid.Size() || kernel.samples.size() < grid.Size())
  {
    throw std::invalid_argument("transposed marching data do not match the grid");
  }
  // Row j >= 1 of the marching matrix L: L_jj = 1 - dt/2 k_0, L_ji = -dt k_{j-i} for
  // 0 < i < j, L_j0 = -dt/2 k_j; row 0 is the identity. Solve L^T a = c backwards.
  const double dt = grid.Dt();
  const auto &k = kernel.samples;
  const std::size_t last = functional.size() - 1;
  const double factor = 1.0 - 0.5 * dt * k[0];
  if (std::abs(factor) < 1e-14)
  {
    throw StepSizeError("singular trapezoidal diagonal factor; reduce the time step", 1);
  }
  std::vector<double> a(functional.size(), 0.0);
  for (std::size_t i = last; i >= 1; i--)
  {
    double sum = 0.0;
    for (std::size_t j = i + 1; j <= last; j++)
    {
      sum += k[j - i] * a[j];
    }
    a[i] = (functional[i] + dt * sum) / factor;
  }
  double sum = 0.0;
  for (std::size_t j = 1; j <= last; j++)
  {
    sum += k[j] * a[j];
  }
  a[0] = functional[0] + 0.5 * dt * sum;
  return a;
}

PicardResult SolvePicard(const VolterraProblem &problem, const TimeGrid &grid, int iterations)
{
  if (iterations < 1)
  {
    throw std::invalid_argument("Picard iteration count must be at least 1");
  }
  CheckProblem(problem, grid);
  const TrapezoidQuadrature quad(problem, grid);
  const auto &g = problem.forcing;

  PicardResult result;
  std::vector<double> previous = g;
  std::vector<double> next(g.size());
  for (int k = 0; k < iterations; k++)
  {
    next[0] = g[0];
    double increment = std::abs(next[0] - previous[0]);
    for (std::size_t j = 1; j < g.size(); j++)
    {
      next[j] = g[j] + quad.History(j, previous) + quad.Diagonal(j) * previous[j];
      increment = std::max(increment, std::abs(next[j] - previous[j]));
    }
    result.increments.push_back(increment);
    std::swap(previous, next);
  }
  result.y = std::move(previous);
  result.contraction_estimate = result.increments.back();
  return result;
}

}  // namespace viscowave
