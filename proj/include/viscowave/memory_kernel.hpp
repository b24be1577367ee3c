#ifndef VISCOWAVE_MEMORY_KERNEL_HPP
#define VISCOWAVE_MEMORY_KERNEL_HPP

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>
#include "viscowave/time_grid.hpp"

namespace viscowave
{

struct ZeroKernel
{
};

struct ConstantKernel
{
  double value = 0.0;
};

// amplitude * exp(-rate * t)
struct ExponentialKernel
{
  double amplitude = 0.0;
  double rate = 0.0;
};

// Sum of exponential terms.
struct PronyKernel
{
  std::vector<ExponentialKernel> terms;
};

// Samples on t_j = j * spacing, linearly interpolated in between.
struct SampledKernel
{
  double spacing = 0.0;
  std::vector<double> values;
};

using KernelFamily =
  std::variant<ZeroKernel, ConstantKernel, ExponentialKernel, PronyKernel, SampledKernel>;

//
// A continuous kernel t -> K(t) on [0, T_max].
//
class Kernel
{
public:
  Kernel() = default;
  Kernel(KernelFamily family);

  const KernelFamily &Family() const { return family_; }
  std::string Name() const;
  bool IsZero() const;
  bool IsSampled() const { return std::holds_alternative<SampledKernel>(family_); }

  // Largest t at which the kernel is defined (infinite for closed-form families).
  double Coverage() const;

  double operator()(double t) const;

  // First or second derivative. Closed form for the analytic families; centered
  // differences of the interpolant for sampled kernels.
  double Derivative(double t, int order) const;

  // K(t_j) for every node; throws std::invalid_argument if the kernel does not cover
  // the grid.
  std::vector<double> Sample(const TimeGrid &grid) const;

  // (K * e^{i mu .})(t_j) for every node: real part is K*cos(mu .), imaginary part is
  // K*sin(mu .). Exact for the analytic families, product integration of the linear
  // interpolant otherwise.
  std::vector<std::complex<double>> OscillatorConvolution(double mu,
                                                          const TimeGrid &grid) const;

private:
  KernelFamily family_ = ZeroKernel{};
};

//
// The memory data of w'' = Lap w + b w + K * w.
//
struct MemoryKernel
{
  double b = 0.0;
  Kernel K;

  bool IsZero() const { return b == 0.0 && K.IsZero(); }
  std::string Describe() const;
};

void ValidateKernel(const Kernel &kernel);

// Loads a two-column (t, value) CSV on a uniform grid starting at t = 0.
SampledKernel LoadSampledKernel(const std::string &path);

// Trapezoidal (K * g)(t_j) at every node of the grid.
std::vector<double> Convolve(std::span<const double> kernel_samples,
                             std::span<const double> g, double dt);
std::vector<double> Convolve(const Kernel &kernel, std::span<const double> g,
                             const TimeGrid &grid);

// R with R + N*R = N on the grid.
std::vector<double> MacCamyResolvent(const Kernel &n_kernel, const TimeGrid &grid);

struct ResolventResiduals
{
  // max_j |R + N*R - N| at the nodes, with the solver's own quadrature.
  double nodal = 0.0;
  // max over cell midpoints of the same residual evaluated with the linear interpolant
  // of R and Gauss-Legendre quadrature; O(dt^2).
  double midpoint = 0.0;
  // max_j |N*R - R*N| at the nodes.
  double commutator = 0.0;
};

ResolventResiduals CheckResolvent(const Kernel &n_kernel, std::span<const double> resolvent,
                                  const TimeGrid &grid);

//
// Memory data produced by the MacCamy transform of w'' = Lap w + N * Lap w:
//
//   w'' = Lap w + velocity_coeff w' + b w + K * w - R(t) w_1 - R'(t) w_0
//
struct TransformedSystem
{
  std::vector<double> resolvent;  // R
  std::vector<double> resolvent_derivative;  // R'
  double velocity_coeff = 0.0;  // R(0)
  double b = 0.0;               // R'(0)
  SampledKernel K;              // R''
  std::string data_forcing;
  bool degraded_accuracy = false;
  std::vector<std::string> warnings;

  // (b, K) as a MemoryKernel, usable when velocity_coeff is zero.
  MemoryKernel AsMemoryKernel() const;
};

TransformedSystem TransformedMemorySystem(const Kernel &n_kernel, const TimeGrid &grid);

}  // namespace viscowave

#endif  // VISCOWAVE_MEMORY_KERNEL_HPP
