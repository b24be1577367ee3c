#ifndef VISCOWAVE_MODAL_DYNAMICS_HPP
#define VISCOWAVE_MODAL_DYNAMICS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "viscowave/memory_kernel.hpp"
#include "viscowave/spectral_basis.hpp"
#include "viscowave/time_grid.hpp"

namespace viscowave
{

//
// Modal coefficients of a pair (xi, eta) in L2 x L2 on a spectral basis.
//
struct StatePair
{
  std::vector<double> xi;
  std::vector<double> eta;

  static StatePair Zero(int modes);
  int Size() const { return static_cast<int>(xi.size()); }
};

// sqrt(sum_n mu_n^(2s) (xi_n^2 + eta_n^2)).
double SobolevNorm(const StatePair &v, const SpectralBasis &basis, double s);

//
// Samples of a function on (controlled boundary node) x (time node).
//
struct BoundaryControl
{
  Eigen::MatrixXd values;  // rows: boundary nodes, cols: time nodes

  static BoundaryControl Zero(const SpectralBasis &basis, const TimeGrid &grid);
  void CheckShape(const SpectralBasis &basis, const TimeGrid &grid) const;
};

// Quadrature inner product on L2(0, T; L2(Gamma_1)): boundary weights times the
// trapezoidal rule in time.
double BoundaryInnerProduct(const SpectralBasis &basis, const TimeGrid &grid,
                            const BoundaryControl &f, const BoundaryControl &g);
double BoundaryNorm(const SpectralBasis &basis, const TimeGrid &grid, const BoundaryControl &f);

// Per-mode samples w_n(t_j) and w_n'(t_j).
struct ModalTrajectory
{
  Eigen::MatrixXd w;   // modes x time nodes
  Eigen::MatrixXd dw;  // modes x time nodes
};

struct ModalResponse
{
  std::vector<double> value;
  std::vector<double> derivative;
};

// Duhamel response of u'' = -mu^2 u + g with zero data, by product integration of the
// linear interpolant of g against sin / cos.
ModalResponse WaveModalResponse(double mu, std::span<const double> g, const TimeGrid &grid);

// Convolution kernels of the modal memory equation for one frequency:
//   kernel     = (b sin(mu .) + K * sin(mu .)) / mu
//   derivative = b cos(mu .) + K * cos(mu .)
struct ModalMemoryKernels
{
  std::vector<double> kernel;
  std::vector<double> derivative;
};

ModalMemoryKernels BuildModalMemoryKernels(double mu, const MemoryKernel &memory,
                                           const TimeGrid &grid);

// psi(t) = xi cos(mu t) + eta sin(mu t) + (1/mu) int_0^t [b psi + K * psi](s) sin(mu(t-s)) ds
std::vector<double> FreeMemoryModal(double xi, double eta, double mu, const MemoryKernel &memory,
                                    const TimeGrid &grid);

// w = u + (1/mu) int_0^t sin(mu(t-s)) [b w + K * w](s) ds with u the Duhamel response to g.
ModalResponse ControlledMemoryModal(std::span<const double> g, double mu,
                                    const MemoryKernel &memory, const TimeGrid &grid);

// g_n(t_j) = int_{Gamma_1} trace_n f(., t_j): modes x time nodes.
Eigen::MatrixXd ModalForcing(const SpectralBasis &basis, const BoundaryControl &f);

struct ForwardResult
{
  ModalTrajectory trajectory;
  StatePair terminal;  // ({mu_n w_n(T)}, {w_n'(T)})
};

ForwardResult ForwardSimulate(const SpectralBasis &basis, const MemoryKernel &memory,
                              const BoundaryControl &f, const TimeGrid &grid);

// sum_n trace_n(x) psi_n(T - t), psi_n the free memory mode with data (xi_n, eta_n).
BoundaryControl AdjointTrace(const SpectralBasis &basis, const MemoryKernel &memory,
                             const StatePair &v, const TimeGrid &grid);

struct GronwallReport
{
  double m_observed = 0.0;           // max over modes, trials and time of |psi_n(t)|
  std::vector<double> per_mode_max;  // max over trials and time, per mode
  std::vector<double> running_max;   // m_observed restricted to the first k modes
  std::uint64_t seed = 0;
};

// Random unit pairs (xi_n, eta_n) = (cos a, sin a); the same angles are used for every
// mode of a trial.
GronwallReport GronwallBoundCheck(const SpectralBasis &basis, const MemoryKernel &memory,
                                  const TimeGrid &grid, int trials, std::uint64_t seed);

// CSV with columns t, <prefix>_1, ... (rows of `samples` are series).
void WriteSeriesCsv(std::ostream &os, const TimeGrid &grid, const Eigen::MatrixXd &samples,
                    const std::string &prefix);

}  // namespace viscowave

#endif  // VISCOWAVE_MODAL_DYNAMICS_HPP
