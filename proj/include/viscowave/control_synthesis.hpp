#ifndef VISCOWAVE_CONTROL_SYNTHESIS_HPP
#define VISCOWAVE_CONTROL_SYNTHESIS_HPP

#include <cstdint>
#include <vector>
#include <Eigen/Dense>
#include "viscowave/memory_kernel.hpp"
#include "viscowave/modal_dynamics.hpp"
#include "viscowave/spectral_basis.hpp"
#include "viscowave/time_grid.hpp"

namespace viscowave
{

//
// Gram matrix of the adjoint boundary traces of the 2M canonical targets. Target 2k is
// (xi, eta) = (phi_k, 0) and target 2k + 1 is (0, phi_k).
//
struct GramSystem
{
  int modes = 0;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd eigenvalues;  // ascending, of `matrix` before regularization
  double min_eigenvalue = 0.0;
  double condition_number = 0.0;
  double regularization = 0.0;
  bool below_control_time = false;  // horizon <= T0 of the geometry
  std::vector<BoundaryControl> traces;
};

GramSystem AssembleGram(const SpectralBasis &basis, const MemoryKernel &memory,
                        const TimeGrid &grid, int modes);

// Right-hand side of the moment problem for the terminal state (A w(T), w'(T)) = target:
// the pairing of the target with (eta_k, xi_k) of each canonical adjoint datum.
Eigen::VectorXd MomentRightHandSide(const StatePair &terminal_target, int modes);

// (A xi, eta) for a desired terminal state (w(T), w'(T)) = (xi, eta).
StatePair WeightedTarget(const SpectralBasis &basis, const StatePair &state);

struct SynthesisResult
{
  BoundaryControl control;
  Eigen::VectorXd coefficients;
  double residual = 0.0;  // ||G c - rhs||
};

// Minimum-norm control in the span of the Gram traces reaching the terminal pair
// (A w(T), w'(T)) = terminal_target on the truncated model. Throws IllPosedSystemError
// when the Gram matrix is numerically singular and gs.regularization is zero.
SynthesisResult SolveMinNormControl(GramSystem &gs, const SpectralBasis &basis,
                                    const MemoryKernel &memory, const TimeGrid &grid,
                                    const StatePair &terminal_target);

// Moments <f, trace_i> of a control against the Gram traces, i.e. the truncated
// moment-model prediction of the paired terminal state.
Eigen::VectorXd ControlMoments(const GramSystem &gs, const SpectralBasis &basis,
                               const TimeGrid &grid, const BoundaryControl &f);

struct VerificationResult
{
  StatePair terminal;
  double absolute_error = 0.0;
  double relative_error = 0.0;
};

VerificationResult VerifyControl(const SpectralBasis &basis, const MemoryKernel &memory,
                                 const TimeGrid &grid, const BoundaryControl &f,
                                 const StatePair &terminal_target);

struct DualityResult
{
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_gap = 0.0;
};

DualityResult DualityCheck(const SpectralBasis &basis, const MemoryKernel &memory,
                           const TimeGrid &grid, const BoundaryControl &f, const StatePair &v);

struct SpectrumRow
{
  int modes = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double condition_number = 0.0;
};

std::vector<SpectrumRow> RieszFisherDiagnostic(const SpectralBasis &basis,
                                               const MemoryKernel &memory, const TimeGrid &grid,
                                               const std::vector<int> &mode_list);

enum class ProbeControl
{
  WhiteNoise,  // independent standard normal samples at every node
  SmoothTone   // a single low-frequency tone, random phase and amplitude per node
};

struct NormGrowthRow
{
  int modes = 0;
  double ratio = 0.0;           // max over trials of ||terminal||_{L2xL2} / ||f||
  double weighted_ratio = 0.0;  // same with weights mu_n^(alpha - 1)
};

std::vector<NormGrowthRow> NormGrowthProbe(const SpectralBasis &basis, const MemoryKernel &memory,
                                           const TimeGrid &grid, const std::vector<int> &mode_list,
                                           int trials, std::uint64_t seed, double alpha = 0.55,
                                           ProbeControl control = ProbeControl::WhiteNoise);

struct CompactnessResult
{
  Eigen::VectorXd singular_values;  // descending
  int control_basis_size = 0;
};

// Singular values of the discrete terminal-map difference (memory minus memory-free)
// restricted to an L2-orthonormal control basis: boundary node indicators times the
// cosine functions sqrt(2/T) cos(k pi t / T), k < temporal_functions.
CompactnessResult PerturbationCompactnessProbe(const SpectralBasis &basis,
                                               const MemoryKernel &memory, const TimeGrid &grid,
                                               int modes, int temporal_functions = 48);

}  // namespace viscowave

#endif  // VISCOWAVE_CONTROL_SYNTHESIS_HPP
