#include "viscowave/control_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include "viscowave/errors.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/volterra.hpp"

namespace viscowave
{

namespace
{

void CheckModeCount(const SpectralBasis &basis, int modes)
{
  if (modes < 1 || modes > basis.Size())
  {
    throw std::invalid_argument("mode count " + std::to_string(modes) +
                                " is outside the basis of " + std::to_string(basis.Size()) +
                                " modes");
  }
}

// dt * trapezoid(a .* b)
double TimeProduct(const std::vector<double> &a, const std::vector<double> &b, double dt)
{
  const std::size_t last = a.size() - 1;
  double sum = 0.5 * (a[0] * b[0] + a[last] * b[last]);
  for (std::size_t j = 1; j < last; j++)
  {
    sum += a[j] * b[j];
  }
  return dt * sum;
}

void FillSpectrum(GramSystem &gs)
{
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gs.matrix,
                                                              Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
  {
    throw std::runtime_error("Gram eigendecomposition failed");
  }
  gs.eigenvalues = solver.eigenvalues();
  gs.min_eigenvalue = gs.eigenvalues(0);
  const double top = gs.eigenvalues(gs.eigenvalues.size() - 1);
  gs.condition_number =
    gs.min_eigenvalue > 0.0 ? top / gs.min_eigenvalue : std::numeric_limits<double>::infinity();
}

double Norm(const StatePair &v)
{
  double sum = 0.0;
  for (int n = 0; n < v.Size(); n++)
  {
    sum += v.xi[n] * v.xi[n] + v.eta[n] * v.eta[n];
  }
  return std::sqrt(sum);
}

}  // namespace

GramSystem AssembleGram(const SpectralBasis &basis, const MemoryKernel &memory,
                        const TimeGrid &grid, int modes)
{
  CheckModeCount(basis, modes);
  const int size = 2 * modes;
  const auto steps = grid.Size();

  // psi[2k] has data (1, 0) and psi[2k + 1] has data (0, 1) on mode k; the adjoint trace
  // of target i is trace_{i/2}(x) psi[i](T - t).
  std::vector<std::vector<double>> psi(size);
  ParallelFor(modes,
              [&](int k)
              {
                psi[2 * k] = FreeMemoryModal(1.0, 0.0, basis.Mu(k), memory, grid);
                psi[2 * k + 1] = FreeMemoryModal(0.0, 1.0, basis.Mu(k), memory, grid);
              });

  GramSystem gs;
  gs.modes = modes;
  gs.below_control_time = grid.Horizon() <= ControlTimeLowerBound(basis.GetGeometry());
  gs.matrix.resize(size, size);
  for (int i = 0; i < size; i++)
  {
    for (int j = i; j < size; j++)
    {
      const double value =
        basis.BoundaryProduct(i / 2, j / 2) * TimeProduct(psi[i], psi[j], grid.Dt());
      gs.matrix(i, j) = value;
      gs.matrix(j, i) = value;
    }
  }
  FillSpectrum(gs);

  gs.traces.resize(size);
  for (int i = 0; i < size; i++)
  {
    const auto &trace = basis.Modes()[i / 2].trace;
    Eigen::MatrixXd values(basis.NodeCount(), static_cast<Eigen::Index>(steps));
    for (int q = 0; q < basis.NodeCount(); q++)
    {
      for (std::size_t j = 0; j < steps; j++)
      {
        values(q, static_cast<Eigen::Index>(j)) = trace[q] * psi[i][steps - 1 - j];
      }
    }
    gs.traces[i] = BoundaryControl{std::move(values)};
  }
  return gs;
}

Eigen::VectorXd MomentRightHandSide(const StatePair &terminal_target, int modes)
{
  if (terminal_target.Size() != modes || terminal_target.eta.size() != terminal_target.xi.size())
  {
    throw std::invalid_argument("target has " + std::to_string(terminal_target.Size()) +
                                " modes, expected " + std::to_string(modes));
  }
  Eigen::VectorXd rhs(2 * modes);
  for (int k = 0; k < modes; k++)
  {
    rhs(2 * k) = terminal_target.eta[k];
    rhs(2 * k + 1) = terminal_target.xi[k];
  }
  return rhs;
}

StatePair WeightedTarget(const SpectralBasis &basis, const StatePair &state)
{
  if (state.Size() > basis.Size() || state.eta.size() != state.xi.size())
  {
    throw std::invalid_argument("target does not match the spectral basis");
  }
  StatePair out = state;
  for (int n = 0; n < out.Size(); n++)
  {
    out.xi[n] *= basis.Mu(n);
  }
  return out;
}

SynthesisResult SolveMinNormControl(GramSystem &gs, const SpectralBasis &basis,
                                    const MemoryKernel &memory, const TimeGrid &grid,
                                    const StatePair &terminal_target)
{
  (void)memory;
  if (gs.regularization < 0.0 || !std::isfinite(gs.regularization))
  {
    throw std::invalid_argument("regularization must be nonnegative");
  }
  if (gs.traces.size() != static_cast<std::size_t>(gs.matrix.rows()))
  {
    throw std::invalid_argument("Gram system has no adjoint traces");
  }
  gs.rhs = MomentRightHandSide(terminal_target, gs.modes);

  const double scale = std::abs(gs.eigenvalues(gs.eigenvalues.size() - 1));
  if (gs.regularization == 0.0 && gs.min_eigenvalue < 1e-12 * scale)
  {
    const double ridge = 1e-10 * gs.matrix.trace();
    std::ostringstream os;
    os << "Gram matrix is numerically singular (min eigenvalue " << gs.min_eigenvalue
       << ", norm " << scale << "); set regularization, e.g. " << ridge;
    throw IllPosedSystemError(os.str(), ridge);
  }

  SynthesisResult result;
  const Eigen::Index size = gs.matrix.rows();
  const Eigen::MatrixXd system =
    gs.matrix + gs.regularization * Eigen::MatrixXd::Identity(size, size);
  result.coefficients = system.ldlt().solve(gs.rhs);
  result.residual = (gs.matrix * result.coefficients - gs.rhs).norm();

  result.control = BoundaryControl::Zero(basis, grid);
  for (Eigen::Index i = 0; i < size; i++)
  {
    result.control.values += result.coefficients(i) * gs.traces[i].values;
  }
  return result;
}

Eigen::VectorXd ControlMoments(const GramSystem &gs, const SpectralBasis &basis,
                               const TimeGrid &grid, const BoundaryControl &f)
{
  Eigen::VectorXd moments(static_cast<Eigen::Index>(gs.traces.size()));
  for (std::size_t i = 0; i < gs.traces.size(); i++)
  {
    moments(static_cast<Eigen::Index>(i)) = BoundaryInnerProduct(basis, grid, f, gs.traces[i]);
  }
  return moments;
}

VerificationResult VerifyControl(const SpectralBasis &basis, const MemoryKernel &memory,
                                 const TimeGrid &grid, const BoundaryControl &f,
                                 const StatePair &terminal_target)
{
  if (terminal_target.Size() > basis.Size())
  {
    throw std::invalid_argument("target has more modes than the basis");
  }
  VerificationResult result;
  result.terminal = ForwardSimulate(basis, memory, f, grid).terminal;
  // Modes beyond the target are expected to end at rest.
  double error = 0.0;
  for (int n = 0; n < basis.Size(); n++)
  {
    const bool in_target = n < terminal_target.Size();
    const double dx = result.terminal.xi[n] - (in_target ? terminal_target.xi[n] : 0.0);
    const double de = result.terminal.eta[n] - (in_target ? terminal_target.eta[n] : 0.0);
    error += dx * dx + de * de;
  }
  result.absolute_error = std::sqrt(error);
  const double scale = Norm(terminal_target);
  result.relative_error = scale > 0.0 ? result.absolute_error / scale : result.absolute_error;
  return result;
}

DualityResult DualityCheck(const SpectralBasis &basis, const MemoryKernel &memory,
                           const TimeGrid &grid, const BoundaryControl &f, const StatePair &v)
{
  const auto adjoint = AdjointTrace(basis, memory, v, grid);
  const auto terminal = ForwardSimulate(basis, memory, f, grid).terminal;

  DualityResult result;
  result.lhs = BoundaryInnerProduct(basis, grid, adjoint, f);
  for (int n = 0; n < basis.Size(); n++)
  {
    result.rhs += terminal.xi[n] * v.eta[n] + terminal.eta[n] * v.xi[n];
  }
  const double scale = std::max({std::abs(result.lhs), std::abs(result.rhs),
                                 std::numeric_limits<double>::min()});
  result.rel_gap = std::abs(result.lhs - result.rhs) / scale;
  return result;
}

std::vector<SpectrumRow> RieszFisherDiagnostic(const SpectralBasis &basis,
                                               const MemoryKernel &memory, const TimeGrid &grid,
                                               const std::vector<int> &mode_list)
{
  if (mode_list.empty())
  {
    throw std::invalid_argument("mode list is empty");
  }
  for (std::size_t i = 0; i < mode_list.size(); i++)
  {
    CheckModeCount(basis, mode_list[i]);
    if (i > 0 && mode_list[i] <= mode_list[i - 1])
    {
      throw std::invalid_argument("mode list must be increasing");
    }
  }
  // Gram matrices of nested truncations are leading blocks of the largest one.
  const GramSystem full = AssembleGram(basis, memory, grid, mode_list.back());
  std::vector<SpectrumRow> rows;
  for (int modes : mode_list)
  {
    GramSystem gs;
    gs.matrix = full.matrix.topLeftCorner(2 * modes, 2 * modes);
    FillSpectrum(gs);
    rows.push_back({modes, gs.min_eigenvalue, gs.eigenvalues(gs.eigenvalues.size() - 1),
                    gs.condition_number});
  }
  return rows;
}

std::vector<NormGrowthRow> NormGrowthProbe(const SpectralBasis &basis, const MemoryKernel &memory,
                                           const TimeGrid &grid, const std::vector<int> &mode_list,
                                           int trials, std::uint64_t seed, double alpha,
                                           ProbeControl control)
{
  if (trials < 1)
  {
    throw std::invalid_argument("norm growth probe needs at least one trial");
  }
  if (mode_list.empty())
  {
    throw std::invalid_argument("mode list is empty");
  }
  for (int modes : mode_list)
  {
    CheckModeCount(basis, modes);
  }
  const int largest = *std::max_element(mode_list.begin(), mode_list.end());
  const SpectralBasis truncated = basis.Truncated(largest);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<NormGrowthRow> rows(mode_list.size());
  for (std::size_t r = 0; r < rows.size(); r++)
  {
    rows[r].modes = mode_list[r];
  }
  for (int trial = 0; trial < trials; trial++)
  {
    BoundaryControl f = BoundaryControl::Zero(truncated, grid);
    if (control == ProbeControl::WhiteNoise)
    {
      for (Eigen::Index q = 0; q < f.values.rows(); q++)
      {
        for (Eigen::Index j = 0; j < f.values.cols(); j++)
        {
          f.values(q, j) = normal(rng);
        }
      }
    }
    else
    {
      const double omega = 2.0 * std::numbers::pi / grid.Horizon();
      for (Eigen::Index q = 0; q < f.values.rows(); q++)
      {
        const double amplitude = 0.5 + uniform(rng);
        const double phase = 2.0 * std::numbers::pi * uniform(rng);
        for (Eigen::Index j = 0; j < f.values.cols(); j++)
        {
          f.values(q, j) = amplitude * std::sin(omega * grid.Time(static_cast<int>(j)) + phase);
        }
      }
    }
    const double f_norm = BoundaryNorm(truncated, grid, f);
    const auto terminal = ForwardSimulate(truncated, memory, f, grid).terminal;
    for (auto &row : rows)
    {
      double plain = 0.0, weighted = 0.0;
      for (int n = 0; n < row.modes; n++)
      {
        const double energy = terminal.xi[n] * terminal.xi[n] + terminal.eta[n] * terminal.eta[n];
        plain += energy;
        weighted += std::pow(truncated.Mu(n), 2.0 * (alpha - 1.0)) * energy;
      }
      row.ratio = std::max(row.ratio, std::sqrt(plain) / f_norm);
      row.weighted_ratio = std::max(row.weighted_ratio, std::sqrt(weighted) / f_norm);
    }
  }
  return rows;
}

CompactnessResult PerturbationCompactnessProbe(const SpectralBasis &basis,
                                               const MemoryKernel &memory, const TimeGrid &grid,
                                               int modes, int temporal_functions)
{
  CheckModeCount(basis, modes);
  if (temporal_functions < 1)
  {
    throw std::invalid_argument("compactness probe needs at least one temporal function");
  }
  const double horizon = grid.Horizon();
  const auto steps = grid.Size();
  std::vector<std::vector<double>> cosines(temporal_functions, std::vector<double>(steps));
  for (int k = 0; k < temporal_functions; k++)
  {
    const double norm = k == 0 ? std::sqrt(1.0 / horizon) : std::sqrt(2.0 / horizon);
    for (std::size_t j = 0; j < steps; j++)
    {
      cosines[k][j] = norm * std::cos(k * std::numbers::pi * grid.Time(static_cast<int>(j)) / horizon);
    }
  }

  // Mode n sees the control node_q x cosine_k as g_n = trace_n(q) sqrt(w_q) cosine_k, so
  // one set of modal solves per (n, k) covers every node. The memory terminal values are
  // linear functionals of the Duhamel response u, evaluated through transposed solves.
  const std::size_t last = steps - 1;
  Eigen::MatrixXd xi_diff(modes, temporal_functions), eta_diff(modes, temporal_functions);
  ParallelFor(modes,
              [&](int n)
              {
                const double mu = basis.Mu(n);
                const auto kernels = BuildModalMemoryKernels(mu, memory, grid);
                const ConvolutionKernel volterra{kernels.kernel};
                std::vector<double> value_functional(steps, 0.0);
                value_functional[last] = 1.0;
                // trapezoidal (derivative kernel * w)(T)
                std::vector<double> velocity_functional(steps);
                for (std::size_t i = 0; i <= last; i++)
                {
                  const double weight = (i == 0 || i == last) ? 0.5 : 1.0;
                  velocity_functional[i] = grid.Dt() * weight * kernels.derivative[last - i];
                }
                const auto value_weights =
                  SolveMarchingTransposed(volterra, value_functional, grid);
                const auto velocity_weights =
                  SolveMarchingTransposed(volterra, velocity_functional, grid);
                for (int k = 0; k < temporal_functions; k++)
                {
                  const auto u = WaveModalResponse(mu, cosines[k], grid);
                  double value = 0.0, velocity = 0.0;
                  for (std::size_t j = 0; j <= last; j++)
                  {
                    value += value_weights[j] * u.value[j];
                    velocity += velocity_weights[j] * u.value[j];
                  }
                  xi_diff(n, k) = mu * (value - u.value[last]);
                  eta_diff(n, k) = velocity;
                }
              });

  const int nodes = basis.NodeCount();
  Eigen::MatrixXd map(2 * modes, nodes * temporal_functions);
  for (int q = 0; q < nodes; q++)
  {
    const double root_weight = std::sqrt(basis.Nodes()[q].weight);
    for (int k = 0; k < temporal_functions; k++)
    {
      const Eigen::Index column = static_cast<Eigen::Index>(q) * temporal_functions + k;
      for (int n = 0; n < modes; n++)
      {
        const double scale = basis.Modes()[n].trace[q] * root_weight;
        map(n, column) = scale * xi_diff(n, k);
        map(modes + n, column) = scale * eta_diff(n, k);
      }
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(map);
  return CompactnessResult{svd.singularValues(), nodes * temporal_functions};
}

}  // namespace viscowave
