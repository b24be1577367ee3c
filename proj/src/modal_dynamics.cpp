#include "viscowave/modal_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include "product_integration.hpp"
#include "viscowave/csv.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/volterra.hpp"

namespace viscowave
{

namespace
{

void CheckFrequency(double mu)
{
  if (!(mu > 0.0) || !std::isfinite(mu))
  {
    throw std::invalid_argument("modal frequency must be positive");
  }
}

void CheckSamples(std::size_t size, const TimeGrid &grid)
{
  if (size != grid.Size())
  {
    throw std::invalid_argument("modal forcing has " + std::to_string(size) +
                                " samples but the grid has " + std::to_string(grid.Size()));
  }
}

// Traces scaled by the boundary quadrature weights: modes x nodes.
Eigen::MatrixXd WeightedTraces(const SpectralBasis &basis)
{
  Eigen::MatrixXd out(basis.Size(), basis.NodeCount());
  for (int k = 0; k < basis.Size(); k++)
  {
    for (int q = 0; q < basis.NodeCount(); q++)
    {
      out(k, q) = basis.Modes()[k].trace[q] * basis.Nodes()[q].weight;
    }
  }
  return out;
}

// Raw traces: nodes x modes.
Eigen::MatrixXd TraceMatrix(const SpectralBasis &basis)
{
  Eigen::MatrixXd out(basis.NodeCount(), basis.Size());
  for (int k = 0; k < basis.Size(); k++)
  {
    for (int q = 0; q < basis.NodeCount(); q++)
    {
      out(q, k) = basis.Modes()[k].trace[q];
    }
  }
  return out;
}

}  // namespace

StatePair StatePair::Zero(int modes)
{
  return StatePair{std::vector<double>(modes, 0.0), std::vector<double>(modes, 0.0)};
}

double SobolevNorm(const StatePair &v, const SpectralBasis &basis, double s)
{
  if (v.xi.size() != v.eta.size() || v.Size() > basis.Size())
  {
    throw std::invalid_argument("state pair does not match the spectral basis");
  }
  double sum = 0.0;
  for (int n = 0; n < v.Size(); n++)
  {
    const double weight = s == 0.0 ? 1.0 : std::pow(basis.Mu(n), 2.0 * s);
    sum += weight * (v.xi[n] * v.xi[n] + v.eta[n] * v.eta[n]);
  }
  return std::sqrt(sum);
}

BoundaryControl BoundaryControl::Zero(const SpectralBasis &basis, const TimeGrid &grid)
{
  return BoundaryControl{Eigen::MatrixXd::Zero(basis.NodeCount(), grid.Size())};
}

void BoundaryControl::CheckShape(const SpectralBasis &basis, const TimeGrid &grid) const
{
  if (values.rows() != basis.NodeCount() || values.cols() != static_cast<Eigen::Index>(grid.Size()))
  {
    throw std::invalid_argument("boundary control is " + std::to_string(values.rows()) + "x" +
                                std::to_string(values.cols()) + ", expected " +
                                std::to_string(basis.NodeCount()) + "x" +
                                std::to_string(grid.Size()));
  }
  if (!values.allFinite())
  {
    throw std::invalid_argument("boundary control has non-finite entries");
  }
}

double BoundaryInnerProduct(const SpectralBasis &basis, const TimeGrid &grid,
                            const BoundaryControl &f, const BoundaryControl &g)
{
  f.CheckShape(basis, grid);
  g.CheckShape(basis, grid);
  const Eigen::Index last = f.values.cols() - 1;
  double total = 0.0;
  for (int q = 0; q < basis.NodeCount(); q++)
  {
    double sum = 0.5 * (f.values(q, 0) * g.values(q, 0) + f.values(q, last) * g.values(q, last));
    for (Eigen::Index j = 1; j < last; j++)
    {
      sum += f.values(q, j) * g.values(q, j);
    }
    total += basis.Nodes()[q].weight * sum;
  }
  return grid.Dt() * total;
}

double BoundaryNorm(const SpectralBasis &basis, const TimeGrid &grid, const BoundaryControl &f)
{
  return std::sqrt(BoundaryInnerProduct(basis, grid, f, f));
}

ModalResponse WaveModalResponse(double mu, std::span<const double> g, const TimeGrid &grid)
{
  CheckFrequency(mu);
  CheckSamples(g.size(), grid);
  const auto z = detail::OscillatorIntegral<double>(mu, g, grid.Dt());
  ModalResponse out{std::vector<double>(z.size()), std::vector<double>(z.size())};
  for (std::size_t j = 0; j < z.size(); j++)
  {
    out.value[j] = z[j].imag() / mu;
    out.derivative[j] = z[j].real();
  }
  return out;
}

ModalMemoryKernels BuildModalMemoryKernels(double mu, const MemoryKernel &memory,
                                           const TimeGrid &grid)
{
  CheckFrequency(mu);
  const std::size_t size = grid.Size();
  ModalMemoryKernels out{std::vector<double>(size, 0.0), std::vector<double>(size, 0.0)};
  std::vector<std::complex<double>> osc;
  if (!memory.K.IsZero())
  {
    osc = memory.K.OscillatorConvolution(mu, grid);
  }
  for (std::size_t j = 0; j < size; j++)
  {
    const double phase = mu * grid.Time(static_cast<int>(j));
    const std::complex<double> k_osc = osc.empty() ? 0.0 : osc[j];
    out.kernel[j] = (memory.b * std::sin(phase) + k_osc.imag()) / mu;
    out.derivative[j] = memory.b * std::cos(phase) + k_osc.real();
  }
  return out;
}

std::vector<double> FreeMemoryModal(double xi, double eta, double mu, const MemoryKernel &memory,
                                    const TimeGrid &grid)
{
  CheckFrequency(mu);
  std::vector<double> free(grid.Size());
  for (std::size_t j = 0; j < free.size(); j++)
  {
    const double phase = mu * grid.Time(static_cast<int>(j));
    free[j] = xi * std::cos(phase) + eta * std::sin(phase);
  }
  if (memory.IsZero())
  {
    return free;
  }
  auto kernels = BuildModalMemoryKernels(mu, memory, grid);
  return SolveMarching(VolterraProblem{std::move(free), ConvolutionKernel{std::move(kernels.kernel)}},
                       grid);
}

ModalResponse ControlledMemoryModal(std::span<const double> g, double mu,
                                    const MemoryKernel &memory, const TimeGrid &grid)
{
  auto u = WaveModalResponse(mu, g, grid);
  if (memory.IsZero())
  {
    return u;
  }
  auto kernels = BuildModalMemoryKernels(mu, memory, grid);
  ModalResponse out;
  out.value =
    SolveMarching(VolterraProblem{std::move(u.value), ConvolutionKernel{std::move(kernels.kernel)}},
                  grid);
  // w' = u' + (b cos(mu .) + K * cos(mu .)) * w
  const auto memory_velocity = Convolve(kernels.derivative, out.value, grid.Dt());
  out.derivative = std::move(u.derivative);
  for (std::size_t j = 0; j < out.derivative.size(); j++)
  {
    out.derivative[j] += memory_velocity[j];
  }
  return out;
}

Eigen::MatrixXd ModalForcing(const SpectralBasis &basis, const BoundaryControl &f)
{
  if (f.values.rows() != basis.NodeCount())
  {
    throw std::invalid_argument("boundary control does not match the boundary quadrature");
  }
  return WeightedTraces(basis) * f.values;
}

ForwardResult ForwardSimulate(const SpectralBasis &basis, const MemoryKernel &memory,
                              const BoundaryControl &f, const TimeGrid &grid)
{
  f.CheckShape(basis, grid);
  const Eigen::MatrixXd forcing = ModalForcing(basis, f);
  const int modes = basis.Size();
  const auto size = static_cast<Eigen::Index>(grid.Size());

  ForwardResult result;
  result.trajectory.w.resize(modes, size);
  result.trajectory.dw.resize(modes, size);
  ParallelFor(modes,
              [&](int k)
              {
                const Eigen::VectorXd g = forcing.row(k).transpose();
                const auto response = ControlledMemoryModal(
                  std::span<const double>(g.data(), g.size()), basis.Mu(k), memory, grid);
                result.trajectory.w.row(k) =
                  Eigen::Map<const Eigen::RowVectorXd>(response.value.data(), size);
                result.trajectory.dw.row(k) =
                  Eigen::Map<const Eigen::RowVectorXd>(response.derivative.data(), size);
              });

  result.terminal = StatePair::Zero(modes);
  for (int k = 0; k < modes; k++)
  {
    result.terminal.xi[k] = basis.Mu(k) * result.trajectory.w(k, size - 1);
    result.terminal.eta[k] = result.trajectory.dw(k, size - 1);
  }
  return result;
}

BoundaryControl AdjointTrace(const SpectralBasis &basis, const MemoryKernel &memory,
                             const StatePair &v, const TimeGrid &grid)
{
  if (v.Size() != basis.Size() || v.eta.size() != v.xi.size())
  {
    throw std::invalid_argument("adjoint data does not match the spectral basis");
  }
  const int modes = basis.Size();
  const auto size = static_cast<Eigen::Index>(grid.Size());
  // Time-reversed modal solutions: row k holds psi_k(T - t_j).
  Eigen::MatrixXd reversed = Eigen::MatrixXd::Zero(modes, size);
  ParallelFor(modes,
              [&](int k)
              {
                if (v.xi[k] == 0.0 && v.eta[k] == 0.0)
                {
                  return;
                }
                const auto psi = FreeMemoryModal(v.xi[k], v.eta[k], basis.Mu(k), memory, grid);
                for (Eigen::Index j = 0; j < size; j++)
                {
                  reversed(k, j) = psi[size - 1 - j];
                }
              });
  return BoundaryControl{TraceMatrix(basis) * reversed};
}

GronwallReport GronwallBoundCheck(const SpectralBasis &basis, const MemoryKernel &memory,
                                  const TimeGrid &grid, int trials, std::uint64_t seed)
{
  if (trials < 1)
  {
    throw std::invalid_argument("Gronwall check needs at least one trial");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> angles(trials);
  for (double &a : angles)
  {
    a = angle(rng);
  }

  GronwallReport report;
  report.seed = seed;
  report.per_mode_max.assign(basis.Size(), 0.0);
  ParallelFor(basis.Size(),
              [&](int k)
              {
                // psi is linear in (xi, eta): combine the two fundamental solutions.
                const auto c = FreeMemoryModal(1.0, 0.0, basis.Mu(k), memory, grid);
                const auto s = FreeMemoryModal(0.0, 1.0, basis.Mu(k), memory, grid);
                double peak = 0.0;
                for (double a : angles)
                {
                  const double ca = std::cos(a), sa = std::sin(a);
                  for (std::size_t j = 0; j < c.size(); j++)
                  {
                    peak = std::max(peak, std::abs(ca * c[j] + sa * s[j]));
                  }
                }
                report.per_mode_max[k] = peak;
              });
  double running = 0.0;
  for (double peak : report.per_mode_max)
  {
    running = std::max(running, peak);
    report.running_max.push_back(running);
  }
  report.m_observed = running;
  return report;
}

void WriteSeriesCsv(std::ostream &os, const TimeGrid &grid, const Eigen::MatrixXd &samples,
                    const std::string &prefix)
{
  std::vector<std::string> columns = {"t"};
  for (Eigen::Index k = 0; k < samples.rows(); k++)
  {
    columns.push_back(prefix + "_" + std::to_string(k + 1));
  }
  csv::WriteHeader(os, columns);
  std::vector<double> row(samples.rows() + 1);
  for (Eigen::Index j = 0; j < samples.cols(); j++)
  {
    row[0] = grid.Time(static_cast<int>(j));
    for (Eigen::Index k = 0; k < samples.rows(); k++)
    {
      row[k + 1] = samples(k, j);
    }
    csv::WriteRow(os, row);
  }
}

}  // namespace viscowave
