#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include "fixtures.hpp"
#include "oracles.hpp"
#include "viscowave/modal_dynamics.hpp"
#include "viscowave/spectral_basis.hpp"

using namespace viscowave;
using std::numbers::pi;

namespace
{

double Sup(const std::vector<double> &a, const std::vector<double> &b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); i++)
  {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

std::vector<double> Samples(const TimeGrid &grid, const std::function<double(double)> &f)
{
  std::vector<double> out(grid.Size());
  for (std::size_t j = 0; j < out.size(); j++)
  {
    out[j] = f(grid.Time(static_cast<int>(j)));
  }
  return out;
}

}  // namespace

TEST_CASE("Sobolev norms")
{
  const auto basis = BuildIntervalBasis(1.0, 3);
  CHECK(SobolevNorm(StatePair::Zero(3), basis, 0.7) == 0.0);
  StatePair v = StatePair::Zero(3);
  v.xi[0] = 1.0;
  CHECK(SobolevNorm(v, basis, 0.0) == 1.0);
  CHECK(SobolevNorm(v, basis, 1.0) == doctest::Approx(1.5707963));
  v.eta[2] = 2.0;
  CHECK(SobolevNorm(v, basis, 0.0) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(SobolevNorm(StatePair::Zero(4), basis, 0.0), std::invalid_argument);
}

TEST_CASE("wave modal response")
{
  const TimeGrid grid(2.0, 2000);
  const auto zero = WaveModalResponse(pi / 2, std::vector<double>(grid.Size(), 0.0), grid);
  CHECK(Sup(zero.value, std::vector<double>(grid.Size(), 0.0)) == 0.0);

  const auto step = WaveModalResponse(pi / 2, std::vector<double>(grid.Size(), 1.0), grid);
  CHECK(std::abs(step.value.back() - 0.8105695) < 1e-5);
  CHECK(std::abs(step.value.back() - 8.0 / (pi * pi)) < 1e-5);

  const TimeGrid resonance_grid(pi, 3142);
  const auto resonant = WaveModalResponse(
    1.0, Samples(resonance_grid, [](double s) { return std::sin(s); }), resonance_grid);
  CHECK(std::abs(resonant.value.back() - pi / 2) < 1e-5);
  // u' = t sin t / 2 vanishes at pi
  CHECK(std::abs(resonant.derivative.back()) < 1e-5);

  CHECK_THROWS_AS(WaveModalResponse(0.0, std::vector<double>(grid.Size(), 0.0), grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(WaveModalResponse(1.0, std::vector<double>(3, 0.0), grid),
                  std::invalid_argument);
}

TEST_CASE("wave response is exact for piecewise linear forcing")
{
  const TimeGrid grid(1.5, 37);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::vector<double> g(grid.Size());
  for (double &v : g)
  {
    v = normal(rng);
  }
  for (double mu : {0.3, 7.0, 180.0})
  {
    const auto u = WaveModalResponse(mu, g, grid);
    // 10-point Gauss-Legendre on every cell of sin / cos times the interpolant
    std::vector<double> x, w;
    GaussLegendre(10, x, w);
    double value = 0.0, derivative = 0.0;
    const double h = grid.Dt(), t = grid.Horizon();
    for (int i = 0; i < grid.Steps(); i++)
    {
      for (std::size_t q = 0; q < x.size(); q++)
      {
        const double theta = 0.5 * (x[q] + 1.0), s = (i + theta) * h;
        const double gs = (1 - theta) * g[i] + theta * g[i + 1];
        value += 0.5 * h * w[q] * std::sin(mu * (t - s)) * gs / mu;
        derivative += 0.5 * h * w[q] * std::cos(mu * (t - s)) * gs;
      }
    }
    CHECK(u.value.back() == doctest::Approx(value).epsilon(1e-10));
    CHECK(u.derivative.back() == doctest::Approx(derivative).epsilon(1e-10));
  }
}

TEST_CASE("free memory mode")
{
  const TimeGrid grid(4.0, 4000);
  const auto pure = FreeMemoryModal(0.3, -1.1, 3.0, MemoryKernel{}, grid);
  CHECK(Sup(pure, Samples(grid, [](double t) { return 0.3 * std::cos(3 * t) - 1.1 * std::sin(3 * t); })) <
        1e-14);

  const TimeGrid one(1.0, 1000);
  const auto shifted = FreeMemoryModal(1.0, 0.0, 2.0, fixture::Memory(1.0, 0.0, 0.0), one);
  CHECK(std::abs(shifted.back() - (-0.1605565)) < 1e-5);
  CHECK(std::abs(shifted.back() - std::cos(std::sqrt(3.0))) < 1e-5);

  const auto psi = FreeMemoryModal(0.0, 1.0, 5.0, fixture::Memory(0.0, 1.0, 1.0), grid);
  const auto reference = oracle::AugmentedRk4(5.0, 0.0, {{1.0, 1.0}}, 0.0, 5.0, 4.0, 40000, 10);
  CHECK(Sup(psi, reference.value) < 1e-6);
}

TEST_CASE("b above mu^2 gives growing modes without special handling")
{
  const TimeGrid grid(1.0, 2000);
  const auto psi = FreeMemoryModal(1.0, 0.0, 1.0, fixture::Memory(5.0, 0.0, 0.0), grid);
  // psi'' = 4 psi
  CHECK(std::abs(psi.back() - std::cosh(2.0)) < 1e-5);
}

TEST_CASE("controlled memory mode")
{
  const TimeGrid grid(4.0, 4000);
  const auto memory = fixture::Memory(0.5, 0.2, 1.0);
  const auto rest = ControlledMemoryModal(std::vector<double>(grid.Size(), 0.0), 3.0, memory, grid);
  CHECK(Sup(rest.value, std::vector<double>(grid.Size(), 0.0)) == 0.0);
  CHECK(Sup(rest.derivative, std::vector<double>(grid.Size(), 0.0)) == 0.0);

  const auto g = Samples(grid, [](double t) { return std::cos(2 * t) + t; });
  const auto plain = ControlledMemoryModal(g, 3.0, MemoryKernel{}, grid);
  const auto wave = WaveModalResponse(3.0, g, grid);
  CHECK(Sup(plain.value, wave.value) <= 1e-12);
  CHECK(Sup(plain.derivative, wave.derivative) <= 1e-12);

  const auto w = ControlledMemoryModal(std::vector<double>(grid.Size(), 1.0), 3.0, memory, grid);
  const auto reference = oracle::AugmentedRk4(3.0, 0.5, {{0.2, 1.0}}, 0.0, 0.0, 4.0, 40000, 10,
                                              [](double) { return 1.0; });
  CHECK(Sup(w.value, reference.value) < 1e-6);
  CHECK(Sup(w.derivative, reference.derivative) < 1e-6);
}

TEST_CASE("energy is conserved after the forcing stops")
{
  const TimeGrid grid(3.0, 3000);
  const double mu = 6.0;
  const auto g = Samples(grid, [](double t) { return t < 1.0 ? std::sin(4 * t) : 0.0; });
  const auto u = WaveModalResponse(mu, g, grid);
  const double e0 = mu * mu * u.value[1000] * u.value[1000] + u.derivative[1000] * u.derivative[1000];
  for (int j = 1000; j <= grid.Steps(); j += 50)
  {
    const double e = mu * mu * u.value[j] * u.value[j] + u.derivative[j] * u.derivative[j];
    CHECK(e == doctest::Approx(e0).epsilon(1e-12));
  }
}

TEST_CASE("forward simulation")
{
  const auto basis = BuildIntervalBasis(1.0, 1);
  const TimeGrid grid(2.0, 2000);
  const auto rest = ForwardSimulate(basis, MemoryKernel{}, BoundaryControl::Zero(basis, grid), grid);
  CHECK(rest.terminal.xi[0] == 0.0);
  CHECK(rest.terminal.eta[0] == 0.0);

  BoundaryControl constant{Eigen::MatrixXd::Ones(1, grid.Size())};
  const auto result = ForwardSimulate(basis, MemoryKernel{}, constant, grid);
  CHECK(std::abs(result.terminal.xi[0] - 1.8006327) < 1e-4);
  CHECK(std::abs(result.terminal.xi[0] - 4 * std::sqrt(2.0) / pi) < 1e-4);
  CHECK(result.trajectory.w.rows() == 1);
  CHECK(result.trajectory.w.cols() == static_cast<Eigen::Index>(grid.Size()));

  CHECK_THROWS_AS(ForwardSimulate(basis, MemoryKernel{}, BoundaryControl{Eigen::MatrixXd::Ones(2, 5)}, grid),
                  std::invalid_argument);
  BoundaryControl bad{Eigen::MatrixXd::Ones(1, grid.Size())};
  bad.values(0, 3) = NAN;
  CHECK_THROWS_AS(ForwardSimulate(basis, MemoryKernel{}, bad, grid), std::invalid_argument);
}

TEST_CASE("forward terminal agrees with the Fourier expansion of the terminal map")
{
  const auto basis = BuildRectangleBasis(1.0, 1.5, 3, {6, 1});
  const TimeGrid grid(2.0, 80);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  BoundaryControl f = BoundaryControl::Zero(basis, grid);
  for (Eigen::Index q = 0; q < f.values.rows(); q++)
  {
    for (Eigen::Index j = 0; j < f.values.cols(); j++)
    {
      f.values(q, j) = normal(rng);
    }
  }
  const auto terminal = ForwardSimulate(basis, MemoryKernel{}, f, grid).terminal;
  std::vector<double> x, w;
  GaussLegendre(12, x, w);
  const double h = grid.Dt(), horizon = grid.Horizon();
  for (int n = 0; n < basis.Size(); n++)
  {
    // int_0^T int trace_n f(x, T - s) {sin, cos}(mu s) ds with f linear between samples
    const double mu = basis.Mu(n);
    double sine = 0.0, cosine = 0.0;
    for (int q = 0; q < basis.NodeCount(); q++)
    {
      const double weight = basis.Nodes()[q].weight * basis.Modes()[n].trace[q];
      for (int i = 0; i < grid.Steps(); i++)
      {
        for (std::size_t p = 0; p < x.size(); p++)
        {
          const double theta = 0.5 * (x[p] + 1.0), s = (i + theta) * h;
          const double fs = (1 - theta) * f.values(q, i) + theta * f.values(q, i + 1);
          sine += weight * 0.5 * h * w[p] * std::sin(mu * (horizon - s)) * fs;
          cosine += weight * 0.5 * h * w[p] * std::cos(mu * (horizon - s)) * fs;
        }
      }
    }
    CHECK(std::abs(terminal.xi[n] - sine) < 1e-8);
    CHECK(std::abs(terminal.eta[n] - cosine) < 1e-8);
  }
}

TEST_CASE("forward simulation is linear")
{
  const auto basis = BuildIntervalBasis(1.0, 5);
  const TimeGrid grid(2.5, 500);
  const auto memory = fixture::Memory(0.3, 0.2, 2.0);
  std::mt19937_64 rng(12);
  const auto f1 = fixture::SmoothControl(basis, grid, rng);
  const auto f2 = fixture::SmoothControl(basis, grid, rng);
  const auto a = ForwardSimulate(basis, memory, f1, grid).terminal;
  const auto b = ForwardSimulate(basis, memory, f2, grid).terminal;
  const auto c = ForwardSimulate(basis, memory, BoundaryControl{f1.values - 2.0 * f2.values}, grid).terminal;
  for (int n = 0; n < basis.Size(); n++)
  {
    CHECK(std::abs(c.xi[n] - (a.xi[n] - 2 * b.xi[n])) <= 1e-12 * (1 + std::abs(c.xi[n])));
    CHECK(std::abs(c.eta[n] - (a.eta[n] - 2 * b.eta[n])) <= 1e-12 * (1 + std::abs(c.eta[n])));
  }
}

TEST_CASE("adjoint trace")
{
  const auto basis = BuildIntervalBasis(1.0, 4);
  const TimeGrid grid(2.0, 2000);
  const auto zero = AdjointTrace(basis, fixture::Memory(0.3, 0.2, 2.0), StatePair::Zero(4), grid);
  CHECK(zero.values.isZero(0.0));

  StatePair v = StatePair::Zero(4);
  v.xi[0] = 1.0;
  const auto single = AdjointTrace(basis, MemoryKernel{}, v, grid);
  for (int j : {0, 700, 2000})
  {
    const double t = grid.Time(j);
    CHECK(single.values(0, j) == doctest::Approx(std::sqrt(2.0) * std::cos(pi / 2 * (2 - t))));
  }
  CHECK(single.values(0, 2000) == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(AdjointTrace(basis, MemoryKernel{}, StatePair::Zero(3), grid), std::invalid_argument);
}

TEST_CASE("wave adjoint trace equals the series from cosine and sine tables")
{
  const auto basis = BuildRectangleBasis(1.0, 1.0, 2);
  const TimeGrid grid(3.0, 300);
  std::mt19937_64 rng(21);
  const auto v = fixture::RandomPair(basis.Size(), rng);
  const auto trace = AdjointTrace(basis, MemoryKernel{}, v, grid);
  for (int q = 0; q < basis.NodeCount(); q += 3)
  {
    for (int j = 0; j <= grid.Steps(); j += 7)
    {
      double sum = 0.0;
      for (int n = 0; n < basis.Size(); n++)
      {
        const double phase = basis.Mu(n) * (grid.Horizon() - grid.Time(j));
        sum += basis.Modes()[n].trace[q] * (v.xi[n] * std::cos(phase) + v.eta[n] * std::sin(phase));
      }
      CHECK(std::abs(trace.values(q, j) - sum) < 1e-10);
    }
  }
}

TEST_CASE("integrated adjoint series has a converging time derivative")
{
  // data (-A^-1 eta, A^-1 xi) for l2 sequences (xi, eta)
  const auto memory = fixture::Memory(0.2, 0.1, 1.0);
  const TimeGrid grid(2.5, 5000);
  std::mt19937_64 rng(8);
  const auto v = fixture::RandomPair(64, rng);
  std::vector<double> norms;
  for (int modes : {16, 32, 64})
  {
    const auto basis = BuildIntervalBasis(1.0, modes);
    StatePair data = StatePair::Zero(modes);
    for (int n = 0; n < modes; n++)
    {
      // l2 coefficients
      const double xi = v.xi[n] / (n + 1), eta = v.eta[n] / (n + 1);
      data.xi[n] = -eta / basis.Mu(n);
      data.eta[n] = xi / basis.Mu(n);
    }
    const auto trace = AdjointTrace(basis, memory, data, grid);
    double sum = 0.0;
    for (int j = 0; j < grid.Steps(); j++)
    {
      const double d = (trace.values(0, j + 1) - trace.values(0, j)) / grid.Dt();
      sum += grid.Dt() * d * d;
    }
    norms.push_back(std::sqrt(sum));
  }
  CHECK(std::abs(norms[2] - norms[1]) / norms[2] < 0.05);
}

TEST_CASE("Gronwall check")
{
  const TimeGrid grid(4.0, 2000);
  const auto basis = BuildIntervalBasis(1.0, 16);
  const auto free = GronwallBoundCheck(basis, MemoryKernel{}, grid, 8, 1);
  CHECK(free.m_observed <= 1.0 + 1e-9);
  CHECK(free.seed == 1);

  const auto memory = fixture::Memory(1.0, 1.0, 1.0);
  const auto report = GronwallBoundCheck(basis, memory, grid, 16, 2);
  CHECK(std::isfinite(report.m_observed));
  CHECK(report.per_mode_max.size() == 16);
  for (std::size_t k = 2; k < report.per_mode_max.size(); k++)
  {
    CHECK(report.per_mode_max[k] <= report.per_mode_max[1] * (1 + 1e-3));
  }
  const auto doubled = GronwallBoundCheck(BuildIntervalBasis(1.0, 32), memory, grid, 16, 2);
  CHECK(std::abs(doubled.m_observed - report.m_observed) <= 0.01 * report.m_observed);
  CHECK_THROWS_AS(GronwallBoundCheck(basis, memory, grid, 0, 2), std::invalid_argument);
}

TEST_CASE("series csv")
{
  const TimeGrid grid(1.0, 2);
  Eigen::MatrixXd samples(2, 3);
  samples << 1, 2, 3, 4, 5, 6;
  std::ostringstream os;
  WriteSeriesCsv(os, grid, samples, "mode");
  CHECK(os.str() == "t,mode_1,mode_2\n0,1,4\n0.5,2,5\n1,3,6\n");
}

TEST_CASE("boundary inner product")
{
  const auto basis = BuildRectangleBasis(1.0, 2.0, 1, {3, 1});
  const TimeGrid grid(2.0, 4);
  BoundaryControl f{Eigen::MatrixXd::Ones(basis.NodeCount(), grid.Size())};
  // |Gamma_1| * T = (2 + 1) * 2
  CHECK(BoundaryInnerProduct(basis, grid, f, f) == doctest::Approx(6.0));
  CHECK(BoundaryNorm(basis, grid, f) == doctest::Approx(std::sqrt(6.0)));
}
