#ifndef VISCOWAVE_TESTS_FIXTURES_HPP
#define VISCOWAVE_TESTS_FIXTURES_HPP

#include <cmath>
#include <numbers>
#include <random>
#include "viscowave/modal_dynamics.hpp"
#include "viscowave/memory_kernel.hpp"

namespace fixture
{

inline viscowave::MemoryKernel Memory(double b, double amplitude, double rate)
{
  viscowave::MemoryKernel m;
  m.b = b;
  if (amplitude != 0.0)
  {
    m.K = viscowave::Kernel(viscowave::ExponentialKernel{amplitude, rate});
  }
  return m;
}

// Low-frequency trigonometric series with decaying random coefficients at every node.
inline viscowave::BoundaryControl SmoothControl(const viscowave::SpectralBasis &basis,
                                                const viscowave::TimeGrid &grid,
                                                std::mt19937_64 &rng, int harmonics = 6)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  auto f = viscowave::BoundaryControl::Zero(basis, grid);
  const double omega = std::numbers::pi / grid.Horizon();
  for (Eigen::Index q = 0; q < f.values.rows(); q++)
  {
    for (int k = 0; k < harmonics; k++)
    {
      const double a = normal(rng) / (k + 1.0), c = normal(rng) / (k + 1.0);
      for (Eigen::Index j = 0; j < f.values.cols(); j++)
      {
        const double t = grid.Time(static_cast<int>(j));
        f.values(q, j) += a * std::cos(k * omega * t) + c * std::sin((k + 1) * omega * t);
      }
    }
  }
  return f;
}

inline viscowave::StatePair RandomPair(int modes, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  auto v = viscowave::StatePair::Zero(modes);
  for (int n = 0; n < modes; n++)
  {
    v.xi[n] = normal(rng);
    v.eta[n] = normal(rng);
  }
  return v;
}

// (w(T), w'(T)) with coefficients decaying like n^-2 and n^-1.
inline viscowave::StatePair SmoothState(int modes, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  auto v = viscowave::StatePair::Zero(modes);
  for (int n = 0; n < modes; n++)
  {
    v.xi[n] = normal(rng) / ((n + 1.0) * (n + 1.0));
    v.eta[n] = normal(rng) / (n + 1.0);
  }
  return v;
}

}  // namespace fixture

#endif  // VISCOWAVE_TESTS_FIXTURES_HPP
