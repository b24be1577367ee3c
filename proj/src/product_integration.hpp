#ifndef VISCOWAVE_SRC_PRODUCT_INTEGRATION_HPP
#define VISCOWAVE_SRC_PRODUCT_INTEGRATION_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace viscowave::detail
{

//
// Weights of int_0^h e^{i mu s} p(s) ds for p linear with p(0) = near, p(h) = far:
// the integral equals near_weight * near + far_weight * far.
//
struct OscillatoryCellWeights
{
  std::complex<double> rotation;  // e^{i mu h}
  std::complex<double> near_weight;
  std::complex<double> far_weight;
};

inline OscillatoryCellWeights CellWeights(double mu, double h)
{
  const std::complex<double> x(0.0, mu * h);
  std::complex<double> i0, i1;  // h^-1 int e^{i mu s} ds, h^-1 int (s/h) e^{i mu s} ds
  if (std::abs(mu * h) < 0.5)
  {
    // Taylor series; the closed form cancels catastrophically for small mu h.
    std::complex<double> term(1.0, 0.0);  // x^k / k!
    for (int k = 0; k < 30; k++)
    {
      i0 += term / (k + 1.0);
      i1 += term / (k + 2.0);
      term *= x / (k + 1.0);
    }
  }
  else
  {
    const std::complex<double> ex = std::exp(x);
    i0 = (ex - 1.0) / x;
    i1 = ex / x - (ex - 1.0) / (x * x);
  }
  return {std::exp(x), h * (i0 - i1), h * i1};
}

//
// z_j = int_0^{t_j} e^{i mu (t_j - s)} g(s) ds for the linear interpolant of g on a
// uniform grid with spacing h, by exact integration cell by cell.
//
template <typename T>
std::vector<std::complex<double>> OscillatorIntegral(double mu, std::span<const T> g, double h)
{
  const auto w = CellWeights(mu, h);
  std::vector<std::complex<double>> z(g.size());
  for (std::size_t j = 1; j < g.size(); j++)
  {
    // Over the last cell, s measured back from t_j: the near end is g_j.
    z[j] = w.rotation * z[j - 1] + w.near_weight * g[j] + w.far_weight * g[j - 1];
  }
  return z;
}

}  // namespace viscowave::detail

#endif  // VISCOWAVE_SRC_PRODUCT_INTEGRATION_HPP
