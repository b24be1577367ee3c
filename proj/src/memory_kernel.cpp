#include "viscowave/memory_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include "product_integration.hpp"
#include "viscowave/csv.hpp"
#include "viscowave/spectral_basis.hpp"
#include "viscowave/volterra.hpp"

namespace viscowave
{

namespace
{

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};

double InterpolateSampled(const SampledKernel &k, double t)
{
  const double position = t / k.spacing;
  const auto last = static_cast<double>(k.values.size() - 1);
  if (position <= 0.0)
  {
    return k.values.front();
  }
  if (position >= last)
  {
    return k.values.back();
  }
  const auto i = static_cast<std::size_t>(position);
  const double theta = position - i;
  return (1.0 - theta) * k.values[i] + theta * k.values[i + 1];
}

double SampledDerivative(const SampledKernel &k, double t, int order)
{
  const double h = k.spacing;
  const double end = h * (k.values.size() - 1);
  auto f = [&](double s) { return InterpolateSampled(k, s); };
  if (order == 1)
  {
    if (t - h < 0.0)
    {
      return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2 * h)) / (2 * h);
    }
    if (t + h > end)
    {
      return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2 * h)) / (2 * h);
    }
    return (f(t + h) - f(t - h)) / (2 * h);
  }
  if (t - h < 0.0)
  {
    return (2.0 * f(t) - 5.0 * f(t + h) + 4.0 * f(t + 2 * h) - f(t + 3 * h)) / (h * h);
  }
  if (t + h > end)
  {
    return (2.0 * f(t) - 5.0 * f(t - h) + 4.0 * f(t - 2 * h) - f(t - 3 * h)) / (h * h);
  }
  return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

// e^{-rate t} * e^{i mu .} evaluated at t.
std::complex<double> ExponentialOscillator(double rate, double mu, double t)
{
  const std::complex<double> s(rate, mu);
  return (std::exp(std::complex<double>(0.0, mu * t)) - std::exp(-rate * t)) / s;
}

}  // namespace

Kernel::Kernel(KernelFamily family) : family_(std::move(family))
{
  ValidateKernel(*this);
}

std::string Kernel::Name() const
{
  return std::visit(Overloaded{[](const ZeroKernel &) { return "zero"; },
                               [](const ConstantKernel &) { return "constant"; },
                               [](const ExponentialKernel &) { return "exponential"; },
                               [](const PronyKernel &) { return "prony"; },
                               [](const SampledKernel &) { return "sampled"; }},
                    family_);
}

bool Kernel::IsZero() const
{
  return std::visit(
    Overloaded{[](const ZeroKernel &) { return true; },
               [](const ConstantKernel &k) { return k.value == 0.0; },
               [](const ExponentialKernel &k) { return k.amplitude == 0.0; },
               [](const PronyKernel &k)
               {
                 return std::all_of(k.terms.begin(), k.terms.end(),
                                    [](const auto &term) { return term.amplitude == 0.0; });
               },
               [](const SampledKernel &k)
               {
                 return std::all_of(k.values.begin(), k.values.end(),
                                    [](double v) { return v == 0.0; });
               }},
    family_);
}

double Kernel::Coverage() const
{
  if (const auto *sampled = std::get_if<SampledKernel>(&family_))
  {
    return sampled->spacing * (sampled->values.size() - 1);
  }
  return std::numeric_limits<double>::infinity();
}

double Kernel::operator()(double t) const
{
  if (t > Coverage() * (1.0 + 1e-12))
  {
    throw std::invalid_argument("kernel evaluated beyond its sampled range");
  }
  return std::visit(Overloaded{[](const ZeroKernel &) { return 0.0; },
                               [](const ConstantKernel &k) { return k.value; },
                               [t](const ExponentialKernel &k)
                               { return k.amplitude * std::exp(-k.rate * t); },
                               [t](const PronyKernel &k)
                               {
                                 double sum = 0.0;
                                 for (const auto &term : k.terms)
                                 {
                                   sum += term.amplitude * std::exp(-term.rate * t);
                                 }
                                 return sum;
                               },
                               [t](const SampledKernel &k) { return InterpolateSampled(k, t); }},
                    family_);
}

double Kernel::Derivative(double t, int order) const
{
  if (order != 1 && order != 2)
  {
    throw std::invalid_argument("only first and second kernel derivatives are available");
  }
  auto exponential = [&](const ExponentialKernel &k)
  { return std::pow(-k.rate, order) * k.amplitude * std::exp(-k.rate * t); };
  return std::visit(Overloaded{[](const ZeroKernel &) { return 0.0; },
                               [](const ConstantKernel &) { return 0.0; },
                               [&](const ExponentialKernel &k) { return exponential(k); },
                               [&](const PronyKernel &k)
                               {
                                 double sum = 0.0;
                                 for (const auto &term : k.terms)
                                 {
                                   sum += exponential(term);
                                 }
                                 return sum;
                               },
                               [&](const SampledKernel &k)
                               { return SampledDerivative(k, t, order); }},
                    family_);
}

std::vector<double> Kernel::Sample(const TimeGrid &grid) const
{
  if (grid.Horizon() > Coverage() * (1.0 + 1e-12))
  {
    throw std::invalid_argument("sampled kernel covers [0, " + std::to_string(Coverage()) +
                                "] but the grid extends to " + std::to_string(grid.Horizon()));
  }
  std::vector<double> samples(grid.Size());
  for (std::size_t j = 0; j < samples.size(); j++)
  {
    samples[j] = (*this)(std::min(grid.Time(static_cast<int>(j)), Coverage()));
  }
  return samples;
}

std::vector<std::complex<double>> Kernel::OscillatorConvolution(double mu,
                                                                const TimeGrid &grid) const
{
  if (!(mu > 0.0))
  {
    throw std::invalid_argument("oscillator frequency must be positive");
  }
  std::vector<std::complex<double>> out(grid.Size());
  auto add_exponential = [&](double amplitude, double rate)
  {
    for (std::size_t j = 1; j < out.size(); j++)
    {
      out[j] += amplitude * ExponentialOscillator(rate, mu, grid.Time(static_cast<int>(j)));
    }
  };
  std::visit(Overloaded{[](const ZeroKernel &) {},
                        [&](const ConstantKernel &k) { add_exponential(k.value, 0.0); },
                        [&](const ExponentialKernel &k) { add_exponential(k.amplitude, k.rate); },
                        [&](const PronyKernel &k)
                        {
                          for (const auto &term : k.terms)
                          {
                            add_exponential(term.amplitude, term.rate);
                          }
                        },
                        [&](const SampledKernel &)
                        {
                          const auto samples = Sample(grid);
                          out = detail::OscillatorIntegral<double>(mu, samples, grid.Dt());
                        }},
             family_);
  return out;
}

std::string MemoryKernel::Describe() const
{
  std::ostringstream os;
  os << "b=" << b << ", K=" << K.Name();
  std::visit(Overloaded{[](const ZeroKernel &) {},
                        [&](const ConstantKernel &k) { os << "(" << k.value << ")"; },
                        [&](const ExponentialKernel &k)
                        { os << "(" << k.amplitude << " exp(-" << k.rate << " t))"; },
                        [&](const PronyKernel &k) { os << "(" << k.terms.size() << " terms)"; },
                        [&](const SampledKernel &k)
                        { os << "(" << k.values.size() << " samples, dt=" << k.spacing << ")"; }},
             K.Family());
  return os.str();
}

void ValidateKernel(const Kernel &kernel)
{
  auto check_exponential = [](const ExponentialKernel &k)
  {
    if (!std::isfinite(k.amplitude) || !std::isfinite(k.rate) || k.rate < 0.0)
    {
      throw std::invalid_argument("exponential kernel needs a finite amplitude and rate >= 0");
    }
  };
  std::visit(Overloaded{[](const ZeroKernel &) {},
                        [](const ConstantKernel &k)
                        {
                          if (!std::isfinite(k.value))
                          {
                            throw std::invalid_argument("constant kernel must be finite");
                          }
                        },
                        [&](const ExponentialKernel &k) { check_exponential(k); },
                        [&](const PronyKernel &k)
                        {
                          for (const auto &term : k.terms)
                          {
                            check_exponential(term);
                          }
                        },
                        [](const SampledKernel &k)
                        {
                          if (!(k.spacing > 0.0) || k.values.size() < 2)
                          {
                            throw std::invalid_argument(
                              "sampled kernel needs a positive spacing and two samples");
                          }
                          for (double v : k.values)
                          {
                            if (!std::isfinite(v))
                            {
                              throw std::invalid_argument("sampled kernel values must be finite");
                            }
                          }
                        }},
             kernel.Family());
}

SampledKernel LoadSampledKernel(const std::string &path)
{
  const auto table = csv::ReadFile(path);
  if (table.rows.size() < 2 || table.rows.front().size() != 2)
  {
    throw std::invalid_argument(path + ": sampled kernel needs two columns (t, value)");
  }
  const double spacing = table.rows[1][0] - table.rows[0][0];
  if (std::abs(table.rows[0][0]) > 1e-12 || !(spacing > 0.0))
  {
    throw std::invalid_argument(path + ": sampled kernel must start at t = 0 and increase");
  }
  SampledKernel kernel{spacing, {}};
  for (std::size_t i = 0; i < table.rows.size(); i++)
  {
    if (std::abs(table.rows[i][0] - i * spacing) > 1e-9 * std::max(1.0, i * spacing))
    {
      throw std::invalid_argument(path + ": sampled kernel grid is not uniform");
    }
    kernel.values.push_back(table.rows[i][1]);
  }
  ValidateKernel(Kernel(kernel));
  return kernel;
}

std::vector<double> Convolve(std::span<const double> kernel_samples, std::span<const double> g,
                             double dt)
{
  if (kernel_samples.size() < g.size())
  {
    throw std::invalid_argument("kernel samples do not cover the function grid");
  }
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t j = 1; j < g.size(); j++)
  {
    double sum = 0.5 * (kernel_samples[j] * g[0] + kernel_samples[0] * g[j]);
    for (std::size_t i = 1; i < j; i++)
    {
      sum += kernel_samples[j - i] * g[i];
    }
    out[j] = dt * sum;
  }
  return out;
}

std::vector<double> Convolve(const Kernel &kernel, std::span<const double> g, const TimeGrid &grid)
{
  if (g.size() != grid.Size())
  {
    throw std::invalid_argument("function has " + std::to_string(g.size()) +
                                " samples but the grid has " + std::to_string(grid.Size()));
  }
  return Convolve(kernel.Sample(grid), g, grid.Dt());
}

std::vector<double> MacCamyResolvent(const Kernel &n_kernel, const TimeGrid &grid)
{
  auto n = n_kernel.Sample(grid);
  ConvolutionKernel negated{n};
  for (double &v : negated.samples)
  {
    v = -v;
  }
  return SolveMarching(VolterraProblem{std::move(n), std::move(negated)}, grid);
}

ResolventResiduals CheckResolvent(const Kernel &n_kernel, std::span<const double> resolvent,
                                  const TimeGrid &grid)
{
  if (resolvent.size() != grid.Size())
  {
    throw std::invalid_argument("resolvent samples do not match the grid");
  }
  const auto n = n_kernel.Sample(grid);
  const double h = grid.Dt();
  ResolventResiduals out;

  const auto nr = Convolve(n, resolvent, h);
  const auto rn = Convolve(resolvent, n, h);
  for (std::size_t j = 0; j < n.size(); j++)
  {
    out.nodal = std::max(out.nodal, std::abs(resolvent[j] + nr[j] - n[j]));
    out.commutator = std::max(out.commutator, std::abs(nr[j] - rn[j]));
  }

  // Midpoint residual with the piecewise-linear R and 4-point Gauss-Legendre per cell.
  std::vector<double> gx, gw;
  GaussLegendre(4, gx, gw);
  const std::size_t points = gx.size();
  for (std::size_t g = 0; g < points; g++)
  {
    gx[g] = 0.5 * (gx[g] + 1.0);  // on [0, 1]
    gw[g] *= 0.5;
  }
  const std::size_t cells = n.size() - 1;
  // n_table[k][g] = N((k + 1/2 - x_g) h): kernel at midpoint minus a full-cell point.
  std::vector<double> n_table(cells * points);
  for (std::size_t k = 0; k < cells; k++)
  {
    for (std::size_t g = 0; g < points; g++)
    {
      n_table[k * points + g] = n_kernel((k + 0.5 - gx[g]) * h);
    }
  }
  std::vector<double> r_cell(cells * points);
  for (std::size_t i = 0; i < cells; i++)
  {
    for (std::size_t g = 0; g < points; g++)
    {
      r_cell[i * points + g] = (1.0 - gx[g]) * resolvent[i] + gx[g] * resolvent[i + 1];
    }
  }
  for (std::size_t j = 0; j < cells; j++)
  {
    const double tm = (j + 0.5) * h;
    const double r_mid = 0.5 * (resolvent[j] + resolvent[j + 1]);
    double integral = 0.0;
    for (std::size_t i = 0; i < j; i++)
    {
      const double *nk = &n_table[(j - i) * points];
      const double *rc = &r_cell[i * points];
      for (std::size_t g = 0; g < points; g++)
      {
        integral += gw[g] * nk[g] * rc[g];
      }
    }
    integral *= h;
    // Half cell [t_j, t_m].
    double half = 0.0;
    for (std::size_t g = 0; g < points; g++)
    {
      const double s = 0.5 * gx[g];  // fraction of h past t_j
      const double r_s = (1.0 - s) * resolvent[j] + s * resolvent[j + 1];
      half += gw[g] * n_kernel((0.5 - s) * h) * r_s;
    }
    integral += 0.5 * h * half;
    out.midpoint = std::max(out.midpoint, std::abs(r_mid + integral - n_kernel(tm)));
  }
  return out;
}

MemoryKernel TransformedSystem::AsMemoryKernel() const
{
  return MemoryKernel{b, Kernel(K)};
}

TransformedSystem TransformedMemorySystem(const Kernel &n_kernel, const TimeGrid &grid)
{
  TransformedSystem out;
  const double h = grid.Dt();
  const std::size_t size = grid.Size();
  out.resolvent = MacCamyResolvent(n_kernel, grid);

  std::vector<double> n(size), dn(size), ddn(size);
  for (std::size_t j = 0; j < size; j++)
  {
    const double t = grid.Time(static_cast<int>(j));
    n[j] = n_kernel(t);
    dn[j] = n_kernel.Derivative(t, 1);
    ddn[j] = n_kernel.Derivative(t, 2);
  }

  // Differentiating R + N*R = N:
  //   R'  = N'  - N(0) R  - N'*R
  //   R'' = N'' - N(0) R' - N'(0) R - N''*R
  const auto dn_r = Convolve(dn, out.resolvent, h);
  const auto ddn_r = Convolve(ddn, out.resolvent, h);
  out.resolvent_derivative.resize(size);
  std::vector<double> r2(size);
  for (std::size_t j = 0; j < size; j++)
  {
    out.resolvent_derivative[j] = dn[j] - n[0] * out.resolvent[j] - dn_r[j];
  }
  for (std::size_t j = 0; j < size; j++)
  {
    r2[j] = ddn[j] - n[0] * out.resolvent_derivative[j] - dn[0] * out.resolvent[j] - ddn_r[j];
  }

  out.velocity_coeff = out.resolvent.front();
  out.b = out.resolvent_derivative.front();
  out.K = SampledKernel{h, std::move(r2)};
  out.data_forcing = "-R(t) w1 - R'(t) w0";

  if (const auto *sampled = std::get_if<SampledKernel>(&n_kernel.Family()))
  {
    const auto &v = sampled->values;
    if (v.size() < 4)
    {
      out.degraded_accuracy = true;
    }
    else
    {
      // A kink shows up as a slope jump comparable to the slopes themselves; for C^2
      // samples the jumps are O(spacing).
      double max_slope = 0.0, max_jump = 0.0;
      for (std::size_t i = 0; i + 1 < v.size(); i++)
      {
        const double slope = (v[i + 1] - v[i]) / sampled->spacing;
        max_slope = std::max(max_slope, std::abs(slope));
        if (i > 0)
        {
          const double previous = (v[i] - v[i - 1]) / sampled->spacing;
          max_jump = std::max(max_jump, std::abs(slope - previous));
        }
      }
      out.degraded_accuracy = max_jump > 0.25 * max_slope + 1e-12;
    }
    if (out.degraded_accuracy)
    {
      out.warnings.push_back(
        "sampled N is not resolved as a differentiable function; R' and R'' are inaccurate");
    }
  }
  if (out.velocity_coeff != 0.0)
  {
    out.warnings.push_back(
      "velocity coefficient R(0) is nonzero: the transformed equation carries a w' term that "
      "the (b, K) memory form does not represent without a further change of unknown");
  }
  return out;
}

}  // namespace viscowave
