#include "viscowave/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include "viscowave/csv.hpp"

namespace viscowave
{

using std::numbers::pi;

Geometry Geometry::Interval(double length)
{
  Geometry g{GeometryKind::Interval, {length}};
  g.Validate();
  return g;
}

Geometry Geometry::Rectangle(double a, double b)
{
  Geometry g{GeometryKind::Rectangle, {a, b}};
  g.Validate();
  return g;
}

void Geometry::Validate() const
{
  const std::size_t expected = kind == GeometryKind::Interval ? 1 : 2;
  if (lengths.size() != expected)
  {
    throw std::invalid_argument("geometry needs " + std::to_string(expected) + " length(s)");
  }
  for (double l : lengths)
  {
    if (!(l > 0.0) || !std::isfinite(l))
    {
      throw std::invalid_argument("geometry lengths must be positive and finite");
    }
  }
}

std::string Geometry::Describe() const
{
  std::ostringstream os;
  if (kind == GeometryKind::Interval)
  {
    os << "interval(L=" << lengths[0] << ")";
  }
  else
  {
    os << "rectangle(a=" << lengths[0] << ", b=" << lengths[1] << ")";
  }
  return os.str();
}

SpectralBasis::SpectralBasis(Geometry geometry, std::vector<BoundaryNode> nodes,
                             std::vector<Mode> modes)
  : geometry_(std::move(geometry)), nodes_(std::move(nodes)), modes_(std::move(modes))
{
  for (const auto &mode : modes_)
  {
    if (mode.trace.size() != nodes_.size())
    {
      throw std::invalid_argument("mode trace does not match the boundary quadrature");
    }
  }
}

SpectralBasis SpectralBasis::Truncated(int count) const
{
  if (count < 1 || count > Size())
  {
    throw std::invalid_argument("cannot truncate a basis of " + std::to_string(Size()) +
                                " modes to " + std::to_string(count));
  }
  return SpectralBasis(geometry_, nodes_,
                       std::vector<Mode>(modes_.begin(), modes_.begin() + count));
}

double SpectralBasis::BoundaryProduct(int k, int l) const
{
  double sum = 0.0;
  for (std::size_t q = 0; q < nodes_.size(); q++)
  {
    sum += nodes_[q].weight * modes_[k].trace[q] * modes_[l].trace[q];
  }
  return sum;
}

double SpectralBasis::TraceNorm(int k) const
{
  return std::sqrt(BoundaryProduct(k, k));
}

namespace
{

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> Legendre(int n, double x)
{
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; k++)
  {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void GaussLegendre(int n, std::vector<double> &nodes, std::vector<double> &weights)
{
  if (n < 1)
  {
    throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  }
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; iter++)
    {
      const auto [p, dp] = Legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    const double dp = Legendre(n, x).second;
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

SpectralBasis BuildIntervalBasis(double length, int mode_count)
{
  const Geometry geometry = Geometry::Interval(length);
  if (mode_count < 1)
  {
    throw std::invalid_argument("mode count must be at least 1");
  }
  const double scale = std::sqrt(2.0 / length);
  std::vector<Mode> modes;
  modes.reserve(mode_count);
  for (int n = 1; n <= mode_count; n++)
  {
    // sin((n - 1/2) pi) = (-1)^(n+1)
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    modes.push_back({n, {n}, (n - 0.5) * pi / length, {sign * scale}});
  }
  return SpectralBasis(geometry, {BoundaryNode{length, 0.0, 1.0}}, std::move(modes));
}

SpectralBasis BuildRectangleBasis(double a, double b, int mode_count,
                                  RectangleQuadrature quadrature)
{
  const Geometry geometry = Geometry::Rectangle(a, b);
  if (mode_count < 1)
  {
    throw std::invalid_argument("mode count must be at least 1");
  }
  if (quadrature.gauss_nodes < 1 || quadrature.panels < 1)
  {
    throw std::invalid_argument("boundary quadrature needs at least one node and panel");
  }

  std::vector<double> gl_x, gl_w;
  GaussLegendre(quadrature.gauss_nodes, gl_x, gl_w);

  // Face {x = a}, y in [0, b], then face {y = b}, x in [0, a].
  std::vector<BoundaryNode> nodes;
  auto add_face = [&](double length, bool vertical)
  {
    const double h = length / quadrature.panels;
    for (int p = 0; p < quadrature.panels; p++)
    {
      for (std::size_t i = 0; i < gl_x.size(); i++)
      {
        const double s = h * (p + 0.5 * (gl_x[i] + 1.0));
        const double w = 0.5 * h * gl_w[i];
        nodes.push_back(vertical ? BoundaryNode{a, s, w} : BoundaryNode{s, b, w});
      }
    }
  };
  add_face(b, true);
  add_face(a, false);

  const double scale = 2.0 / std::sqrt(a * b);
  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(mode_count) * mode_count);
  for (int m = 1; m <= mode_count; m++)
  {
    for (int n = 1; n <= mode_count; n++)
    {
      const double kx = (m - 0.5) * pi / a;
      const double ky = (n - 0.5) * pi / b;
      Mode mode{0, {m, n}, std::hypot(kx, ky), {}};
      mode.trace.reserve(nodes.size());
      for (const auto &node : nodes)
      {
        mode.trace.push_back(scale * std::sin(kx * node.x) * std::sin(ky * node.y));
      }
      modes.push_back(std::move(mode));
    }
  }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const Mode &l, const Mode &r)
                   { return l.mu != r.mu ? l.mu < r.mu : l.labels < r.labels; });
  for (std::size_t k = 0; k < modes.size(); k++)
  {
    modes[k].index = static_cast<int>(k) + 1;
  }
  return SpectralBasis(geometry, std::move(nodes), std::move(modes));
}

SpectralBasis BuildBasis(const Geometry &geometry, int mode_count, RectangleQuadrature quadrature)
{
  geometry.Validate();
  if (geometry.kind == GeometryKind::Interval)
  {
    return BuildIntervalBasis(geometry.lengths[0], mode_count);
  }
  return BuildRectangleBasis(geometry.lengths[0], geometry.lengths[1], mode_count, quadrature);
}

double ControlTimeLowerBound(const Geometry &geometry)
{
  geometry.Validate();
  if (geometry.kind == GeometryKind::Interval)
  {
    return 2.0 * geometry.lengths[0];
  }
  return 2.0 * std::hypot(geometry.lengths[0], geometry.lengths[1]);
}

TraceEstimateReport TraceEstimateCheck(const SpectralBasis &basis)
{
  if (basis.Size() == 0)
  {
    throw std::invalid_argument("trace estimate needs a non-empty basis");
  }
  TraceEstimateReport report;
  for (int k = 0; k < basis.Size(); k++)
  {
    const double ratio = basis.TraceNorm(k) / std::cbrt(basis.Mu(k));
    report.ratios.push_back(ratio);
    if (ratio > report.max_ratio)
    {
      report.max_ratio = ratio;
      report.argmax = k;
    }
  }
  return report;
}

double WeylConstant(const SpectralBasis &basis)
{
  const double d = basis.GetGeometry().Dimension();
  double c = std::numeric_limits<double>::infinity();
  for (int k = 0; k < basis.Size(); k++)
  {
    c = std::min(c, basis.Mu(k) / std::pow(k + 1.0, 1.0 / d));
  }
  return c;
}

void WriteBasisCsv(std::ostream &os, const SpectralBasis &basis)
{
  std::vector<std::string> columns = {"index", "mu"};
  for (int q = 0; q < basis.NodeCount(); q++)
  {
    columns.push_back("node_" + std::to_string(q + 1));
  }
  csv::WriteHeader(os, columns);
  std::vector<double> row;
  for (const auto &mode : basis.Modes())
  {
    row.assign({static_cast<double>(mode.index), mode.mu});
    row.insert(row.end(), mode.trace.begin(), mode.trace.end());
    csv::WriteRow(os, row);
  }
}

}  // namespace viscowave
