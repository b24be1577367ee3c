#ifndef VISCOWAVE_SPECTRAL_BASIS_HPP
#define VISCOWAVE_SPECTRAL_BASIS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace viscowave
{

enum class GeometryKind
{
  Interval,
  Rectangle
};

//
// Domain description. The Dirichlet part of the boundary is {x = 0} (interval) or the
// faces {x = 0} and {y = 0} (rectangle); the controlled Neumann part is the opposite
// end / faces.
//
struct Geometry
{
  GeometryKind kind = GeometryKind::Interval;
  std::vector<double> lengths = {1.0};

  static Geometry Interval(double length);
  static Geometry Rectangle(double a, double b);

  int Dimension() const { return kind == GeometryKind::Interval ? 1 : 2; }
  void Validate() const;
  std::string Describe() const;
};

// A point on the controlled boundary together with its quadrature weight.
struct BoundaryNode
{
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
};

struct Mode
{
  int index = 0;            // position in the sorted list, 1-based
  std::vector<int> labels;  // (n) on the interval, (m, n) on the rectangle
  double mu = 0.0;          // square root of the Laplacian eigenvalue
  std::vector<double> trace;  // unit-norm eigenfunction at each boundary node
};

struct RectangleQuadrature
{
  int gauss_nodes = 8;  // per panel
  int panels = 1;       // per face
};

//
// Eigenpairs of the mixed Dirichlet/Neumann Laplacian, sorted by mu (ties broken by
// the lexicographic order of the labels), together with the boundary quadrature on the
// controlled part of the boundary. Immutable after construction.
//
class SpectralBasis
{
public:
  SpectralBasis(Geometry geometry, std::vector<BoundaryNode> nodes, std::vector<Mode> modes);

  const Geometry &GetGeometry() const { return geometry_; }
  const std::vector<BoundaryNode> &Nodes() const { return nodes_; }
  const std::vector<Mode> &Modes() const { return modes_; }
  int Size() const { return static_cast<int>(modes_.size()); }
  int NodeCount() const { return static_cast<int>(nodes_.size()); }
  double Mu(int k) const { return modes_[k].mu; }

  // The first `count` modes, same quadrature.
  SpectralBasis Truncated(int count) const;

  // Quadrature of trace_k * trace_l over the controlled boundary.
  double BoundaryProduct(int k, int l) const;
  double TraceNorm(int k) const;

private:
  Geometry geometry_;
  std::vector<BoundaryNode> nodes_;
  std::vector<Mode> modes_;
};

SpectralBasis BuildIntervalBasis(double length, int mode_count);

// All mode_count x mode_count tensor modes, sorted.
SpectralBasis BuildRectangleBasis(double a, double b, int mode_count,
                                  RectangleQuadrature quadrature = {});

SpectralBasis BuildBasis(const Geometry &geometry, int mode_count,
                         RectangleQuadrature quadrature = {});

// Twice the radius of the domain seen from the admissible multiplier point: the point
// must illuminate only the controlled boundary, so x0 = 0 (interval) or the corner
// (0, 0) (rectangle).
double ControlTimeLowerBound(const Geometry &geometry);

struct TraceEstimateReport
{
  std::vector<double> ratios;  // ||trace_k|| / mu_k^(1/3)
  double max_ratio = 0.0;
  int argmax = 0;
};

TraceEstimateReport TraceEstimateCheck(const SpectralBasis &basis);

// min_k mu_k / k^(1/d): the largest c with mu_k >= c k^(1/d) on the stored modes.
double WeylConstant(const SpectralBasis &basis);

// CSV with columns index, mu, node_1, ...
void WriteBasisCsv(std::ostream &os, const SpectralBasis &basis);

// Gauss-Legendre nodes and weights on [-1, 1].
void GaussLegendre(int n, std::vector<double> &nodes, std::vector<double> &weights);

}  // namespace viscowave

#endif  // VISCOWAVE_SPECTRAL_BASIS_HPP
