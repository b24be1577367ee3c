#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include "viscowave/spectral_basis.hpp"

using namespace viscowave;
using std::numbers::pi;

TEST_CASE("interval eigenvalues and traces")
{
  const auto basis = BuildIntervalBasis(1.0, 3);
  REQUIRE(basis.Size() == 3);
  REQUIRE(basis.NodeCount() == 1);
  CHECK(basis.Mu(0) == doctest::Approx(1.5707963).epsilon(1e-7));
  CHECK(basis.Mu(1) == doctest::Approx(4.7123890).epsilon(1e-7));
  CHECK(basis.Mu(2) == doctest::Approx(7.8539816).epsilon(1e-7));
  CHECK(basis.Modes()[0].trace[0] == doctest::Approx(1.4142136).epsilon(1e-7));
  CHECK(basis.Modes()[1].trace[0] == doctest::Approx(-1.4142136).epsilon(1e-7));
  CHECK(basis.Modes()[2].trace[0] == doctest::Approx(1.4142136).epsilon(1e-7));
  CHECK(basis.Nodes()[0].x == 1.0);
  CHECK(basis.Nodes()[0].weight == 1.0);
}

TEST_CASE("interval of length 2 is normalized")
{
  const auto basis = BuildIntervalBasis(2.0, 1);
  CHECK(basis.Mu(0) == doctest::Approx(pi / 4));
  // int_0^2 (2/L) sin^2(mu x) dx = 1 - sin(2 mu L) / (2 mu L) = 1 since 2 mu L = pi
  const double mu = basis.Mu(0);
  CHECK(1.0 - std::sin(2 * mu * 2.0) / (2 * mu * 2.0) == doctest::Approx(1.0));
  CHECK(basis.Modes()[0].trace[0] == doctest::Approx(1.0));
}

TEST_CASE("invalid interval arguments")
{
  CHECK_THROWS_AS(BuildIntervalBasis(0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(BuildIntervalBasis(-1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(BuildIntervalBasis(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BuildRectangleBasis(1.0, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(BuildRectangleBasis(1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("rectangle eigenvalues")
{
  const auto one = BuildRectangleBasis(1.0, 1.0, 1);
  CHECK(one.Mu(0) == doctest::Approx(2.2214415).epsilon(1e-7));

  const auto two = BuildRectangleBasis(1.0, 1.0, 2);
  REQUIRE(two.Size() == 4);
  CHECK(two.Mu(0) == doctest::Approx(pi / std::sqrt(2.0)));
  CHECK(two.Mu(1) == doctest::Approx(pi * std::sqrt(10.0) / 2).epsilon(1e-14));
  CHECK(two.Mu(2) == doctest::Approx(4.9672941).epsilon(1e-7));
  // degenerate pair ordered by labels
  CHECK(two.Modes()[1].labels == std::vector<int>{1, 2});
  CHECK(two.Modes()[2].labels == std::vector<int>{2, 1});
  for (int k = 0; k < two.Size(); k++)
  {
    CHECK(two.Modes()[k].index == k + 1);
  }
}

TEST_CASE("rectangle boundary quadrature")
{
  const auto basis = BuildRectangleBasis(1.0, 1.0, 1);
  CHECK(basis.NodeCount() == 16);
  // (2 sin(pi x/2) sin(pi y/2))^2 on {x=1} and {y=1}: each face contributes
  // int_0^1 4 sin^2(pi t/2) dt = 2.
  CHECK(basis.BoundaryProduct(0, 0) == doctest::Approx(4.0).epsilon(1e-12));

  double length = 0.0;
  for (const auto &node : basis.Nodes())
  {
    length += node.weight;
  }
  CHECK(length == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("rectangle quadrature is configurable")
{
  const auto coarse = BuildRectangleBasis(2.0, 1.0, 3, {4, 1});
  const auto fine = BuildRectangleBasis(2.0, 1.0, 3, {12, 4});
  CHECK(coarse.NodeCount() == 8);
  CHECK(fine.NodeCount() == 96);
  for (int k = 0; k < fine.Size(); k++)
  {
    // (4/(ab)) * length/2 per face; the perpendicular sine is +-1 on each controlled face
    CHECK(fine.BoundaryProduct(k, k) == doctest::Approx(2.0 / 2.0 + 2.0 / 1.0).epsilon(1e-10));
  }
}

TEST_CASE("Gauss-Legendre rule integrates polynomials")
{
  std::vector<double> x, w;
  for (int n : {1, 2, 5, 8, 13})
  {
    GaussLegendre(n, x, w);
    for (int p = 0; p < 2 * n; p++)
    {
      double sum = 0.0;
      for (int i = 0; i < n; i++)
      {
        sum += w[i] * std::pow(x[i], p);
      }
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS(GaussLegendre(0, x, w));
}

TEST_CASE("control time lower bound")
{
  CHECK(ControlTimeLowerBound(Geometry::Interval(1.0)) == doctest::Approx(2.0));
  CHECK(ControlTimeLowerBound(Geometry::Interval(0.5)) == doctest::Approx(1.0));
  CHECK(ControlTimeLowerBound(Geometry::Rectangle(1.0, 1.0)) == doctest::Approx(2.8284271));
  // linear under dilation
  CHECK(ControlTimeLowerBound(Geometry::Rectangle(3.0, 1.5)) ==
        doctest::Approx(3.0 * ControlTimeLowerBound(Geometry::Rectangle(1.0, 0.5))));
  CHECK_THROWS_AS(Geometry::Interval(0.0), std::invalid_argument);
}

TEST_CASE("trace estimate")
{
  const auto basis = BuildIntervalBasis(1.0, 10);
  const auto report = TraceEstimateCheck(basis);
  CHECK(report.argmax == 0);
  CHECK(report.max_ratio == doctest::Approx(std::sqrt(2.0) / std::cbrt(pi / 2)).epsilon(1e-12));
  CHECK(report.max_ratio == doctest::Approx(1.21658).epsilon(1e-5));
  for (std::size_t k = 1; k < report.ratios.size(); k++)
  {
    CHECK(report.ratios[k] < report.ratios[k - 1]);
  }

  const auto single = TraceEstimateCheck(BuildIntervalBasis(0.7, 1));
  CHECK(single.max_ratio == doctest::Approx(std::sqrt(2.0 / 0.7) / std::cbrt(pi / 1.4)));

  const auto rect = TraceEstimateCheck(BuildRectangleBasis(1.0, 1.0, 3));
  CHECK(std::isfinite(rect.max_ratio));
  CHECK(rect.max_ratio > 0.0);
}

TEST_CASE("Weyl growth")
{
  const auto interval = BuildIntervalBasis(1.3, 40);
  const double c = WeylConstant(interval);
  CHECK(c == doctest::Approx(pi / (2 * 1.3)));
  for (int k = 0; k < interval.Size(); k++)
  {
    CHECK(interval.Mu(k) >= c * (k + 1) * (1 - 1e-14));
  }
  const auto rect = BuildRectangleBasis(1.0, 2.0, 6);
  const double cr = WeylConstant(rect);
  CHECK(cr > 0.0);
  for (int k = 0; k < rect.Size(); k++)
  {
    CHECK(rect.Mu(k) >= cr * std::sqrt(k + 1.0) * (1 - 1e-14));
    if (k > 0)
    {
      CHECK(rect.Mu(k) >= rect.Mu(k - 1));
    }
  }
}

TEST_CASE("truncation keeps the quadrature")
{
  const auto basis = BuildRectangleBasis(1.0, 1.0, 3);
  const auto first = basis.Truncated(4);
  CHECK(first.Size() == 4);
  CHECK(first.NodeCount() == basis.NodeCount());
  CHECK(first.Mu(3) == basis.Mu(3));
  CHECK_THROWS_AS(basis.Truncated(0), std::invalid_argument);
  CHECK_THROWS_AS(basis.Truncated(10), std::invalid_argument);
}

TEST_CASE("basis csv")
{
  std::ostringstream os;
  WriteBasisCsv(os, BuildIntervalBasis(1.0, 2));
  const std::string text = os.str();
  CHECK(text.rfind("index,mu,node_1\n", 0) == 0);
  CHECK(text.find("1,1.5707963267948966,1.4142135623730951") != std::string::npos);
}
