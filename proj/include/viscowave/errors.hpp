#ifndef VISCOWAVE_ERRORS_HPP
#define VISCOWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace viscowave
{

// Raised by the Volterra marcher when the implicit diagonal factor vanishes.
class StepSizeError : public std::runtime_error
{
public:
  StepSizeError(const std::string &what, int node) : std::runtime_error(what), node_(node) {}

  int Node() const { return node_; }

private:
  int node_;
};

// Raised when a Gram system is numerically singular and no regularization was requested.
class IllPosedSystemError : public std::runtime_error
{
public:
  IllPosedSystemError(const std::string &what, double recommended_ridge)
    : std::runtime_error(what), recommended_ridge_(recommended_ridge)
  {
  }

  double RecommendedRidge() const { return recommended_ridge_; }

private:
  double recommended_ridge_;
};

}  // namespace viscowave

#endif  // VISCOWAVE_ERRORS_HPP
