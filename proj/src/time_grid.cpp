#include "viscowave/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace viscowave
{

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps)
{
  if (!(horizon > 0.0) || !std::isfinite(horizon))
  {
    throw std::invalid_argument("time grid horizon must be positive and finite");
  }
  if (steps < 2)
  {
    throw std::invalid_argument("time grid needs at least 2 steps");
  }
  dt_ = horizon / steps;
}

TimeGrid TimeGrid::WithStep(double horizon, double dt)
{
  if (!(dt > 0.0))
  {
    throw std::invalid_argument("time step must be positive");
  }
  return TimeGrid(horizon, static_cast<int>(std::lround(horizon / dt)));
}

}  // namespace viscowave
