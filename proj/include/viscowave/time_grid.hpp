#ifndef VISCOWAVE_TIME_GRID_HPP
#define VISCOWAVE_TIME_GRID_HPP

#include <cstddef>

namespace viscowave
{

//
// Uniform grid t_j = j * dt, j = 0..steps, on [0, T].
//
class TimeGrid
{
public:
  TimeGrid(double horizon, int steps);

  // Grid on [0, T] whose spacing is the closest to the requested dt.
  static TimeGrid WithStep(double horizon, double dt);

  double Horizon() const { return horizon_; }
  int Steps() const { return steps_; }
  double Dt() const { return dt_; }
  std::size_t Size() const { return static_cast<std::size_t>(steps_) + 1; }
  double Time(int j) const { return j * dt_; }

  // The same horizon with twice as many steps.
  TimeGrid Refined() const { return TimeGrid(horizon_, 2 * steps_); }

  bool operator==(const TimeGrid &other) const = default;

private:
  double horizon_;
  int steps_;
  double dt_;
};

}  // namespace viscowave

#endif  // VISCOWAVE_TIME_GRID_HPP
