#include "nlb/data.hpp"

#include <cmath>
#include <numbers>

namespace nlb {

GridFunction gaussian(const Grid& g, Boundary b, double amplitude, double width, double center) {
  return sample(g, b, [&](double x) {
    const double z = (x - center) / width;
    return amplitude * std::exp(-z * z);
  });
}

GridFunction square_pulse(const Grid& g, Boundary b, double height, double width, double center) {
  return sample(g, b, [&](double x) { return std::abs(x - center) < 0.5 * width ? height : 0.0; });
}

GridFunction ramp(const Grid& g, Boundary b, double slope, double width) {
  return sample(g, b, [&](double x) { return std::abs(x) < 0.5 * width ? -slope * x : 0.0; });
}

GridFunction step(const Grid& g, Boundary b, double uL, double uR, double x0) {
  return sample(g, b, [&](double x) { return x < x0 ? uL : uR; });
}

GridFunction sine(const Grid& g, double amplitude, int periods) {
  return sample(g, Boundary::periodic,
                [&](double x) { return amplitude * std::sin(std::numbers::pi * periods * (x + g.L) / g.L); });
}

}  // namespace nlb
