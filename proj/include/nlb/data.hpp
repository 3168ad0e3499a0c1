#pragma once

#include "nlb/field.hpp"

namespace nlb {

// amplitude * exp(-((x - center) / width)^2)
GridFunction gaussian(const Grid& g, Boundary b, double amplitude, double width, double center = 0.0);

// height on |x - center| < width/2, zero elsewhere.
GridFunction square_pulse(const Grid& g, Boundary b, double height, double width, double center = 0.0);

// Decreasing ramp -slope * x on |x| < width/2, zero elsewhere; min u0' = -slope.
GridFunction ramp(const Grid& g, Boundary b, double slope, double width);

// uL for x < x0, uR for x >= x0.
GridFunction step(const Grid& g, Boundary b, double uL, double uR, double x0 = 0.0);

GridFunction sine(const Grid& g, double amplitude, int periods = 1);

}  // namespace nlb
