#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "nlb/field.hpp"

namespace nlb {

struct BurgersConfig {
  double cfl = 0.9;
  void validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  }
};

struct CflViolation : std::invalid_argument {
  double admissible_dt;
  CflViolation(const std::string& what, double dt) : std::invalid_argument(what), admissible_dt(dt) {}
};

constexpr double tiny = 1e-300;

// Exact entropy solution of the Burgers Riemann problem at xi = x/t.
double riemann(double uL, double uR, double xi);

// Godunov interface flux.
inline double godunov_flux(double a, double b) {
  const double l = a > 0.0 ? a : 0.0, r = b < 0.0 ? b : 0.0;
  return 0.5 * std::max(l * l, r * r);
}

double max_admissible_dt(const GridFunction& f, const BurgersConfig& cfg);

GridFunction burgers_step(const GridFunction& f, double dt, const BurgersConfig& cfg = {});

// Called after every substep with the state before and after.
using StepObserver = std::function<void(const GridFunction& before, const GridFunction& after, double dt)>;

GridFunction burgers_evolve(const GridFunction& f, double t, const BurgersConfig& cfg = {},
                            const StepObserver& observe = {});

}  // namespace nlb
