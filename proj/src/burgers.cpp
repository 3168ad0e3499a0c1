#include "nlb/burgers.hpp"

#include <sstream>

namespace nlb {

double riemann(double uL, double uR, double xi) {
  if (uL > uR) return xi < 0.5 * (uL + uR) ? uL : uR;
  if (xi <= uL) return uL;
  if (xi >= uR) return uR;
  return xi;
}

double max_admissible_dt(const GridFunction& f, const BurgersConfig& cfg) {
  return cfg.cfl * f.dx() / std::max(f.values.cwiseAbs().maxCoeff(), tiny);
}

GridFunction burgers_step(const GridFunction& f, double dt, const BurgersConfig& cfg) {
  cfg.validate();
  if (dt < 0.0) throw std::invalid_argument("burgers_step needs dt >= 0");
  const double limit = max_admissible_dt(f, cfg);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violation: dt=" << dt << " exceeds admissible dt=" << limit;
    throw CflViolation(msg.str(), limit);
  }
  const int n = f.n();
  const double* u = f.values.data();
  const double lam = dt / f.dx();
  // flux[j] sits at interface j - 1/2
  Eigen::VectorXd flux(n + 1);
  const bool periodic = f.boundary == Boundary::periodic;
  const double ghost_left = periodic ? u[n - 1] : 0.0;
  const double ghost_right = periodic ? u[0] : 0.0;
  flux[0] = godunov_flux(ghost_left, u[0]);
  for (int j = 1; j < n; ++j) flux[j] = godunov_flux(u[j - 1], u[j]);
  flux[n] = periodic ? flux[0] : godunov_flux(u[n - 1], ghost_right);
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) out[j] = u[j] - lam * (flux[j + 1] - flux[j]);
  return GridFunction(std::move(out), f.grid, f.boundary);
}

GridFunction burgers_evolve(const GridFunction& f, double t, const BurgersConfig& cfg, const StepObserver& observe) {
  if (t < 0.0) throw std::invalid_argument("burgers_evolve needs t >= 0");
  GridFunction u = f;
  double remaining = t;
  while (remaining > 0.0) {
    const double dt_max = max_admissible_dt(u, cfg);
    const double dt = dt_max >= remaining ? remaining : dt_max;
    GridFunction next = burgers_step(u, dt, cfg);
    if (observe) observe(u, next, dt);
    u = std::move(next);
    remaining = dt == remaining ? 0.0 : remaining - dt;
  }
  return u;
}

}  // namespace nlb
