#pragma once

#include <vector>

#include "nlb/burgers.hpp"
#include "nlb/field.hpp"
#include "nlb/kernels.hpp"

namespace nlb {

struct SplitConfig {
  double epsilon = 1e-2;
  SampledKernel kernel;
  BurgersConfig burgers;
  double record_every = 0.0;         // snapshot cadence; 0 records only t = 0 and the final time
  std::vector<double> record_times;  // extra snapshot times, merged with the cadence
  double s = 1.0;                    // exponent of the recorded one-sided Hölder measurement

  // Empty when fine; a warning when epsilon * kappa >= 1.
  std::string validate() const;
};

struct Trajectory {
  double s = 1.0;
  double epsilon = 0.0;
  std::vector<double> t;
  std::vector<GridFunction> u;
  std::vector<double> l2, linf, holder, osc;
  // log of the L2 growth accumulated by the kernel steps up to each snapshot
  std::vector<double> kernel_log_growth;

  std::size_t size() const { return t.size(); }
};

GridFunction sk_step(const GridFunction& f, double eps, const SampledKernel& K);

Trajectory split_evolve(const GridFunction& u0, double t, const SplitConfig& cfg);

// Final state only.
GridFunction split_solution(const GridFunction& u0, double t, const SplitConfig& cfg);

struct EntropyResult {
  GridFunction u;
  std::vector<double> eps;   // epsilons run, coarse to fine
  std::vector<double> gaps;  // L1 distance between successive runs
  bool converged = false;
};

EntropyResult entropy_solution(const GridFunction& u0, double t, const SplitConfig& cfg, double tol,
                               int max_halvings = 8);

// At least ceil(3 t kappa) + 10, raised until the remainder is below 1e-12 e^{t kappa}.
int default_series_terms(double t, double kappa);

GridFunction exp_abs_conv(const GridFunction& f, double t, const SampledKernel& K, int terms);

// Remainder bound factor e^{t kappa} - sum_{k<=terms} (t kappa)^k / k!.
double exp_series_remainder(double t, double kappa, int terms);

GridFunction indicator(const Grid& g, Boundary b, double radius);

GridFunction contraction_weight(double r, double M, double t, const SampledKernel& K, Boundary b, int terms);

// e^{2 t kappa} (2 TV(f)^2 + kappa ||f||_1)
double time_continuity_constant(const GridFunction& f, double t, double kappa);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace nlb
