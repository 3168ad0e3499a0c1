#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlb/coefficients.hpp"
#include "nlb/splitting.hpp"

namespace nlb {

struct BoundRow {
  double t = 0.0, measured = 0.0, bound = 0.0, margin = 0.0, slack = 0.0;
};

struct BoundReport {
  std::string name;
  std::vector<BoundRow> rows;
  std::string slack_rule;  // how each row's allowance was formed
  bool pass = true;

  // margin >= -slack on every row
  bool recompute_pass();
  double worst_relative_margin() const;  // min over rows of (margin + slack) / max(bound, tiny)
};

std::string report_json(const BoundReport& r);
void write_report_json(const std::string& path, const BoundReport& r);
void write_report_csv(const std::string& path, const BoundReport& r);

// kappa_s measured on the sampled kernel, mu = ||u0||_2, kappa = ||K||_1.
TheoryParams measured_params(const SampledKernel& K, const GridFunction& u0, double s);

// Right one-sided Hölder seminorm vs the chosen coefficient; t = 0 rows skipped.
// Slack per row: 5% of the bound plus dx^{(1-s)/2}.
BoundReport verify_holder(const Trajectory& traj, const TheoryParams& p, HolderVariant use);

// ||u(t)||_inf vs min(height bound, e^{t kappa} ||u0||_inf) with 5% slack.
BoundReport verify_height(const Trajectory& traj, const TheoryParams& p);

// ||u(t)||_2 vs e^{eps t kappa^2 / 2} ||u0||_2, slack 1e-10 relative.
BoundReport verify_l2(const Trajectory& traj, const TheoryParams& p, double eps);

// Richardson extrapolation in epsilon of ||u(t)||_2 from runs at eps and eps/2
// against ||u0||_2 (1 + 1e-6).
BoundReport verify_l2_limit(const GridFunction& u0, double t_final, const SplitConfig& cfg);

// Integral of |u - v| over (-r, r) at each time vs the weighted initial distance.
// Needs zero_extended fields. Slack (5% + eps) of the right side.
BoundReport verify_contraction(const GridFunction& u0, const GridFunction& v0, const std::vector<double>& times,
                               double r, const SplitConfig& cfg);

// Self-convergence: relative L1 gap between a run and its (2n, eps/2) refinement,
// the fine field restricted to the coarse cells with weights 1/4, 1/2, 1/4.
// Bound is `tolerance`, no slack.
BoundReport verify_resolution(const Trajectory& coarse, const Trajectory& fine, double tolerance = 0.05);

// Restriction of a field on 2n cells to the n-cell grid of the same half-width.
GridFunction restrict_to_coarse(const GridFunction& fine);

struct BreakingResult {
  bool applicable = false;
  double holder_left = 0.0;
  double threshold = 0.0;  // skewness threshold on [u0]_s^{3+2s}
  double T_bound = 0.0;
  std::optional<double> observed;  // first time with a forward difference below -1 (slope -1/dx)
  bool consistent = false;         // observed <= 1.25 T_bound
};

// Evolves until the steepening proxy fires or t_max (default 2 T_bound) passes.
BreakingResult breaking_experiment(const GridFunction& u0, const SplitConfig& cfg, const TheoryParams& p, double rho,
                                   std::optional<double> t_max = std::nullopt);

// First time a split run of u0 shows a forward difference below -1, searched up to t_max.
std::optional<double> steepening_time(const GridFunction& u0, const SplitConfig& cfg, double t_max);

}  // namespace nlb
