#include "nlb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "nlb/io.hpp"

namespace nlb {

bool BoundReport::recompute_pass() {
  pass = std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.margin >= -r.slack; });
  return pass;
}

double BoundReport::worst_relative_margin() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) worst = std::min(worst, (r.margin + r.slack) / std::max(std::abs(r.bound), 1e-300));
  return worst;
}

std::string report_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["slack"] = r.slack_rule;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"t", row.t}, {"measured", row.measured}, {"bound", row.bound}, {"margin", row.margin},
                    {"slack", row.slack}});
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const BoundReport& r) { write_atomic(path, report_json(r)); }

void write_report_csv(const std::string& path, const BoundReport& r) {
  std::ostringstream out;
  out << "# name=" << r.name << " pass=" << (r.pass ? "true" : "false") << "\n";
  out << "t,measured,bound,margin,slack\n";
  for (const auto& row : r.rows)
    out << fmt(row.t) << "," << fmt(row.measured) << "," << fmt(row.bound) << "," << fmt(row.margin) << ","
        << fmt(row.slack) << "\n";
  write_atomic(path, out.str());
}

TheoryParams measured_params(const SampledKernel& K, const GridFunction& u0, double s) {
  TheoryParams p;
  p.s = s;
  p.kappa_s = K.is_zero() ? 0.0 : fractional_variation(K, s).value;
  p.mu = lp_norm(u0, 2.0);
  p.kappa = l1_norm(K);
  return p;
}

namespace {

void add_row(BoundReport& r, double t, double measured, double bound, double slack) {
  r.rows.push_back({t, measured, bound, bound - measured, slack});
}

const char* variant_name(HolderVariant v) {
  switch (v) {
    case HolderVariant::simple: return "simple";
    case HolderVariant::sharp: return "sharp";
    case HolderVariant::b_exact: return "b_exact";
  }
  return "?";
}

}  // namespace

BoundReport verify_holder(const Trajectory& traj, const TheoryParams& p, HolderVariant use) {
  if (std::abs(traj.s - p.s) > 1e-15) throw std::invalid_argument("trajectory measured with a different s");
  BoundReport r;
  r.name = std::string("holder_") + variant_name(use);
  r.slack_rule = "0.05*bound + dx^((1-s)/2)";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.t[k] <= 0.0) continue;
    const double bound = holder_coeff(traj.t[k], p, use);
    const double grid = std::pow(traj.u[k].dx(), 0.5 * (1.0 - p.s));
    add_row(r, traj.t[k], traj.holder[k], bound, 0.05 * bound + grid);
  }
  r.recompute_pass();
  return r;
}

BoundReport verify_height(const Trajectory& traj, const TheoryParams& p) {
  BoundReport r;
  r.name = "height";
  r.slack_rule = "0.05*bound";
  if (traj.size() == 0) return r;
  const double u0_inf = traj.linf.front();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.t[k];
    double bound = std::exp(t * p.kappa) * u0_inf;
    if (t > 0.0 && p.mu > 0.0) bound = std::min(bound, height_bound(t, p));
    add_row(r, t, traj.linf[k], bound, 0.05 * bound);
  }
  r.recompute_pass();
  return r;
}

BoundReport verify_l2(const Trajectory& traj, const TheoryParams& p, double eps) {
  BoundReport r;
  r.name = "l2_split";
  r.slack_rule = "1e-10*bound";
  if (traj.size() == 0) return r;
  const double u0 = traj.l2.front();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double bound = std::exp(0.5 * eps * traj.t[k] * p.kappa * p.kappa) * u0;
    add_row(r, traj.t[k], traj.l2[k], bound, 1e-10 * bound);
  }
  r.recompute_pass();
  return r;
}

BoundReport verify_l2_limit(const GridFunction& u0, double t_final, const SplitConfig& cfg) {
  SplitConfig half = cfg;
  half.epsilon *= 0.5;
  const Trajectory a = split_evolve(u0, t_final, cfg), b = split_evolve(u0, t_final, half);
  BoundReport r;
  r.name = "l2_limit";
  r.slack_rule = "none; bound is ||u0||_2 (1 + 1e-6)";
  const double bound = lp_norm(u0, 2.0) * (1.0 + 1e-6);
  for (std::size_t k = 0; k < a.size(); ++k) add_row(r, a.t[k], 2.0 * b.l2[k] - a.l2[k], bound, 0.0);
  r.recompute_pass();
  return r;
}

BoundReport verify_contraction(const GridFunction& u0, const GridFunction& v0, const std::vector<double>& times,
                               double r, const SplitConfig& cfg) {
  if (u0.boundary != Boundary::zero_extended || v0.boundary != Boundary::zero_extended)
    throw std::invalid_argument("verify_contraction needs zero_extended fields");
  if (!u0.same_grid(v0)) throw std::invalid_argument("contraction pair on different grids");
  if (!(r > 0.0)) throw std::invalid_argument("contraction radius must be positive");
  SplitConfig c = cfg;
  c.record_every = 0.0;
  c.record_times = times;
  const double t_end = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
  const Trajectory tu = split_evolve(u0, t_end, c), tv = split_evolve(v0, t_end, c);
  const double kappa = l1_norm(cfg.kernel);
  const double sup0 = std::max(lp_norm(u0, inf_norm), lp_norm(v0, inf_norm));
  const Eigen::VectorXd d0 = (u0.values - v0.values).cwiseAbs();
  BoundReport rep;
  rep.name = "contraction";
  rep.slack_rule = "(0.05 + epsilon)*bound";
  for (double t : times) {
    const auto k = static_cast<std::size_t>(std::find(tu.t.begin(), tu.t.end(), t) - tu.t.begin());
    if (k >= tu.size()) throw std::logic_error("contraction time missing from trajectory");
    double lhs = 0.0;
    for (int j = 0; j < u0.n(); ++j)
      if (std::abs(u0.x(j)) < r) lhs += std::abs(tu.u[k].values[j] - tv.u[k].values[j]);
    lhs *= u0.dx();
    const double M = std::exp(t * kappa) * sup0;
    const GridFunction w =
        contraction_weight(r, M, t, cfg.kernel, Boundary::zero_extended, default_series_terms(t, kappa));
    const double rhs = u0.dx() * d0.dot(w.values);
    add_row(rep, t, lhs, rhs, (0.05 + cfg.epsilon) * rhs);
  }
  rep.recompute_pass();
  return rep;
}

GridFunction restrict_to_coarse(const GridFunction& fine) {
  if (fine.n() % 4 != 0) throw std::invalid_argument("restriction needs n divisible by 4");
  const int n = fine.n() / 2;
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j)
    v[j] = 0.25 * value_at(fine, 2L * j - 1) + 0.5 * fine.values[2 * j] + 0.25 * fine.values[2 * j + 1];
  return GridFunction(v, Grid{fine.grid.L, n}, fine.boundary);
}

BoundReport verify_resolution(const Trajectory& coarse, const Trajectory& fine, double tolerance) {
  if (coarse.t != fine.t) throw std::invalid_argument("resolution check needs matching snapshot times");
  BoundReport r;
  r.name = "resolution";
  r.slack_rule = "none";
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const GridFunction f = restrict_to_coarse(fine.u[k]);
    if (!(f.grid == coarse.u[k].grid)) throw std::invalid_argument("fine run is not a 2x refinement");
    const double dx = f.dx();
    const double gap = lp_norm(Eigen::VectorXd(coarse.u[k].values - f.values), dx, 1.0);
    const double ref = lp_norm(f, 1.0);
    add_row(r, coarse.t[k], ref > 0.0 ? gap / ref : gap, tolerance, 0.0);
  }
  r.recompute_pass();
  return r;
}

namespace {

double min_forward_difference(const GridFunction& f) {
  const auto& v = f.values;
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j + 1 < f.n(); ++j) m = std::min(m, v[j + 1] - v[j]);
  return m;
}

}  // namespace

std::optional<double> steepening_time(const GridFunction& u0, const SplitConfig& cfg, double t_max) {
  cfg.validate();
  if (min_forward_difference(u0) < -1.0) return 0.0;
  GridFunction state = u0;
  double clock = 0.0;
  std::optional<double> hit;
  StepObserver watch = [&](const GridFunction&, const GridFunction& after, double dt) {
    clock += dt;
    if (!hit && min_forward_difference(after) < -1.0) hit = clock;
  };
  while (!hit && clock < t_max) {
    const double step = std::min(cfg.epsilon, t_max - clock);
    const double start = clock;
    state = burgers_evolve(state, step, cfg.burgers, watch);
    clock = start + step;
    if (hit) break;
    state = sk_step(state, step, cfg.kernel);
    if (min_forward_difference(state) < -1.0) hit = clock;
  }
  return hit;
}

BreakingResult breaking_experiment(const GridFunction& u0, const SplitConfig& cfg, const TheoryParams& p, double rho,
                                   std::optional<double> t_max) {
  BreakingResult res;
  res.holder_left = one_sided_holder(u0, p.s, Side::left);
  TheoryParams q = p;
  q.mu = lp_norm(u0, 2.0);
  res.threshold = skewness_threshold(q, rho);
  const auto T = lifespan_bound(q.mu, std::max(res.holder_left, 0.0), q, rho);
  if (!T) return res;
  res.applicable = true;
  res.T_bound = *T;
  res.observed = steepening_time(u0, cfg, t_max.value_or(2.0 * res.T_bound));
  res.consistent = res.observed && *res.observed <= 1.25 * res.T_bound;
  return res;
}

}  // namespace nlb
