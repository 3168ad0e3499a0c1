#include "nlb/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlb/io.hpp"

namespace nlb {

std::string SplitConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("splitting epsilon must be positive");
  burgers.validate();
  if (epsilon * kernel.kappa >= 1.0) {
    std::ostringstream msg;
    msg << "epsilon*kappa = " << epsilon * kernel.kappa << " >= 1; the kernel step is far from its linearization";
    return msg.str();
  }
  return {};
}

GridFunction sk_step(const GridFunction& f, double eps, const SampledKernel& K) {
  if (eps < 0.0) throw std::invalid_argument("sk_step needs eps >= 0");
  if (eps == 0.0 || K.is_zero()) {
    if (!(K.grid == f.grid)) throw std::invalid_argument("kernel and field grids differ");
    return f;
  }
  GridFunction c = convolve(K, f);
  c.values = f.values + eps * c.values;
  return c;
}

namespace {

std::vector<double> snapshot_times(double t, const SplitConfig& cfg) {
  std::vector<double> ts{0.0, t};
  if (cfg.record_every > 0.0) {
    for (long k = 1;; ++k) {
      const double tk = k * cfg.record_every;
      if (tk >= t) break;
      ts.push_back(tk);
    }
  }
  for (double r : cfg.record_times)
    if (r >= 0.0 && r <= t) ts.push_back(r);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

void record(Trajectory& traj, double t, GridFunction u, double log_growth) {
  traj.t.push_back(t);
  traj.l2.push_back(lp_norm(u, 2.0));
  traj.linf.push_back(lp_norm(u, inf_norm));
  traj.holder.push_back(one_sided_holder(u, traj.s, Side::right));
  traj.osc.push_back(osc_half(u));
  traj.kernel_log_growth.push_back(log_growth);
  traj.u.push_back(std::move(u));
}

template <class OnSnapshot>
void run_split(const GridFunction& u0, double t, const SplitConfig& cfg, const std::vector<double>& times,
               OnSnapshot&& on_snapshot) {
  if (t < 0.0) throw std::invalid_argument("split_evolve needs t >= 0");
  cfg.validate();
  const double eps = cfg.epsilon;
  GridFunction state = u0;
  long rounds = 0;
  double log_growth = 0.0;
  if (cfg.kernel.is_zero()) {
    // S^K is the identity, so S_{eps,t} is the Burgers flow; no eps partition
    double clock = 0.0;
    for (double tau : times) {
      state = burgers_evolve(state, tau - clock, cfg.burgers);
      clock = tau;
      on_snapshot(tau, state, 0.0);
    }
    return;
  }
  for (double tau : times) {
    const long target = static_cast<long>(std::floor(tau / eps + 1e-9));
    while (rounds < target) {
      GridFunction b = burgers_evolve(state, eps, cfg.burgers);
      state = sk_step(b, eps, cfg.kernel);
      const double before = lp_norm(b, 2.0);
      if (before > 0.0) log_growth += std::log(lp_norm(state, 2.0) / before);
      ++rounds;
    }
    const double rest = std::max(0.0, tau - rounds * eps);
    on_snapshot(tau, burgers_evolve(state, rest, cfg.burgers), log_growth);
  }
}

}  // namespace

Trajectory split_evolve(const GridFunction& u0, double t, const SplitConfig& cfg) {
  Trajectory traj;
  traj.s = cfg.s;
  traj.epsilon = cfg.epsilon;
  run_split(u0, t, cfg, snapshot_times(t, cfg),
            [&](double tau, GridFunction u, double g) { record(traj, tau, std::move(u), g); });
  return traj;
}

GridFunction split_solution(const GridFunction& u0, double t, const SplitConfig& cfg) {
  GridFunction out;
  run_split(u0, t, cfg, {t}, [&](double, GridFunction u, double) { out = std::move(u); });
  return out;
}

EntropyResult entropy_solution(const GridFunction& u0, double t, const SplitConfig& cfg, double tol,
                               int max_halvings) {
  if (!(tol > 0.0)) throw std::invalid_argument("entropy_solution needs tol > 0");
  EntropyResult res;
  SplitConfig c = cfg;
  GridFunction prev = split_solution(u0, t, c);
  res.eps.push_back(c.epsilon);
  for (int k = 0; k < max_halvings; ++k) {
    c.epsilon *= 0.5;
    GridFunction next = split_solution(u0, t, c);
    res.eps.push_back(c.epsilon);
    const double gap = lp_norm(Eigen::VectorXd(next.values - prev.values), u0.dx(), 1.0);
    res.gaps.push_back(gap);
    prev = std::move(next);
    if (gap < tol) {
      res.converged = true;
      break;
    }
  }
  res.u = std::move(prev);
  return res;
}

int default_series_terms(double t, double kappa) {
  // ceil(3 t kappa) + 10 alone leaves ~1e-11 relative at t kappa ~ 1; extend until the
  // remainder is below 1e-12 e^{t kappa}
  int terms = static_cast<int>(std::ceil(3.0 * t * kappa)) + 10;
  const double cap = 1e-12 * std::exp(t * kappa);
  while (exp_series_remainder(t, kappa, terms) >= cap) ++terms;
  return terms;
}

GridFunction exp_abs_conv(const GridFunction& f, double t, const SampledKernel& K, int terms) {
  if (terms < 1) throw std::invalid_argument("exp_abs_conv needs terms >= 1");
  GridFunction out = f;
  if (t == 0.0 || K.is_zero()) return out;
  const SampledKernel A = abs_kernel(K);
  GridFunction term = f;
  for (int k = 1; k <= terms; ++k) {
    term = convolve(A, term);
    term.values *= t / k;
    out.values += term.values;
  }
  return out;
}

double exp_series_remainder(double t, double kappa, int terms) {
  const double x = t * kappa;
  double term = 1.0;
  for (int k = 0; k <= terms; ++k) term *= x / (k + 1);
  // tail summed directly; e^x minus the partial sum would cancel
  double tail = 0.0;
  for (int k = terms + 1; k < terms + 400 && term > 0.0; ++k) {
    tail += term;
    term *= x / (k + 1);
    if (term < 1e-300) break;
  }
  return tail;
}

GridFunction indicator(const Grid& g, Boundary b, double radius) {
  return sample(g, b, [&](double x) { return std::abs(x) < radius ? 1.0 : 0.0; });
}

GridFunction contraction_weight(double r, double M, double t, const SampledKernel& K, Boundary b, int terms) {
  if (r < 0.0 || M < 0.0 || t < 0.0) throw std::invalid_argument("contraction_weight needs r, M, t >= 0");
  return exp_abs_conv(indicator(K.grid, b, r + M * t), t, K, terms);
}

double time_continuity_constant(const GridFunction& f, double t, double kappa) {
  const double tv = total_variation(f);
  return std::exp(2.0 * t * kappa) * (2.0 * tv * tv + kappa * lp_norm(f, 1.0));
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream out;
  out << "t,l2,linf,holder_s,osc\n";
  for (std::size_t k = 0; k < traj.size(); ++k)
    out << fmt(traj.t[k]) << "," << fmt(traj.l2[k]) << "," << fmt(traj.linf[k]) << "," << fmt(traj.holder[k]) << ","
        << fmt(traj.osc[k]) << "\n";
  write_atomic(path, out.str());
}

}  // namespace nlb
