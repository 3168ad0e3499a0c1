#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlb/data.hpp"
#include "nlb/splitting.hpp"

using namespace nlb;

namespace {

GridFunction random_field(const Grid& g, unsigned seed, Boundary b = Boundary::periodic) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd v(g.n);
  for (int j = 0; j < g.n; ++j) v[j] = d(rng);
  return GridFunction(v, g, b);
}

SplitConfig config(const SampledKernel& K, double eps) {
  SplitConfig c;
  c.kernel = K;
  c.epsilon = eps;
  return c;
}

double l1_distance(const GridFunction& a, const GridFunction& b) {
  return lp_norm(Eigen::VectorXd(a.values - b.values), a.dx(), 1.0);
}

// Kruzkov residual  int int |u-k| phi_t + q(u,k) phi_x + sgn(u-k) (K*u) phi  for
// phi = sin^2(pi t / T) exp(-x^2), from snapshots every dt (trapezoid in time).
double kruzkov_residual(const Trajectory& tr, const SampledKernel& K, double k, double T) {
  double total = 0.0;
  const double w = std::numbers::pi / T;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.t[i];
    const double weight = (i == 0 || i + 1 == tr.size()) ? 0.5 : 1.0;
    const double dt = tr.t[1] - tr.t[0];
    const auto& u = tr.u[i];
    const GridFunction Ku = convolve(K, u);
    const double psi = std::pow(std::sin(w * t), 2), dpsi = 2.0 * w * std::sin(w * t) * std::cos(w * t);
    double acc = 0.0;
    for (int j = 0; j < u.n(); ++j) {
      const double x = u.x(j), v = u.values[j];
      const double chi = std::exp(-x * x), dchi = -2.0 * x * chi;
      const double sg = v > k ? 1.0 : (v < k ? -1.0 : 0.0);
      acc += std::abs(v - k) * dpsi * chi + sg * 0.5 * (v * v - k * k) * psi * dchi + sg * Ku.values[j] * psi * chi;
    }
    total += weight * dt * u.dx() * acc;
  }
  return total;
}

}  // namespace

TEST_SUITE("splitting") {

TEST_CASE("sk_step") {
  const auto K = make_bessel(2.0, -1, Grid{30.0, 1024}).K;
  const auto f = gaussian(K.grid, Boundary::periodic, 1.0, 1.0, 0.4);
  SUBCASE("eps = 0 leaves f unchanged") { CHECK(sk_step(f, 0.0, K).values == f.values); }
  SUBCASE("L2 cross term vanishes") {
    for (double eps : {1e-3, 1e-2, 0.3}) {
      const double lhs = std::pow(lp_norm(sk_step(f, eps, K), 2.0), 2);
      const double rhs = std::pow(lp_norm(f, 2.0), 2) + eps * eps * std::pow(lp_norm(convolve(K, f), 2.0), 2);
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
  SUBCASE("L^p growth at most 1 + eps kappa") {
    for (const auto& g : {f, random_field(K.grid, 31)})
      for (double p : {1.0, 2.0, inf_norm})
        CHECK(lp_norm(sk_step(g, 0.05, K), p) <= (1.0 + 0.05 * K.kappa) * lp_norm(g, p) * (1.0 + 1e-14));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sk_step(f, -0.1, K), std::invalid_argument);
    const GridFunction other(Eigen::VectorXd::Zero(64), Grid{1.0, 64});
    CHECK_THROWS_AS(sk_step(other, 0.1, K), std::invalid_argument);
  }
}

TEST_CASE("split_evolve with K = 0 is exactly burgers_evolve") {
  const Grid g{4.0, 512};
  const auto u0 = square_pulse(g, Boundary::periodic, 1.0, 1.0);
  const double t = 1.03;
  for (double eps : {0.05, 0.3, 2.0}) {
    CHECK(split_solution(u0, t, config(make_zero_kernel(g), eps)).values == burgers_evolve(u0, t).values);
    CHECK(split_evolve(u0, t, config(make_zero_kernel(g), eps)).u.back().values == burgers_evolve(u0, t).values);
  }
}

TEST_CASE("split_evolve L2 growth stays below exp(eps t kappa^2 / 2)") {
  const Grid g{30.0, 1024};
  for (const auto& K : {make_bessel(2.0, -1, g).K, make_bessel(2.0, 1, g).K, make_bessel(1.5, 1, g).K})
    for (const auto& u0 : {gaussian(g, Boundary::periodic, 1.0, 1.0), square_pulse(g, Boundary::periodic, 1.0, 2.0),
                           random_field(g, 32)}) {
      const double eps = 0.02, t = 1.0;
      auto cfg = config(K, eps);
      cfg.record_every = 0.25;
      const auto tr = split_evolve(u0, t, cfg);
      for (std::size_t k = 0; k < tr.size(); ++k)
        CHECK(tr.l2[k] <= std::exp(0.5 * eps * tr.t[k] * K.kappa * K.kappa) * lp_norm(u0, 2.0) + 1e-10);
    }
}

TEST_CASE("split_evolve L^p and TV grow at most like exp(t kappa)") {
  const Grid g{30.0, 1024};
  const auto K = make_bessel(2.0, -1, g).K;
  for (const auto& u0 : {square_pulse(g, Boundary::periodic, 1.0, 2.0), gaussian(g, Boundary::periodic, -1.5, 0.5)}) {
    auto cfg = config(K, 0.01);
    cfg.record_every = 0.5;
    const auto tr = split_evolve(u0, 2.0, cfg);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double grow = std::exp(tr.t[k] * K.kappa) * (1.0 + 1e-12);
      for (double p : {1.0, 2.0, inf_norm}) CHECK(lp_norm(tr.u[k], p) <= grow * lp_norm(u0, p));
      CHECK(total_variation(tr.u[k]) <= grow * total_variation(u0));
    }
  }
}

TEST_CASE("trajectory layout") {
  const Grid g{4.0, 128};
  auto cfg = config(make_zero_kernel(g), 0.05);
  cfg.record_every = 0.3;
  cfg.record_times = {0.45, 0.1};
  cfg.s = 0.5;
  const auto tr = split_evolve(gaussian(g, Boundary::periodic, 1.0, 0.5), 1.0, cfg);
  const std::vector<double> expect{0.0, 0.1, 0.3, 0.45, 0.6, 0.8999999999999999, 1.0};
  REQUIRE(tr.size() == expect.size());
  for (std::size_t k = 0; k < tr.size(); ++k) CHECK(tr.t[k] == doctest::Approx(expect[k]).epsilon(1e-15));
  CHECK(std::is_sorted(tr.t.begin(), tr.t.end()));
  CHECK(tr.l2.size() == tr.size());
  CHECK(tr.linf.size() == tr.size());
  CHECK(tr.holder.size() == tr.size());
  CHECK(tr.osc.size() == tr.size());
  CHECK(tr.holder[3] == one_sided_holder(tr.u[3], 0.5, Side::right));
}

TEST_CASE("entropy_solution") {
  SUBCASE("K = 0 converges at the first comparison") {
    const Grid g{4.0, 256};
    const auto u0 = gaussian(g, Boundary::periodic, 1.0, 0.5);
    const auto r = entropy_solution(u0, 0.5, config(make_zero_kernel(g), 0.5), 1e-3);
    CHECK(r.converged);
    CHECK(r.gaps.size() == 1);
    CHECK(r.gaps[0] == 0.0);
  }
  SUBCASE("u0 = 0 stays 0") {
    const Grid g{30.0, 256};
    const GridFunction z(Eigen::VectorXd::Zero(g.n), g);
    const auto r = entropy_solution(z, 2.0, config(make_bessel(2.0, -1, g).K, 0.1), 1e-12);
    CHECK(r.converged);
    CHECK(r.gaps[0] == 0.0);
    CHECK(r.u.values.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("Burgers-Poisson gaussian: gaps shrink by 1.5..3 per halving") {
    const Grid g{30.0, 1024};
    const auto u0 = gaussian(g, Boundary::periodic, 1.0, 1.0);
    const auto r = entropy_solution(u0, 1.0, config(make_bessel(2.0, -1, g).K, 0.04), 1e-12, 4);
    REQUIRE(r.gaps.size() == 4);
    for (std::size_t k = 1; k < r.gaps.size(); ++k) {
      const double ratio = r.gaps[k - 1] / r.gaps[k];
      CHECK(ratio >= 1.5);
      CHECK(ratio <= 3.0);
      CHECK(r.gaps[k] < r.gaps[k - 1]);
    }
    CHECK_FALSE(r.converged);
  }
  SUBCASE("tol must be positive") {
    const Grid g{4.0, 64};
    CHECK_THROWS_AS(entropy_solution(GridFunction(Eigen::VectorXd::Zero(64), g), 1.0, config(make_zero_kernel(g), 0.1), 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("approximate time continuity with C_f(t) = e^{2 t kappa}(2 TV^2 + kappa ||f||_1)") {
  const Grid g{30.0, 1024};
  const auto K = make_bessel(2.0, -1, g).K;
  const double eps = 0.02;
  for (const auto& f : {square_pulse(g, Boundary::periodic, 1.0, 2.0), gaussian(g, Boundary::periodic, 1.0, 1.0)}) {
    auto cfg = config(K, eps);
    for (auto [t, tt] : {std::pair{1.0, 0.9}, std::pair{1.0, 0.5}, std::pair{0.31, 0.3}, std::pair{2.0, 0.0}}) {
      const double gap = l1_distance(split_solution(f, t, cfg), split_solution(f, tt, cfg));
      CHECK(gap <= 1.1 * (t - tt + eps) * time_continuity_constant(f, t, K.kappa));
    }
  }
}

TEST_CASE("Kruzkov entropy residual has a vanishing negative part") {
  const double T = 1.0;
  double worst_prev = -1.0;
  for (int n : {512, 1024}) {
    const Grid g{30.0, n};
    const auto K = make_bessel(2.0, -1, g).K;
    const double eps = 10.0 / n;
    auto cfg = config(K, eps);
    cfg.record_every = 0.01;
    const auto tr = split_evolve(square_pulse(g, Boundary::periodic, 1.0, 1.0, -0.2), T, cfg);
    double worst = 0.0;
    for (double k : {-0.5, 0.0, 0.25, 0.5, 0.8, 1.2}) worst = std::min(worst, kruzkov_residual(tr, K, k, T));
    CHECK(worst >= -(eps + g.dx()));
    if (worst_prev < 0.0) CHECK(worst >= worst_prev);
    worst_prev = worst;
  }
}

TEST_CASE("exp_abs_conv") {
  const Grid g{30.0, 512};
  const auto K = make_bessel(2.0, -1, g).K;
  const auto f = gaussian(g, Boundary::periodic, 1.0, 1.0);
  SUBCASE("t = 0 returns f") { CHECK(exp_abs_conv(f, 0.0, K, 5).values == f.values); }
  SUBCASE("non-negative data: L1 mass tends to e^{t kappa} ||f||_1") {
    const double t = 1.5;
    const double target = std::exp(t * K.kappa) * lp_norm(f, 1.0);
    double prev_gap = 1e300;
    for (int terms : {2, 5, 10, 30}) {
      const double gap = target - lp_norm(exp_abs_conv(f, t, K, terms), 1.0);
      CHECK(gap >= -1e-12);
      CHECK(gap <= exp_series_remainder(t, K.kappa, terms) * lp_norm(f, 1.0) * (1.0 + 1e-9) + 1e-12);
      CHECK(gap <= prev_gap);
      prev_gap = gap;
    }
    CHECK(std::abs(prev_gap) <= 1e-10);
  }
  SUBCASE("bounded by e^{t kappa} ||f||_p") {
    const auto r = random_field(g, 33);
    for (double p : {1.0, 2.0, inf_norm})
      CHECK(lp_norm(exp_abs_conv(r, 2.0, K, default_series_terms(2.0, K.kappa)), p) <=
            std::exp(2.0 * K.kappa) * lp_norm(r, p) * (1.0 + 1e-12));
  }
  SUBCASE("declared remainder bound") {
    const auto r = random_field(g, 34);
    const GridFunction full = exp_abs_conv(r, 1.0, K, 60);
    for (int terms : {1, 3, 6})
      for (double p : {1.0, 2.0, inf_norm}) {
        const GridFunction part = exp_abs_conv(r, 1.0, K, terms);
        CHECK(lp_norm(Eigen::VectorXd(full.values - part.values), g.dx(), p) <=
              exp_series_remainder(1.0, K.kappa, terms) * lp_norm(r, p) * (1.0 + 1e-9));
      }
    CHECK_THROWS_AS(exp_abs_conv(r, 1.0, K, 0), std::invalid_argument);
  }
  SUBCASE("default truncation keeps the remainder below 1e-12 e^{t kappa}") {
    for (double t : {0.1, 1.0, 5.0, 20.0})
      for (double kappa : {0.5, 1.0, 3.0})
        CHECK(exp_series_remainder(t, kappa, default_series_terms(t, kappa)) < 1e-12 * std::exp(t * kappa));
  }
}

TEST_CASE("contraction weight") {
  const Grid g{30.0, 1024};
  const double dx = g.dx();
  // r and M t fall between nodes so the indicator covers exactly 2 (r + M t)/dx cells
  const double r = 100.5 * dx, M = 1.25, t = 40.0 * dx / M;
  SUBCASE("K = 0 gives the indicator") {
    const auto w = contraction_weight(r, M, t, make_zero_kernel(g), Boundary::zero_extended, 12);
    CHECK(w.values == indicator(g, Boundary::zero_extended, r + M * t).values);
  }
  for (const auto& K : {make_bessel(2.0, -1, g).K, make_bessel(1.5, 1, g).K}) {
    const auto w = contraction_weight(r, M, t, K, Boundary::zero_extended, default_series_terms(t, K.kappa));
    const auto chi = indicator(g, Boundary::zero_extended, r + M * t);
    CHECK(lp_norm(chi, 1.0) == doctest::Approx(2.0 * (r + M * t)).epsilon(1e-12));
    CHECK((w.values - chi.values).minCoeff() >= 0.0);
    for (double p : {1.0, 2.0})
      CHECK(lp_norm(w, p) <= std::exp(t * K.kappa) * std::pow(2.0 * r + 2.0 * M * t, 1.0 / p) * (1.0 + 1e-12));
  }
  CHECK_THROWS_AS(contraction_weight(-1.0, 1.0, 1.0, make_zero_kernel(g), Boundary::zero_extended, 3),
                  std::invalid_argument);
}

TEST_CASE("trajectory CSV has the declared columns") {
  const Grid g{4.0, 64};
  const auto tr = split_evolve(gaussian(g, Boundary::periodic, 1.0, 0.5), 0.2, config(make_zero_kernel(g), 0.1));
  const auto path = (std::filesystem::temp_directory_path() / "nlb_traj.csv").string();
  write_trajectory_csv(path, tr);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,l2,linf,holder_s,osc");
  std::filesystem::remove(path);
}

}  // TEST_SUITE
