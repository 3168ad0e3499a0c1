#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlb/data.hpp"
#include "nlb/field.hpp"

using namespace nlb;

namespace {

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v[j] = d(rng);
  return v;
}

// (K * f)_j = dx sum_m K(x_j - x_m) f_m; K sample index n/2 + offset. The linear
// (zero_extended) sum leaves out the node x = -L, which aliases +L.
Eigen::VectorXd brute_convolution(const SampledKernel& K, const GridFunction& f) {
  const int n = f.n();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      const int d = j - m;
      if (f.boundary == Boundary::periodic)
        out[j] += K.samples[((d + n / 2) % n + n) % n] * f.values[m];
      else if (d > -n / 2 && d < n / 2)
        out[j] += K.samples[d + n / 2] * f.values[m];
    }
  return f.dx() * out;
}

double brute_holder(const GridFunction& f, double s, Side side) {
  const int n = f.n();
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j)
    for (int m = 1; m <= n / 2; ++m) {
      const int k = side == Side::right ? j + m : j - m;
      if (f.boundary == Boundary::zero_extended && (k < 0 || k >= n)) continue;
      const double d = f.values[((k % n) + n) % n] - f.values[j];
      best = std::max(best, d / std::pow(m * f.dx(), 0.5 * (1.0 + s)));
    }
  return best;
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("convolution with an odd kernel is skew") {
  const Grid g{8.0, 512};
  const auto K = make_sampled_kernel(random_vector(g.n, 1), g, true);
  const GridFunction f(random_vector(g.n, 2), g), h(random_vector(g.n, 3), g);
  CHECK(std::abs(inner(convolve(K, f), f)) <= 1e-10);
  CHECK(std::abs(inner(f, convolve(K, h)) + inner(convolve(K, f), h)) <= 1e-10);
  const auto B = make_bessel(2.0, -1, Grid{30.0, 1024}).K;
  const auto u = gaussian(B.grid, Boundary::periodic, 1.0, 1.0, 0.3);
  CHECK(std::abs(inner(convolve(B, u), u)) <= 1e-10);
}

TEST_CASE("convolution with K = 0 vanishes") {
  const Grid g{4.0, 64};
  const GridFunction f(random_vector(g.n, 4), g);
  CHECK(convolve(make_zero_kernel(g), f).values.cwiseAbs().maxCoeff() == 0.0);
  const GridFunction z(random_vector(g.n, 4), g, Boundary::zero_extended);
  CHECK(convolve(make_zero_kernel(g), z).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral convolution equals the direct sum") {
  for (int n : {256, 1024})
    for (Boundary b : {Boundary::periodic, Boundary::zero_extended}) {
      const Grid g{3.0, n};
      const auto K = make_sampled_kernel(random_vector(n, 5), g, false);
      const GridFunction f(random_vector(n, 6), g, b);
      const Eigen::VectorXd spectral = convolve(K, f).values;
      CHECK((spectral - brute_convolution(K, f)).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((spectral - convolve_direct(K, f).values).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("convolution rejects grid mismatch") {
  const auto K = make_zero_kernel(Grid{4.0, 64});
  const GridFunction f(Eigen::VectorXd::Zero(128), Grid{4.0, 128});
  CHECK_THROWS_AS(convolve(K, f), std::invalid_argument);
  const GridFunction h(Eigen::VectorXd::Zero(64), Grid{5.0, 64});
  CHECK_THROWS_AS(convolve(K, h), std::invalid_argument);
}

TEST_CASE("discrete Young inequality") {
  const Grid g{30.0, 1024};
  const auto K = make_bessel(1.5, -1, g).K;
  for (Boundary b : {Boundary::periodic, Boundary::zero_extended}) {
    const GridFunction f(random_vector(g.n, 8), g, b);
    const GridFunction Kf = convolve(K, f);
    for (double p : {1.0, 2.0, inf_norm})
      CHECK(lp_norm(Kf, p) <= l1_norm(K) * lp_norm(f, p) * (1.0 + 2.0 * g.dx()));
  }
}

TEST_CASE("lp norms") {
  SUBCASE("constant 1 on [-1, 1)") {
    for (int n : {8, 64, 1000}) {
      const GridFunction f(Eigen::VectorXd::Ones(n), Grid{1.0, n});
      CHECK(std::abs(lp_norm(f, 2.0) - std::sqrt(2.0)) <= 1e-12);
      CHECK(lp_norm(f, inf_norm) == 1.0);
    }
  }
  SUBCASE("indicator of half the cells has L1 norm L") {
    const Grid g{3.0, 64};
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n);
    v.head(g.n / 2).setOnes();
    CHECK(lp_norm(GridFunction(v, g), 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("gaussian matches closed form integrals") {
    const double A = 1.7, w = 0.8;
    const auto f = gaussian(Grid{10.0 * w, 2048}, Boundary::periodic, A, w);
    CHECK(std::abs(lp_norm(f, 1.0) - A * w * std::sqrt(std::numbers::pi)) <= 1e-6);
    CHECK(std::abs(lp_norm(f, 2.0) - A * std::sqrt(w * std::sqrt(0.5 * std::numbers::pi))) <= 1e-6);
    CHECK(std::abs(lp_norm(f, inf_norm) - A) <= 1e-6);
    CHECK(std::abs(lp_norm(f, 3.0) - A * std::cbrt(w * std::sqrt(std::numbers::pi / 3.0))) <= 1e-6);
  }
}

TEST_CASE("osc_half") {
  const Grid g{2.0, 16};
  CHECK(osc_half(GridFunction(Eigen::VectorXd::Constant(g.n, 4.2), g)) == 0.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n);
  v[3] = 3.0;
  v[9] = -1.0;
  CHECK(osc_half(GridFunction(v, g)) == 2.0);
  const GridFunction r(random_vector(200, 9), Grid{1.0, 200});
  double brute = 0.0;
  for (int i = 0; i < r.n(); ++i)
    for (int j = 0; j < r.n(); ++j) brute = std::max(brute, 0.5 * (r.values[i] - r.values[j]));
  CHECK(osc_half(r) == brute);
}

TEST_CASE("one sided Hölder seminorm") {
  SUBCASE("non-increasing data has a non-positive right seminorm") {
    Eigen::VectorXd v(256);
    for (int j = 0; j < v.size(); ++j) v[j] = -static_cast<double>(j);
    CHECK(one_sided_holder(GridFunction(v, Grid{4.0, 256}, Boundary::zero_extended), 0.5, Side::right) <= 0.0);
  }
  SUBCASE("f(x) = x has slope 1 at s = 1") {
    const Grid g{1.0, 64};
    const auto f = sample(g, Boundary::periodic, [](double x) { return x; });
    CHECK(one_sided_holder(f, 1.0, Side::right) == doctest::Approx(1.0).epsilon(1e-12));
    // a single increasing cell pair
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n);
    v[11] = g.dx();
    CHECK(one_sided_holder(GridFunction(v, g), 1.0, Side::right) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("random data equals the exhaustive pair scan") {
    for (Boundary b : {Boundary::periodic, Boundary::zero_extended})
      for (double s : {0.0, 0.3, 1.0})
        for (Side side : {Side::right, Side::left}) {
          const GridFunction f(random_vector(128, 10), Grid{2.0, 128}, b);
          CHECK(one_sided_holder(f, s, side) == doctest::Approx(brute_holder(f, s, side)).epsilon(1e-14));
        }
  }
  SUBCASE("s outside [0, 1] is rejected") {
    const GridFunction f(random_vector(16, 1), Grid{1.0, 16});
    CHECK_THROWS_AS(one_sided_holder(f, 1.5, Side::right), std::invalid_argument);
  }
}

TEST_CASE("growth profile") {
  SUBCASE("constant data has zero growth") {
    const GridFunction f(Eigen::VectorXd::Constant(64, -2.0), Grid{1.0, 64});
    for (double w : growth_profile(f, {1, 2, 5, 32}).omega) CHECK(w == 0.0);
  }
  SUBCASE("concave power ramp attains a h^{(1+s)/2} at its left edge") {
    const double a = 1.5, s = 0.5, p = 0.5 * (1.0 + s);
    const Grid g{4.0, 512};
    const auto f = sample(g, Boundary::periodic, [&](double x) {
      return x < 0.0 ? 0.0 : a * std::pow(std::min(x, 1.0), p);
    });
    std::vector<int> shifts;
    for (int m = 1; m * g.dx() <= 1.0; m *= 2) shifts.push_back(m);
    const auto prof = growth_profile(f, shifts);
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      const double edge = a * std::pow(prof.h[k], p);
      CHECK(prof.omega[k] <= edge * (1.0 + 1e-14));
      CHECK(prof.omega[k] == doctest::Approx(edge).epsilon(1e-14));
    }
  }
  SUBCASE("random data equals the exhaustive scan") {
    const GridFunction f(random_vector(96, 12), Grid{1.0, 96});
    const std::vector<int> shifts{1, 3, 7, 20, 48};
    const auto prof = growth_profile(f, shifts);
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      double brute = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < f.n(); ++j) brute = std::max(brute, value_at(f, j + shifts[k]) - f.values[j]);
      CHECK(prof.omega[k] == brute);
      CHECK(prof.h[k] == shifts[k] * f.dx());
    }
  }
  SUBCASE("shifts must increase") {
    const GridFunction f(random_vector(16, 1), Grid{1.0, 16});
    CHECK_THROWS_AS(growth_profile(f, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(growth_profile(f, {0, 1}), std::invalid_argument);
  }
}

TEST_CASE("Hölder seminorm through the growth profile matches the direct scan exactly") {
  for (Boundary b : {Boundary::periodic, Boundary::zero_extended}) {
    const GridFunction f(random_vector(128, 13), Grid{2.0, 128}, b);
    std::vector<int> all(f.n() / 2);
    for (int m = 1; m <= f.n() / 2; ++m) all[m - 1] = m;
    const auto prof = growth_profile(f, all);
    for (double s : {0.0, 0.5, 1.0}) {
      double via = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < all.size(); ++k) via = std::max(via, prof.omega[k] / std::pow(prof.h[k], 0.5 * (1.0 + s)));
      CHECK(via == one_sided_holder(f, s, Side::right));
    }
  }
}

TEST_CASE("total variation") {
  const Grid g{1.0, 8};
  Eigen::VectorXd v(8);
  v << 0, 1, 3, 2, 2, 0, 0, 0;
  CHECK(total_variation(GridFunction(v, g)) == 6.0);
  v[7] = 1.0;
  CHECK(total_variation(GridFunction(v, g, Boundary::zero_extended)) == 8.0);
}

TEST_CASE("field validation") {
  CHECK_THROWS_AS(GridFunction(Eigen::VectorXd::Zero(7), Grid{1.0, 8}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(Eigen::VectorXd::Zero(6), Grid{1.0, 6}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(Eigen::VectorXd::Zero(9), Grid{1.0, 9}).validate(), std::invalid_argument);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(20);
  v[3] = std::nan("");
  CHECK_THROWS_AS(GridFunction(v, Grid{1.0, 20}).validate(), std::invalid_argument);
  CHECK(gaussian(Grid{10.0, 200}, Boundary::zero_extended, 1.0, 1.0).validate().empty());
  CHECK(gaussian(Grid{2.0, 200}, Boundary::zero_extended, 1.0, 1.0).validate().find("support margin") !=
        std::string::npos);
}

TEST_CASE("field CSV round trip is bit exact") {
  const GridFunction f(random_vector(64, 14), Grid{std::numbers::pi, 64}, Boundary::zero_extended);
  const auto path = (std::filesystem::temp_directory_path() / "nlb_field_roundtrip.csv").string();
  write_field_csv(path, f, 0.1 + 0.2);
  double t = 0.0;
  const auto back = read_field_csv(path, &t);
  CHECK(t == 0.1 + 0.2);
  CHECK(back.same_grid(f));
  CHECK(back.values == f.values);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
