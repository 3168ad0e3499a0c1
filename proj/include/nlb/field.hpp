#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nlb/grid.hpp"
#include "nlb/kernels.hpp"

namespace nlb {

// The state u(t, .) on a uniform grid.
struct GridFunction {
  Eigen::VectorXd values;
  Grid grid;
  Boundary boundary = Boundary::periodic;

  GridFunction() = default;
  GridFunction(Eigen::VectorXd v, Grid g, Boundary b = Boundary::periodic);

  int n() const { return grid.n; }
  double dx() const { return grid.dx(); }
  double x(int j) const { return grid.x(j); }
  bool same_grid(const GridFunction& o) const { return grid == o.grid && boundary == o.boundary; }

  // Checks n, finiteness and, for zero_extended, the support margin. Returns a
  // warning message (empty when the margin holds).
  std::string validate() const;
};

template <class F>
GridFunction sample(const Grid& g, Boundary b, F&& f) {
  Eigen::VectorXd v(g.n);
  for (int j = 0; j < g.n; ++j) v[j] = f(g.x(j));
  return GridFunction(std::move(v), g, b);
}

constexpr double inf_norm = std::numeric_limits<double>::infinity();

template <class Derived>
double lp_norm(const Eigen::MatrixBase<Derived>& v, double dx, double p) {
  if (std::isinf(p)) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (p == 1.0) return dx * v.cwiseAbs().sum();
  if (p == 2.0) return std::sqrt(dx * v.cwiseAbs2().sum());
  return std::pow(dx * v.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

inline double lp_norm(const GridFunction& f, double p) { return lp_norm(f.values, f.dx(), p); }

template <class Derived>
double osc_half(const Eigen::DenseBase<Derived>& v) {
  return 0.5 * (v.maxCoeff() - v.minCoeff());
}

inline double osc_half(const GridFunction& f) { return osc_half(f.values); }

// Sum of |f_{j+1} - f_j| including the wrap (periodic) or the zero ghosts (zero_extended).
double total_variation(const GridFunction& f);

enum class Side { right, left };

// right: max over x and h = m dx in (0, L] of (f(x+h) - f(x)) / h^{(1+s)/2};
// left uses f(x-h) - f(x).
double one_sided_holder(const GridFunction& f, double s, Side side);

struct GrowthProfile {
  std::vector<double> h;
  std::vector<double> omega;
};

// omega_k = max_x (f(x + m_k dx) - f(x)) for strictly increasing positive shifts m_k.
GrowthProfile growth_profile(const GridFunction& f, const std::vector<int>& shifts);

// Value at index j with periodic wrap or zero extension.
double value_at(const GridFunction& f, long j);

// Circular for periodic fields. zero_extended fields get the linear sum over kernel
// offsets |x| < L; the sample at x = -L is dropped since it aliases +L.
GridFunction convolve(const SampledKernel& K, const GridFunction& f);
GridFunction convolve_direct(const SampledKernel& K, const GridFunction& f);

double inner(const GridFunction& f, const GridFunction& g);

void write_field_csv(const std::string& path, const GridFunction& f, double t);
GridFunction read_field_csv(const std::string& path, double* t = nullptr);

}  // namespace nlb
