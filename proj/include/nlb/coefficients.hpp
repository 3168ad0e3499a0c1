#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nlb {

struct TheoryParams {
  double s = 1.0;
  double kappa_s = 0.0;  // |K|_{TV^s}
  double mu = 1.0;       // stands for ||u0||_2
  double kappa = 0.0;    // ||K||_1

  void validate() const {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in [0, 1]");
    if (!(kappa_s >= 0.0) || !std::isfinite(kappa_s)) throw std::invalid_argument("kappa_s must be finite and >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be finite and > 0");
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  }
};

template <class T>
struct ConstantSetT {
  T c_s, gamma, C0, C1, C2, C1t, C2t, a_under, tau;
};

using ConstantSet = ConstantSetT<double>;

template <class T>
ConstantSetT<T> constants_t(T s, T kappa_s, T mu) {
  using std::pow;
  const T one(1), two(2), three(3);
  ConstantSetT<T> c;
  c.c_s = pow((two + s) * (three + s) / (two * (one + s) * (one + s)), (one + s) / (T(4) + two * s));
  c.gamma = (one + s) / (pow(two, two / (one + s)) * pow(c.c_s, (one - s) / (one + s)) * pow(mu, (one - s) / (two + s)));
  c.C0 = pow(two, (three - s) / (three + two * s)) * pow(three + s, s / (three + two * s)) * (three + two * s) /
         (pow(two, two / (one + s)) * pow(two + s, (three + s) / (three + two * s)));
  c.C1 = pow(two, (three + s) / (T(6) + T(4) * s)) * pow((two + s) * (three + s), (one + s) / (T(6) + T(4) * s)) /
         (one + s);
  c.C2 = pow(two, (T(4) + two * s) / (three + three * s)) * pow(two + s, (T(5) + s) / T(6)) *
         pow(three + s, (one - s) / T(6)) / (pow(two, (one - s) / T(6)) * pow(three, (two + s) / three) * (one + s));
  c.C1t = pow(two, (three + s) / ((three + two * s) * (T(4) + two * s))) *
          pow((two + s) * (three + s), (one + s) / (three + two * s)) / (one + s);
  c.C2t = pow(two, two / (three + three * s)) * pow(two + s, two / three) * pow(three + s, one / three) /
          (pow(two, (one - s) / (T(12) + T(6) * s)) * pow(three, one / three) * (one + s));
  c.a_under = c.C1 * pow(kappa_s, (two + s) / (three + two * s)) * pow(mu, (one + s) / (three + two * s));
  c.tau = c.C0 * pow(kappa_s, three / (three + two * s)) * pow(mu, two * s / (three + two * s));
  return c;
}

// Evaluated in long double and rounded once.
ConstantSet constants(const TheoryParams& p);

// Relative residuals of the five algebraic relations between the constants.
struct IdentityResiduals {
  double a_under = 0, tau = 0, c2 = 0, c1_tilde = 0, c2_tilde = 0;
  double max() const;
};

IdentityResiduals identity_residuals(const TheoryParams& p);

// gamma a^{(2-s)/(2+s)} (a^{(3+2s)/(2+s)} - a_under^{(3+2s)/(2+s)}); rejects a < a_under.
double f_of_a(double a, const TheoryParams& p);
// The same function written with the explicit prefactor and the defining form of a_under.
double f_of_a_bracket(double a, const TheoryParams& p);
// Decrease rate of the growth coefficient after one split step at height h.
double B_bracket(double a, double h, double eps, const TheoryParams& p);

double H_of_a(double a, const TheoryParams& p);

struct SupBounds {
  double sup_bound, osc_bound;
};
SupBounds sup_bounds(double a, const TheoryParams& p);

// Tabulated omega^{-1}: y increasing from 0, w = omega^{-1}(y) nondecreasing.
struct OmegaInverseTable {
  std::vector<double> y, w;
};

// 2 * int_0^y int_0^{y1} omega^{-1}, exact for the piecewise linear interpolant of the table.
double F_general(const OmegaInverseTable& table, double y);

// Closed form of F for omega(h) = a h^{(1+s)/2}.
double F_homogeneous(double y, double a, const TheoryParams& p);

enum class HolderVariant { simple, sharp, b_exact };

double holder_coeff(double t, const TheoryParams& p, HolderVariant v);

double b_exact(double t, const TheoryParams& p);

// b(t) / a_under - 1, resolved without cancellation (0 when kappa_s = 0 would be undefined; throws then).
double b_exact_excess(double t, const TheoryParams& p);

double a_A(double t, double A, const TheoryParams& p);
double a_A_ode(double t, double A, const TheoryParams& p, int min_steps = 4000);

double delay(double t, const TheoryParams& p);
double delay_sup(const TheoryParams& p);

double height_bound(double t, const TheoryParams& p);
// [2^{11/12} 3^{1/3} ||K||_1^{1/3} + 2^{5/4} / t^{1/3}] mu^{2/3}
double height_bound_s0(double t, double kappa_l1, double mu);

// Explicit coefficients for s = 0 (kappa_l1 = ||K||_1) and s = 1 (tv = |K|_TV).
double holder_simple_s0(double t, double kappa_l1, double mu);
double holder_simple_s1(double t, double tv, double mu);

// Empty optional means the skewness condition fails (not applicable).
std::optional<double> lifespan_bound(double l2, double holder_left, const TheoryParams& p, double rho);

// Left side threshold constant (C1/rho)^{3+2s} kappa_s^{2+s} mu^{1+s} compared against [u0]_s^{3+2s}.
double skewness_threshold(const TheoryParams& p, double rho);

}  // namespace nlb
