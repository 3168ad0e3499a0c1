#include "nlb/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlb/quadrature.hpp"

namespace nlb {

ConstantSet constants(const TheoryParams& p) {
  p.validate();
  using LD = long double;
  auto c = constants_t<LD>(p.s, p.kappa_s, p.mu);
  return {static_cast<double>(c.c_s), static_cast<double>(c.gamma), static_cast<double>(c.C0),
          static_cast<double>(c.C1),  static_cast<double>(c.C2),    static_cast<double>(c.C1t),
          static_cast<double>(c.C2t), static_cast<double>(c.a_under), static_cast<double>(c.tau)};
}

double IdentityResiduals::max() const { return std::max({a_under, tau, c2, c1_tilde, c2_tilde}); }

IdentityResiduals identity_residuals(const TheoryParams& p) {
  p.validate();
  if (!(p.kappa_s > 0.0)) throw std::invalid_argument("identity residuals need kappa_s > 0");
  using LD = long double;
  using std::pow;
  const LD s = p.s, k = p.kappa_s, mu = p.mu;
  const auto c = constants_t<LD>(s, k, mu);
  auto rel = [](LD a, LD b) { return static_cast<double>(std::fabs(a - b) / std::fabs(b)); };
  IdentityResiduals r;
  const LD a_def = pow(2 * c.c_s * k / (1 + s), (2 + s) / (3 + 2 * s)) * pow(mu, (1 + s) / (3 + 2 * s));
  r.a_under = rel(a_def, c.a_under);
  const LD tau_def = (3 + 2 * s) / (2 + s) * c.gamma * pow(a_def, 3 / (2 + s));
  r.tau = rel(tau_def, c.tau);
  r.c2 = rel(c.a_under * pow((3 + 2 * s) / (3 * c.tau), (2 + s) / 3), c.C2 * pow(mu, (1 - s) / 3));
  const LD two_pow = pow(LD(2), (1 + s) / (4 + 2 * s));
  r.c1_tilde = rel(two_pow * c.c_s * pow(c.C1, 1 / (2 + s)), c.C1t);
  r.c2_tilde = rel(two_pow * c.c_s * pow(c.C2, 1 / (2 + s)), c.C2t);
  return r;
}

namespace {

struct Exponents {
  double s, p1, p2, q, r;
  explicit Exponents(double s_)
      : s(s_), p1((2 - s_) / (2 + s_)), p2((3 + 2 * s_) / (2 + s_)), q(3 / (2 + s_)), r((3 - 2 * s_) / (2 + s_)) {}
};

double f_raw(double a, const TheoryParams& p, const ConstantSet& c) {
  const Exponents e(p.s);
  return c.gamma * std::pow(a, e.p1) * (std::pow(a, e.p2) - std::pow(c.a_under, e.p2));
}

// Integrand of the b(t) equation after xi = 1 + e^y.
double b_integrand(double y, const Exponents& e) {
  const double d = std::exp(y), l = std::log1p(d);
  return d / (std::exp(e.p1 * l) * std::expm1(e.p2 * l));
}

// (3-2s)/3 (xi^q - 1) - (xi^r - 1); the first-order terms cancel, so small l uses the series.
double delay_numerator(double l, const Exponents& e) {
  const double w = (3 - 2 * e.s) / 3;
  if (std::abs(l) * std::max(e.q, e.r) < 0.5) {
    double sum = 0.0, lk = l, fact = 1.0, qk = e.q, rk = e.r;
    for (int k = 2; k <= 30; ++k) {
      lk *= l;
      fact *= k;
      qk *= e.q;
      rk *= e.r;
      sum += lk / fact * (w * qk - rk);
    }
    return sum;
  }
  return w * std::expm1(e.q * l) - std::expm1(e.r * l);
}

double delay_integrand(double y, const Exponents& e) {
  const double d = std::exp(y), l = std::log1p(d);
  const double num = delay_numerator(l, e);
  if (num == 0.0) return 0.0;
  const double den =
      std::exp(e.p1 * l) * std::expm1(e.p2 * l) * std::expm1(e.q * l) * (std::exp(e.q * l) + 2 * e.s / 3);
  return d * num / den;
}

// int_{y0}^{inf} of the b integrand.
double b_tail_integral(double y0, const Exponents& e) {
  auto g = [&](double y) { return b_integrand(y, e); };
  const double top = std::max(y0, 0.0) + 30.0 * (2 + e.s);
  double total = 0.0;
  if (y0 < 0.0) total += quad::integrate(g, y0, 0.0, 1e-13, 0.0, 4).value;
  const double start = std::max(y0, 0.0);
  total += quad::integrate(g, start, top, 1e-13, 0.0, 8).value;
  return total;
}

double b_partial_integral(double y0, double y1, const Exponents& e) {
  auto g = [&](double y) { return b_integrand(y, e); };
  if (y1 <= y0) return 0.0;
  return quad::integrate(g, y0, y1, 1e-13, 0.0, std::clamp(static_cast<int>(y1 - y0), 1, 64)).value;
}

// y = log(b/a_under - 1) solving b_tail_integral(y) = target.
double solve_b_log_excess(double t, const TheoryParams& p, const ConstantSet& c) {
  const Exponents e(p.s);
  const double target = t * c.gamma * std::pow(c.a_under, e.q);
  auto G = [&](double y) { return b_tail_integral(y, e) - target; };
  auto dG = [&](double y) { return -b_integrand(y, e); };
  double lo = std::log(1e-12), hi = std::log(1e8 - 1.0);
  double glo = G(lo), ghi = G(hi);
  if (glo < 0.0 || ghi > 0.0) {
    if (glo < 0.0) lo = -700.0;
    if (ghi > 0.0) hi = std::log(1e16);
    glo = G(lo);
    ghi = G(hi);
    if (glo < 0.0 || ghi > 0.0) {
      std::ostringstream msg;
      msg << "b_exact bracket failure at t=" << t << ": residuals " << glo << " at b/a=1+e^" << lo << " and " << ghi
          << " at b/a=1+e^" << hi;
      throw std::runtime_error(msg.str());
    }
  }
  return quad::solve_decreasing(G, dG, lo, hi, 1e-15);
}

void require_positive_t(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
}

}  // namespace

double f_of_a(double a, const TheoryParams& p) {
  const auto c = constants(p);
  if (a < c.a_under) throw std::invalid_argument("f_of_a needs a >= a_under");
  return f_raw(a, p, c);
}

double f_of_a_bracket(double a, const TheoryParams& p) {
  const auto c = constants(p);
  const double s = p.s;
  const double a_def =
      std::pow(2 * c.c_s * p.kappa_s / (1 + s), (2 + s) / (3 + 2 * s)) * std::pow(p.mu, (1 + s) / (3 + 2 * s));
  if (a < a_def) throw std::invalid_argument("f_of_a needs a >= a_under");
  const double pre = (1 + s) * std::pow(a, (2 - s) / (2 + s)) /
                     (std::pow(2.0, 2 / (1 + s)) * std::pow(c.c_s, (1 - s) / (1 + s)) *
                      std::pow(p.mu, (1 - s) / (2 + s)));
  return pre * (std::pow(a, (3 + 2 * s) / (2 + s)) - std::pow(a_def, (3 + 2 * s) / (2 + s)));
}

double B_bracket(double a, double h, double eps, const TheoryParams& p) {
  const auto c = constants(p);
  const double s = p.s;
  return (1 + s) * std::pow(a, 1 / (2 + s)) / (2 * std::pow(h, (1 - s) / 2) + eps * (1 + s) * a) *
         (std::pow(a, (3 + 2 * s) / (2 + s)) - std::pow(c.a_under, (3 + 2 * s) / (2 + s)));
}

double H_of_a(double a, const TheoryParams& p) {
  if (!(a > 0.0)) throw std::invalid_argument("H_of_a needs a > 0");
  const auto c = constants(p);
  const double s = p.s;
  return std::pow(2 * c.c_s, 2 / (1 + s)) * std::pow(p.mu, 2 / (2 + s)) / std::pow(a, 2 / (2 + s));
}

SupBounds sup_bounds(double a, const TheoryParams& p) {
  if (!(a > 0.0)) throw std::invalid_argument("sup_bounds needs a > 0");
  const auto c = constants(p);
  const double s = p.s;
  const double osc = c.c_s * std::pow(p.mu, (1 + s) / (2 + s)) * std::pow(a, 1 / (2 + s));
  return {std::pow(2.0, (1 + s) / (4 + 2 * s)) * osc, osc};
}

double F_general(const OmegaInverseTable& table, double y) {
  const auto& ys = table.y;
  const auto& ws = table.w;
  if (ys.size() < 2 || ys.size() != ws.size() || ys.front() != 0.0)
    throw std::invalid_argument("omega inverse table must start at y = 0 with matching columns");
  if (y < 0.0 || y > ys.back()) throw std::out_of_range("y beyond the omega inverse table range");
  double W = 0.0, F = 0.0;
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    const double h = ys[i + 1] - ys[i];
    if (!(h > 0.0)) throw std::invalid_argument("omega inverse table must be strictly increasing in y");
    const double slope = (ws[i + 1] - ws[i]) / h;
    const double d = std::min(h, y - ys[i]);
    F += W * d + ws[i] * d * d / 2 + slope * d * d * d / 6;
    if (y <= ys[i + 1]) break;
    W += ws[i] * h + slope * h * h / 2;
  }
  return 2.0 * F;
}

double F_homogeneous(double y, double a, const TheoryParams& p) {
  const auto c = constants(p);
  const double s = p.s;
  return 0.5 * std::pow(y / (c.c_s * std::pow(a, 1 / (2 + s))), (4 + 2 * s) / (1 + s));
}

double holder_coeff(double t, const TheoryParams& p, HolderVariant v) {
  require_positive_t(t);
  const auto c = constants(p);
  const double s = p.s;
  switch (v) {
    case HolderVariant::simple:
      return c.a_under + c.C2 * std::pow(p.mu, (1 - s) / 3) / std::pow(t, (2 + s) / 3);
    case HolderVariant::sharp:
      if (c.a_under == 0.0) return c.C2 * std::pow(p.mu, (1 - s) / 3) / std::pow(t, (2 + s) / 3);
      return c.a_under * std::pow(1 + (1 + 2 * s / 3) / std::expm1(c.tau * t), (2 + s) / 3);
    case HolderVariant::b_exact:
      return b_exact(t, p);
  }
  return 0.0;
}

double b_exact(double t, const TheoryParams& p) {
  require_positive_t(t);
  const auto c = constants(p);
  if (c.a_under == 0.0) return std::pow((2 + p.s) / (3 * c.gamma * t), (2 + p.s) / 3);
  return c.a_under * (1.0 + std::exp(solve_b_log_excess(t, p, c)));
}

double b_exact_excess(double t, const TheoryParams& p) {
  require_positive_t(t);
  const auto c = constants(p);
  if (c.a_under == 0.0) throw std::invalid_argument("b_exact_excess needs kappa_s > 0");
  return std::exp(solve_b_log_excess(t, p, c));
}

double a_A(double t, double A, const TheoryParams& p) {
  if (t < 0.0) throw std::invalid_argument("a_A needs t >= 0");
  const auto c = constants(p);
  if (!(A > c.a_under)) throw std::invalid_argument("a_A needs A > a_under");
  if (t == 0.0) return A;
  const Exponents e(p.s);
  if (c.a_under == 0.0) {
    return std::pow(std::pow(A, -e.q) + 3 * c.gamma * t / (2 + p.s), -1 / e.q);
  }
  const double target = t * c.gamma * std::pow(c.a_under, e.q);
  const double yA = std::log(A / c.a_under - 1.0);
  auto G = [&](double y) { return b_partial_integral(y, yA, e) - target; };
  auto dG = [&](double y) { return -b_integrand(y, e); };
  double lo = std::min(yA - 1.0, std::log(1e-12));
  if (G(lo) < 0.0) lo = -700.0;
  if (G(lo) < 0.0) throw std::runtime_error("a_A bracket failure");
  const double y = quad::solve_decreasing(G, dG, lo, yA, 1e-15);
  return c.a_under * (1.0 + std::exp(y));
}

double a_A_ode(double t, double A, const TheoryParams& p, int min_steps) {
  if (t < 0.0) throw std::invalid_argument("a_A_ode needs t >= 0");
  const auto c = constants(p);
  if (!(A > c.a_under)) throw std::invalid_argument("a_A_ode needs A > a_under");
  const double rate = std::max(f_raw(A, p, c) / (A - c.a_under), c.tau);
  const long steps = std::max<long>(min_steps, static_cast<long>(std::ceil(200.0 * t * rate)));
  const double h = t / steps;
  auto rhs = [&](double a) { return -f_raw(a, p, c); };
  double a = A;
  for (long i = 0; i < steps; ++i) {
    const double k1 = rhs(a), k2 = rhs(a + 0.5 * h * k1), k3 = rhs(a + 0.5 * h * k2), k4 = rhs(a + h * k3);
    a += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return a;
}

double delay(double t, const TheoryParams& p) {
  require_positive_t(t);
  const auto c = constants(p);
  if (p.s == 0.0 || c.a_under == 0.0) return 0.0;
  const Exponents e(p.s);
  const double y0 = solve_b_log_excess(t, p, c);
  auto h = [&](double y) { return delay_integrand(y, e); };
  const double top = std::max(y0, 0.0) + 15.0 * (2 + p.s);
  double total = 0.0;
  if (y0 < 0.0) total += quad::integrate(h, y0, 0.0, 1e-12, 0.0, 4).value;
  total += quad::integrate(h, std::max(y0, 0.0), top, 1e-12, 0.0, 8).value;
  return total / (c.gamma * std::pow(c.a_under, e.q));
}

double delay_sup(const TheoryParams& p) {
  const auto c = constants(p);
  if (p.s == 0.0 || c.a_under == 0.0) return 0.0;
  const Exponents e(p.s);
  auto h = [&](double y) { return delay_integrand(y, e); };
  const double total = quad::integrate(h, -40.0, 0.0, 1e-12, 0.0, 8).value +
                       quad::integrate(h, 0.0, 15.0 * (2 + p.s), 1e-12, 0.0, 8).value;
  return total / (c.gamma * std::pow(c.a_under, e.q));
}

double height_bound(double t, const TheoryParams& p) {
  require_positive_t(t);
  const auto c = constants(p);
  const double s = p.s;
  return c.C1t * std::pow(p.kappa_s, 1 / (3 + 2 * s)) * std::pow(p.mu, (2 + 2 * s) / (3 + 2 * s)) +
         c.C2t * std::pow(p.mu, 2.0 / 3) / std::cbrt(t);
}

double height_bound_s0(double t, double kappa_l1, double mu) {
  require_positive_t(t);
  return (std::pow(2.0, 11.0 / 12) * std::cbrt(3.0) * std::cbrt(kappa_l1) + std::pow(2.0, 1.25) / std::cbrt(t)) *
         std::pow(mu, 2.0 / 3);
}

double holder_simple_s0(double t, double kappa_l1, double mu) {
  require_positive_t(t);
  return std::pow(2.0, 4.0 / 3) * std::pow(3.0, 1.0 / 6) * std::pow(kappa_l1, 2.0 / 3) * std::cbrt(mu) +
         4 * std::cbrt(mu) / (std::sqrt(3.0) * std::pow(t, 2.0 / 3));
}

double holder_simple_s1(double t, double tv, double mu) {
  require_positive_t(t);
  return std::pow(1.5, 0.2) * std::pow(tv, 0.6) * std::pow(mu, 0.4) + 1 / t;
}

double skewness_threshold(const TheoryParams& p, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  const auto c = constants(p);
  const double s = p.s;
  return std::pow(c.C1 / rho, 3 + 2 * s) * std::pow(p.kappa_s, 2 + s) * std::pow(p.mu, 1 + s);
}

std::optional<double> lifespan_bound(double l2, double holder_left, const TheoryParams& p, double rho) {
  if (holder_left < 0.0) throw std::invalid_argument("lifespan_bound needs [u0]_s >= 0");
  TheoryParams q = p;
  q.mu = l2;
  const double s = q.s;
  if (!(std::pow(holder_left, 3 + 2 * s) > skewness_threshold(q, rho))) return std::nullopt;
  const auto c = constants(q);
  return std::pow(c.C2 / (1 - rho), 3 / (2 + s)) * std::pow(q.mu, (1 - s) / (2 + s)) /
         std::pow(holder_left, 3 / (2 + s));
}

}  // namespace nlb
