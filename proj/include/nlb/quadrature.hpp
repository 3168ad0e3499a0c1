#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace nlb::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                  0.207784955007898467600689403773245, 0.0};
inline constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

template <class F>
Piece kronrod(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * wgk[7], g = fc * wg[3];
  for (int i = 0; i < 7; ++i) {
    const double d = h * xgk[i];
    const double s = f(c - d) + f(c + d);
    k += wgk[i] * s;
    if (i % 2 == 1) g += wg[i / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15 on [a, b], optionally pre-split into `pieces`.
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0, int pieces = 1,
                 int max_intervals = 4000) {
  Result r;
  if (a == b) return r;
  std::priority_queue<detail::Piece> heap;
  double total = 0.0, err = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces, hi = a + (b - a) * (i + 1) / pieces;
    auto p = detail::kronrod(f, lo, hi);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int count = pieces;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto l = detail::kronrod(f, worst.a, mid);
    auto rr = detail::kronrod(f, mid, worst.b);
    total += l.value + rr.value - worst.value;
    err += l.error + rr.error - worst.error;
    heap.push(l);
    heap.push(rr);
    ++count;
  }
  // re-sum to shed accumulated rounding
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  r.value = total;
  r.error = err;
  r.intervals = count;
  return r;
}

// Root of a decreasing function g on [lo, hi] with g(lo) >= 0 >= g(hi). Newton
// steps using dg (the derivative) when they stay inside the bracket, bisection otherwise.
template <class G, class DG>
double solve_decreasing(G&& g, DG&& dg, double lo, double hi, double xtol = 1e-14, int max_iter = 200) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double v = g(x);
    if (v == 0.0) return x;
    if (v > 0.0) lo = x; else hi = x;
    const double d = dg(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - v / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= xtol * std::max(1.0, std::abs(x)) || hi - lo <= xtol * std::max(1.0, std::abs(x)))
      return next;
    x = next;
  }
  return x;
}

}  // namespace nlb::quad
