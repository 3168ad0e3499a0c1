#include "nlb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <sstream>

#include "fft.hpp"
#include "nlb/io.hpp"

namespace nlb {

namespace {

constexpr double pi = std::numbers::pi;

// Samples at offsets d = j - n/2 laid out for circular convolution.
Eigen::VectorXd periodic_layout(const Eigen::VectorXd& s) {
  const int n = static_cast<int>(s.size());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = s[(i + n / 2) % n];
  return out;
}

// Offsets |d| < n/2 placed in a zero-padded buffer of length 2n.
Eigen::VectorXd padded_layout(const Eigen::VectorXd& s) {
  const int n = static_cast<int>(s.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
  for (int d = -(n / 2 - 1); d <= n / 2 - 1; ++d) out[(d + 2 * n) % (2 * n)] = s[d + n / 2];
  return out;
}

double expo_point(double y) { return 0.5 * std::exp(-std::abs(y)); }

// Integral of exp(-|y|)/2 over [a, b].
double expo_integral(double a, double b) {
  if (a >= 0.0) return -0.5 * std::exp(-a) * std::expm1(-(b - a));
  if (b <= 0.0) return -0.5 * std::exp(b) * std::expm1(-(b - a));
  return -0.5 * std::expm1(a) - 0.5 * std::expm1(-b);
}

// Leading terms of int_Z^inf (1 + 4 pi^2 z^2)^(-alpha/2) dz for large Z.
double symbol_tail(double alpha, double Z) {
  const double c = std::pow(2.0 * pi, -alpha);
  return c * (std::pow(Z, 1.0 - alpha) / (alpha - 1.0) -
              alpha / (8.0 * pi * pi) * std::pow(Z, -1.0 - alpha) / (alpha + 1.0));
}

struct AliasSpectra {
  Eigen::VectorXcd G_cell, K_cell, G_point;
};

// DFT coefficients of the sampled periodized quantities, alias-summed over
// xi + m/dx for |m| <= M with Euler (alternating) or midpoint-integral tails.
AliasSpectra alias_spectra(double alpha, const Grid& grid, int M, bool want_point) {
  const int n = grid.n;
  const double dx = grid.dx(), P = grid.period();
  AliasSpectra out;
  out.G_cell.resize(n);
  out.K_cell.resize(n);
  if (want_point) out.G_point.resize(n);
  const std::complex<double> I(0.0, 1.0);
  for (int k = -n / 2; k < n / 2; ++k) {
    const double xi = k / P;
    const int idx = (k + n) % n;
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;
    const double sn = std::sin(pi * xi * dx);
    double alt = 0.0, alt_over = 0.0, plain = 0.0;
    for (int m = -M; m <= M; ++m) {
      const double z = xi + m / dx;
      const double g = bessel_symbol(alpha, z);
      const double sg = (m % 2 == 0) ? 1.0 : -1.0;
      alt += sg * g;
      if (z != 0.0) alt_over += sg * g / z;
      plain += g;
    }
    const double tail_sign = ((M + 1) % 2 == 0) ? 1.0 : -1.0;
    const double zp = xi + (M + 0.5) / dx, zm = xi - (M + 0.5) / dx;
    alt += tail_sign * 0.5 * (bessel_symbol(alpha, zp) + bessel_symbol(alpha, zm));
    alt_over += tail_sign * 0.5 * (bessel_symbol(alpha, zp) / zp + bessel_symbol(alpha, zm) / zm);
    const double g_cell = (k == 0) ? 1.0 : sn / (pi * dx) * alt_over;
    out.G_cell[idx] = parity * g_cell;
    out.K_cell[idx] = parity * (2.0 * sn / dx) * alt * I;
    if (want_point) {
      plain += dx * (symbol_tail(alpha, zp) + symbol_tail(alpha, -zm));
      out.G_point[idx] = parity * plain;
    }
  }
  return out;
}

}  // namespace

double bessel_symbol(double alpha, double xi) {
  return std::pow(1.0 + 4.0 * pi * pi * xi * xi, -0.5 * alpha);
}

SampledKernel make_sampled_kernel(Eigen::VectorXd samples, const Grid& grid, bool odd,
                                  std::optional<double> alpha, int sign) {
  grid.validate();
  const int n = grid.n;
  if (samples.size() != n) throw KernelError("kernel sample count does not match grid");
  if (!samples.allFinite()) throw KernelError("kernel samples must be finite");
  if (odd) {
    Eigen::VectorXd a = samples;
    a[0] = 0.0;
    a[n / 2] = 0.0;
    for (int j = 1; j < n / 2; ++j) {
      const double v = 0.5 * (samples[j] - samples[n - j]);
      a[j] = v;
      a[n - j] = -v;
    }
    samples = a;
  }
  SampledKernel K;
  K.samples = std::move(samples);
  K.grid = grid;
  K.odd = odd;
  K.alpha = alpha;
  K.sign = sign;
  K.kappa = grid.dx() * K.samples.cwiseAbs().sum();
  K.spectrum_periodic = grid.dx() * detail::dft(periodic_layout(K.samples));
  K.spectrum_padded = grid.dx() * detail::dft(padded_layout(K.samples));
  return K;
}

SampledKernel make_zero_kernel(const Grid& grid) {
  return make_sampled_kernel(Eigen::VectorXd::Zero(grid.n), grid, true);
}

SampledKernel abs_kernel(const SampledKernel& K) {
  return make_sampled_kernel(K.samples.cwiseAbs(), K.grid, false, K.alpha, 1);
}

Eigen::VectorXd bessel_point_values(double alpha, int sign, const Grid& grid, int alias_terms) {
  if (!(alpha > 1.0)) throw KernelError("Bessel kernel requires alpha > 1");
  grid.validate();
  auto spec = alias_spectra(alpha, grid, alias_terms, true);
  return sign * detail::idft_real(spec.G_point) / grid.dx();
}

BesselPair make_bessel(double alpha, int sign, const Grid& grid, const BesselOptions& opt) {
  if (!(alpha > 1.0)) throw KernelError("Bessel kernel requires alpha > 1 (K would not be integrable)");
  if (sign != 1 && sign != -1) throw KernelError("Bessel kernel sign must be +1 or -1");
  grid.validate();
  const int n = grid.n;
  const double dx = grid.dx(), P = grid.period(), h = 0.5 * dx;
  Eigen::VectorXd G(n), K(n);
  double tail = 0.0;
  if (alpha == 2.0 && !opt.force_spectral) {
    for (int j = 0; j < n; ++j) {
      double g = 0.0, k = 0.0;
      for (int p = -1; p <= 1; ++p) {
        const double x = grid.x(j) + p * P;
        g += expo_integral(x - h, x + h) / dx;
        k += (expo_point(x + h) - expo_point(x - h)) / dx;
      }
      G[j] = sign * g;
      K[j] = sign * k;
    }
    tail = expo_point(grid.L) + expo_point(grid.L - P);
  } else {
    auto spec = alias_spectra(alpha, grid, opt.alias_terms, true);
    G = sign * detail::idft_real(spec.G_cell) / dx;
    K = sign * detail::idft_real(spec.K_cell) / dx;
    tail = std::abs(detail::idft_real(spec.G_point)[0] / dx);
  }
  if (tail > opt.tail_tolerance) {
    double mass = 0.0;
    for (int j = 0; j < n; ++j)
      if (std::abs(grid.x(j)) > 0.9 * grid.L) mass += dx * std::abs(G[j]);
    std::ostringstream msg;
    msg << "grid half-width L=" << grid.L << " too small for the Bessel kernel: |G(L)|=" << tail
        << " exceeds " << opt.tail_tolerance << " (tail mass on |x|>0.9L is " << mass << ")";
    throw KernelError(msg.str());
  }
  BesselPair out;
  out.G = make_sampled_kernel(G, grid, false, alpha, sign);
  out.K = make_sampled_kernel(K, grid, true, alpha, sign);
  out.tail = tail;
  return out;
}

double l1_norm(const SampledKernel& K) { return K.dx() * K.samples.cwiseAbs().sum(); }

std::vector<int> log_spaced_shifts(int n, int count) {
  std::set<int> ms;
  const int c = std::max(count, 2);
  for (int i = 0; i < c; ++i) {
    const double e = std::log(static_cast<double>(n)) * i / (c - 1);
    ms.insert(std::clamp(static_cast<int>(std::lround(std::exp(e))), 1, n));
  }
  ms.insert(n / 2);
  return {ms.begin(), ms.end()};
}

double shift_difference_l1(const SampledKernel& K, int m) {
  const int n = K.n();
  const auto& v = K.samples;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += std::abs(v[(j + m) % n] - v[j]);
  return K.dx() * acc;
}

FractionalVariation fractional_variation(const SampledKernel& K, double s, int shift_count) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("fractional variation needs s in [0,1]");
  FractionalVariation best;
  bool first = true;
  for (int m : log_spaced_shifts(K.n(), shift_count)) {
    const double h = m * K.dx();
    const double r = shift_difference_l1(K, m) / std::pow(h, s);
    if (first || r > best.value) {
      best.value = r;
      best.argmax_h = h;
      first = false;
    }
  }
  return best;
}

double slobodeckij_seminorm(const SampledKernel& K, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("Slobodeckij seminorm needs s in (0,1)");
  const int half = K.n() / 2;
  const double dx = K.dx();
  // D(y) = ||K(.+y) - K||_1 interpolated linearly between grid shifts, D(0) = 0,
  // integrated exactly against y^-(1+s) on each cell.
  double prev = 0.0, acc = 0.0;
  for (int m = 0; m < half; ++m) {
    const double next = shift_difference_l1(K, m + 1);
    const double a = m * dx, b = a + dx;
    const double i1 = (std::pow(b, 1.0 - s) - std::pow(a, 1.0 - s)) / (1.0 - s);
    if (m == 0) {
      acc += next / dx * i1;
    } else {
      const double i0 = (std::pow(a, -s) - std::pow(b, -s)) / s;
      acc += prev * i0 + (next - prev) / dx * (i1 - a * i0);
    }
    prev = next;
  }
  // both signs of y, plus |y| > L where D -> 2 kappa
  return 2.0 * acc + 4.0 * l1_norm(K) / (s * std::pow(half * dx, s));
}

double slobodeckij_constant(double s) { return s * std::pow(2.0, -s); }

void write_kernel_csv(const std::string& path, const SampledKernel& K) {
  std::ostringstream out;
  out << "# L=" << fmt(K.grid.L) << " n=" << K.n() << " alpha=" << (K.alpha ? fmt(*K.alpha) : "none")
      << "\n";
  out << "x,value\n";
  for (int j = 0; j < K.n(); ++j) out << fmt(K.grid.x(j)) << "," << fmt(K.samples[j]) << "\n";
  write_atomic(path, out.str());
}

SampledKernel read_kernel_csv(const std::string& path, bool odd) {
  CsvTable t = read_csv(path);
  const std::string Ls = comment_field(t.comments, "L"), ns = comment_field(t.comments, "n");
  if (Ls.empty() || ns.empty()) throw KernelError("kernel file " + path + " lacks the '# L=.. n=..' header");
  Grid g{std::stod(Ls), std::stoi(ns)};
  if (static_cast<int>(t.rows.size()) != g.n) throw KernelError("kernel file " + path + " has wrong row count");
  Eigen::VectorXd v(g.n);
  for (int j = 0; j < g.n; ++j) {
    if (t.rows[j].size() < 2) throw KernelError("kernel file " + path + " has a malformed row");
    v[j] = t.rows[j][1];
  }
  std::optional<double> alpha;
  const std::string as = comment_field(t.comments, "alpha");
  if (!as.empty() && as != "none") alpha = std::stod(as);
  return make_sampled_kernel(v, g, odd, alpha, 1);
}

}  // namespace nlb
