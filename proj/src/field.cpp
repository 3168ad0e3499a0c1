#include "nlb/field.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"
#include "nlb/io.hpp"

namespace nlb {

GridFunction::GridFunction(Eigen::VectorXd v, Grid g, Boundary b) : values(std::move(v)), grid(g), boundary(b) {
  if (values.size() != grid.n) throw std::invalid_argument("field length does not match grid");
}

std::string GridFunction::validate() const {
  grid.validate();
  if (!values.allFinite()) throw std::invalid_argument("field values must be finite");
  if (boundary != Boundary::zero_extended) return {};
  const int outer = std::max(1, n() / 10);
  double worst = 0.0;
  for (int j = 0; j < outer; ++j) worst = std::max({worst, std::abs(values[j]), std::abs(values[n() - 1 - j])});
  if (worst >= 1e-10) {
    std::ostringstream msg;
    msg << "zero_extended field exceeds the support margin: max |u| on the outer 10% of cells is " << worst;
    return msg.str();
  }
  return {};
}

double value_at(const GridFunction& f, long j) {
  const long n = f.n();
  if (f.boundary == Boundary::periodic) return f.values[((j % n) + n) % n];
  return (j < 0 || j >= n) ? 0.0 : f.values[j];
}

double total_variation(const GridFunction& f) {
  const int n = f.n();
  const auto& v = f.values;
  double tv = 0.0;
  for (int j = 0; j + 1 < n; ++j) tv += std::abs(v[j + 1] - v[j]);
  if (f.boundary == Boundary::periodic) {
    tv += std::abs(v[0] - v[n - 1]);
  } else {
    tv += std::abs(v[0]) + std::abs(v[n - 1]);
  }
  return tv;
}

namespace {

// max over x of f(x + m dx) - f(x); zero_extended fields compare in-grid pairs only.
double max_growth(const GridFunction& f, int m) {
  const int n = f.n();
  const double* v = f.values.data();
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n - m; ++j) best = std::max(best, v[j + m] - v[j]);
  if (f.boundary == Boundary::periodic)
    for (int j = n - m; j < n; ++j) best = std::max(best, v[j + m - n] - v[j]);
  return best;
}

}  // namespace

GrowthProfile growth_profile(const GridFunction& f, const std::vector<int>& shifts) {
  GrowthProfile g;
  int prev = 0;
  for (int m : shifts) {
    if (m <= prev) throw std::invalid_argument("growth_profile shifts must be strictly increasing and positive");
    prev = m;
    g.h.push_back(m * f.dx());
    g.omega.push_back(max_growth(f, m));
  }
  return g;
}

double one_sided_holder(const GridFunction& f, double s, Side side) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("one_sided_holder needs s in [0,1]");
  GridFunction g = f;
  if (side == Side::left) g.values = -f.values;
  const double e = 0.5 * (1.0 + s);
  double best = -std::numeric_limits<double>::infinity();
  for (int m = 1; m <= f.n() / 2; ++m) best = std::max(best, max_growth(g, m) / std::pow(m * f.dx(), e));
  return best;
}

GridFunction convolve(const SampledKernel& K, const GridFunction& f) {
  if (!(K.grid == f.grid)) throw std::invalid_argument("kernel and field grids differ");
  const int n = f.n();
  if (f.boundary == Boundary::periodic) {
    Eigen::VectorXcd F = detail::dft(f.values);
    return GridFunction(detail::idft_real(F.cwiseProduct(K.spectrum_periodic)), f.grid, f.boundary);
  }
  Eigen::VectorXd pad = Eigen::VectorXd::Zero(2 * n);
  pad.head(n) = f.values;
  Eigen::VectorXcd F = detail::dft(pad);
  Eigen::VectorXd full = detail::idft_real(F.cwiseProduct(K.spectrum_padded));
  return GridFunction(full.head(n), f.grid, f.boundary);
}

GridFunction convolve_direct(const SampledKernel& K, const GridFunction& f) {
  if (!(K.grid == f.grid)) throw std::invalid_argument("kernel and field grids differ");
  const int n = f.n();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int m = 0; m < n; ++m) {
      const int d = j - m;
      if (f.boundary == Boundary::periodic) {
        const int dm = ((d % n) + n) % n;
        acc += K.samples[(dm + n / 2) % n] * f.values[m];
      } else if (std::abs(d) <= n / 2 - 1) {
        acc += K.samples[d + n / 2] * f.values[m];
      }
    }
    out[j] = K.dx() * acc;
  }
  return GridFunction(out, f.grid, f.boundary);
}

double inner(const GridFunction& f, const GridFunction& g) { return f.dx() * f.values.dot(g.values); }

void write_field_csv(const std::string& path, const GridFunction& f, double t) {
  std::ostringstream out;
  out << "# t=" << fmt(t) << " L=" << fmt(f.grid.L) << " n=" << f.n() << " boundary=" << to_string(f.boundary)
      << "\n";
  out << "x,u\n";
  for (int j = 0; j < f.n(); ++j) out << fmt(f.x(j)) << "," << fmt(f.values[j]) << "\n";
  write_atomic(path, out.str());
}

GridFunction read_field_csv(const std::string& path, double* t) {
  CsvTable tab = read_csv(path);
  const std::string Ls = comment_field(tab.comments, "L"), ns = comment_field(tab.comments, "n");
  if (Ls.empty() || ns.empty()) throw std::invalid_argument("field file " + path + " lacks the '# t=.. L=.. n=..' header");
  Grid g{std::stod(Ls), std::stoi(ns)};
  const std::string bs = comment_field(tab.comments, "boundary");
  Boundary b = bs.empty() ? Boundary::periodic : boundary_from_string(bs);
  if (static_cast<int>(tab.rows.size()) != g.n) throw std::invalid_argument("field file " + path + " has wrong row count");
  Eigen::VectorXd v(g.n);
  for (int j = 0; j < g.n; ++j) {
    if (tab.rows[j].size() < 2) throw std::invalid_argument("field file " + path + " has a malformed row");
    v[j] = tab.rows[j][1];
  }
  if (t) {
    const std::string ts = comment_field(tab.comments, "t");
    *t = ts.empty() ? 0.0 : std::stod(ts);
  }
  return GridFunction(v, g, b);
}

}  // namespace nlb
