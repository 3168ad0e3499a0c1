#pragma once

#include <stdexcept>
#include <string>

namespace nlb {

enum class Boundary { periodic, zero_extended };

inline const char* to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "zero_extended";
}

inline Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "zero_extended") return Boundary::zero_extended;
  throw std::invalid_argument("unknown boundary mode '" + s + "'");
}

// Uniform cell grid on [-L, L) with nodes x_j = -L + j*dx, dx = 2L/n.
struct Grid {
  double L = 1.0;
  int n = 8;

  double dx() const { return 2.0 * L / n; }
  double x(int j) const { return -L + j * dx(); }
  double period() const { return 2.0 * L; }

  void validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("grid half-width L must be positive");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid cell count n must be even and >= 8");
  }

  bool operator==(const Grid& o) const { return L == o.L && n == o.n; }
};

}  // namespace nlb
