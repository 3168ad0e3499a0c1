#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlb/grid.hpp"

namespace nlb {

struct KernelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Kernel samples on the field grid. Sample j is the cell average of the kernel
// over [x_j - dx/2, x_j + dx/2].
struct SampledKernel {
  Eigen::VectorXd samples;
  Grid grid;
  double kappa = 0.0;  // dx * sum |samples|
  bool odd = false;
  std::optional<double> alpha;
  int sign = 1;

  // Spectra of the kernel arranged for convolution, premultiplied by dx:
  // length n for periodic grids, length 2n for zero-padded linear convolution.
  Eigen::VectorXcd spectrum_periodic;
  Eigen::VectorXcd spectrum_padded;

  double dx() const { return grid.dx(); }
  int n() const { return grid.n; }
  bool is_zero() const { return samples.cwiseAbs().maxCoeff() == 0.0; }
};

// Builds the convolution spectra and kappa from raw samples. When odd is set the
// samples are antisymmetrized first.
SampledKernel make_sampled_kernel(Eigen::VectorXd samples, const Grid& grid, bool odd,
                                  std::optional<double> alpha = std::nullopt, int sign = 1);

SampledKernel make_zero_kernel(const Grid& grid);

SampledKernel abs_kernel(const SampledKernel& K);

struct BesselPair {
  SampledKernel G;  // even, cell averages of sign * G_alpha
  SampledKernel K;  // odd, cell averages of sign * G_alpha'
  double tail = 0.0;  // |G(L)| of the periodized kernel
};

struct BesselOptions {
  double tail_tolerance = 1e-12;
  bool force_spectral = false;  // use the alias-summed DFT path even for alpha = 2
  int alias_terms = 512;
};

BesselPair make_bessel(double alpha, int sign, const Grid& grid, const BesselOptions& opt = {});

// Point values sign*G_alpha(x_j) of the periodized kernel through the spectral path.
Eigen::VectorXd bessel_point_values(double alpha, int sign, const Grid& grid, int alias_terms = 512);

// Fourier symbol (1 + 4 pi^2 xi^2)^(-alpha/2).
double bessel_symbol(double alpha, double xi);

double l1_norm(const SampledKernel& K);

struct FractionalVariation {
  double value = 0.0;
  double argmax_h = 0.0;
};

// Integer shifts m (h = m*dx) used to sample sup_h, log-spaced from 1 to n with n/2 included.
std::vector<int> log_spaced_shifts(int n, int count);

FractionalVariation fractional_variation(const SampledKernel& K, double s, int shift_count = 64);

// ||K(.+m dx) - K||_1 on the periodic kernel grid.
double shift_difference_l1(const SampledKernel& K, int m);

// Product integration in y: ||K(.+y) - K||_1 is taken linear between grid shifts
// (which also covers |y| < dx), plus the tail 4 kappa L^-s / s for |y| > L.
double slobodeckij_seminorm(const SampledKernel& K, double s);

// Constant C_s in |f|_{TV^s} <= C_s [f]_{s,1}: 2 / int max{|y|,|1-y|}^-(1+s) dy = s 2^-s.
double slobodeckij_constant(double s);

void write_kernel_csv(const std::string& path, const SampledKernel& K);
SampledKernel read_kernel_csv(const std::string& path, bool odd = true);

}  // namespace nlb
