#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nlb/coefficients.hpp"
#include "nlb/field.hpp"
#include "nlb/splitting.hpp"

namespace nlb {

struct ConfigError : std::runtime_error {
  int line;  // 0 when the error is not tied to a line
  ConfigError(const std::string& what, int l = 0)
      : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ": " + what : what), line(l) {}
};

struct KernelSpec {
  std::string kind = "bessel";  // bessel | exponential | zero | custom
  double alpha = 2.0;
  int sign = -1;
  std::string file;  // custom: a kernel CSV holding K samples
  bool operator==(const KernelSpec&) const = default;
};

struct InitialSpec {
  std::string kind = "gaussian";  // gaussian | square | ramp | step | sine | file
  double amplitude = 1.0, width = 1.0, center = 0.0;
  double height = 1.0, slope = 1.0;
  double left = 1.0, right = 0.0;  // step states
  int periods = 1;
  std::string file;
  bool operator==(const InitialSpec&) const = default;
};

struct VerifySpec {
  bool holder = false, height = false, l2 = false, l2_limit = false, contraction = false, breaking = false;
  bool resolution = false;  // self-convergence against a (2n, eps/2) rerun
  std::string holder_variant = "b_exact";  // simple | sharp | b_exact
  double rho = 0.5;
  double contraction_radius = 5.0;
  std::vector<double> contraction_times{0.5, 1.0, 2.0};
  double bump_amplitude = 0.05, bump_width = 0.5, bump_center = 0.0;
  bool any() const { return holder || height || l2 || l2_limit || contraction || breaking || resolution; }
  bool operator==(const VerifySpec&) const = default;
};

struct RunConfig {
  KernelSpec kernel;
  double L = 30.0;
  int n = 2048;
  Boundary boundary = Boundary::periodic;
  InitialSpec initial;
  double t_final = 1.0;
  std::vector<double> times;
  double record_every = 0.0;
  double epsilon = 1e-2;
  double s = 1.0;
  double cfl = 0.9;
  VerifySpec verify;
  std::string output_dir = "out";

  // Directory relative paths are resolved against; not part of the echo.
  std::string base_dir;

  Grid grid() const { return {L, n}; }
  // Throws ConfigError; checks ranges, sorted times and that referenced files exist.
  void validate() const;
  std::string resolve(const std::string& path) const;

  bool operator==(const RunConfig& o) const;
};

RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
// Canonical text form; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& c);

// Objects described by a config.
SampledKernel build_kernel(const RunConfig& c, double* tail = nullptr);
GridFunction build_initial(const RunConfig& c);
SplitConfig build_split(const RunConfig& c, const SampledKernel& K);
HolderVariant holder_variant_from_string(const std::string& s);

}  // namespace nlb
