#pragma once

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace nlb::detail {

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

inline Eigen::VectorXcd dft(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out;
  fft_engine().fwd(out, v);
  return out;
}

inline Eigen::VectorXcd dft(const Eigen::VectorXd& v) { return dft(Eigen::VectorXcd(v.cast<std::complex<double>>())); }

// Inverse including the 1/n factor; real part only.
inline Eigen::VectorXd idft_real(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out;
  fft_engine().inv(out, v);
  return out.real();
}

}  // namespace nlb::detail
