#pragma once

#include <complex>

#include <Eigen/Dense>

namespace sdecomp {

/// Thin wrappers over Eigen's FFT module. Inverse transforms carry the 1/N factor.
Eigen::VectorXcd fft(const Eigen::VectorXd& x);
Eigen::VectorXcd fft(const Eigen::VectorXcd& x);
Eigen::VectorXcd ifft(const Eigen::VectorXcd& X);

/// Real-valued inverse of a Hermitian spectrum given by its bins 0..n/2.
Eigen::VectorXd irfft_half(const Eigen::VectorXcd& half, Eigen::Index n);

/// Frequency (Hz) of the largest-magnitude non-negative bin.
double dominant_frequency_hz(const Eigen::VectorXd& x, double sample_rate_hz);

}  // namespace sdecomp
