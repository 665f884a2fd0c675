#pragma once

#include <complex>
#include <cstddef>

#include "sdecomp/signal.hpp"

namespace sdecomp {

/// Time x frequency energy grid. energy(f, t) >= 0, rows follow freqs_hz.
struct TFGrid {
    Eigen::VectorXd times_s;
    Eigen::VectorXd freqs_hz;
    Eigen::MatrixXd energy;
    /// Samples whose instantaneous frequency fell outside [0, fmax].
    std::size_t dropped_points = 0;
};

/// Frequency-domain Hilbert construction: x + i H{x}.
Eigen::VectorXcd analytic_signal(const Signal& x);

/// Unwrap a phase sequence by removing jumps larger than pi.
Eigen::VectorXd unwrap_phase(const Eigen::VectorXd& wrapped);

/// Instantaneous amplitude, unwrapped phase and frequency of a narrow-band signal.
/// The frequency uses centered differences, one-sided at both ends; the first and
/// last two samples are unreliable. Broad-band input is accepted but meaningless.
ModeModel ia_if(const Signal& x);

/// Hilbert spectrum of a decomposition: IA^2 of every mode deposited at the
/// nearest of n_freq_bins linearly spaced bins on [0, fmax_hz].
TFGrid hilbert_spectrum(const Decomposition& d, Eigen::Index n_freq_bins, double fmax_hz);

}  // namespace sdecomp
