#pragma once

#include <optional>
#include <vector>

#include "sdecomp/signal.hpp"
#include "sdecomp/spectral.hpp"

namespace sdecomp {

struct SstConfig {
    int n_voices = 32;
    double omega0 = 6.0;  // Morlet center frequency, rad
    double gamma = 1e-6;  // magnitude threshold, relative to the largest coefficient
    int K = 3;

    void validate() const;
};

struct RidgeConfig {
    int start_band = 5;  // bins cleared on each side of an extracted ridge
    int max_step = 5;    // largest bin change between consecutive frames

    void validate() const;
};

/// Analytic Morlet CWT. Row j is centered at freqs_hz[j]; rows ascend in frequency
/// on a log grid with n_voices rows per octave.
struct CwtResult {
    Eigen::MatrixXcd coeffs;
    Eigen::VectorXd freqs_hz;
    double sample_rate_hz = 1.0;
    int n_voices = 32;
    double omega0 = 6.0;

    double log_step() const;  // ln(2) / n_voices
};

/// Frequency-domain Morlet CWT over [2 / duration, Nyquist].
CwtResult cwt_morlet(const Signal& x, const SstConfig& cfg);

/// Synchrosqueezed coefficients on the CWT's own log-frequency grid.
struct SqueezedTransform {
    Eigen::MatrixXcd coeffs;  // freq x time, includes the ln(2)/n_voices scale measure
    Eigen::VectorXd freqs_hz;
    Eigen::VectorXd times_s;
    double sample_rate_hz = 1.0;
    double gain = 1.0;        // real part of gain * (sum over bins) reconstructs the signal
    double threshold = 0.0;   // absolute |W| threshold that was applied
    std::size_t dropped_cells = 0;

    /// |coeffs|^2 as a TFGrid
    TFGrid energy_grid() const;
    /// sum of |coeffs|
    double mass() const;
};

/// Reassign each above-threshold CWT cell to the bin nearest its phase-derived IF.
SqueezedTransform synchrosqueeze(const CwtResult& W, const SstConfig& cfg);

/// ln(2)/n_voices * sum of |W| over cells above the squeeze threshold.
double thresholded_mass(const CwtResult& W, const SstConfig& cfg);

/// Reconstruction constant of the analytic Morlet: integral of psi_hat(xi)/xi.
double morlet_admissibility(double omega0);

struct RidgeTrack {
    std::vector<Eigen::Index> bins;
    std::vector<bool> valid;

    bool any_valid() const;
};

struct RidgeSet {
    std::vector<RidgeTrack> tracks;
    bool incomplete = false;  // fewer ridges than requested were found
};

/// Greedy ridge peeling on |S|^2. A ridge ends (in each direction) at the first
/// frame where the best reachable energy falls to gamma * max energy or below.
RidgeSet extract_ridges(const SqueezedTransform& S, const RidgeConfig& rcfg, int K, double gamma = 1e-6);

/// Inverse synchrosqueezing over +-half_width bins around the track.
Signal reconstruct_mode(const SqueezedTransform& S, const RidgeTrack& track, int half_width);

struct SstResult {
    Decomposition decomposition;
    RidgeSet ridges;
    SqueezedTransform squeezed;
};

/// CWT, squeeze, K ridges, one mode per ridge. half_width defaults to start_band.
SstResult sst_decompose(const Signal& x, const SstConfig& cfg, const RidgeConfig& rcfg,
                        std::optional<int> half_width = std::nullopt);

}  // namespace sdecomp
