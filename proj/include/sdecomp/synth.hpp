#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sdecomp/signal.hpp"

namespace sdecomp {

/// A composite test signal together with its ground-truth components.
struct SyntheticSignal {
    Signal composite;
    std::vector<Signal> references;
    std::vector<std::string> names;  // composite first, then references
};

/// Zeroed interval [start_s, end_s) of the third narrow-band component.
struct GapSpec {
    double start_s = 4.0;
    double end_s = 5.0;
};

inline constexpr double kS1SampleRateHz = 256.0;
inline constexpr double kS1DurationS = 10.0;

/// Narrow-band three-component AM-FM signal, 10 s at 256 Hz.
/// Passing std::nullopt produces the continuous variant.
SyntheticSignal gen_s1(std::optional<GapSpec> gap = GapSpec{});

/// Closed-form instantaneous frequencies (Hz) of the three s1 components.
double s11_if_hz(double t);
double s12_if_hz(double t);
double s13_if_hz(double t);

struct S2Config {
    double duration_s = 1.0;
    double sample_rate_hz = 512.0;
    double drift = -0.1;
    double volatility = 0.1;
    double smoothing_sigma_s = 0.02;
    double carrier_hz = 180.0;
    std::uint64_t rng_seed = 0;
};

/// Wide-band chirp plus a Brownian-AM tone.
SyntheticSignal gen_s2(const S2Config& cfg = {});

/// Closed-form instantaneous frequency (Hz) of the s2 chirp.
double s21_if_hz(double t);

/// Expected per-mode, per-channel frequency; std::nullopt marks "absent".
using ExpectedModeTable = std::vector<std::vector<std::optional<double>>>;

struct MultivariateTestSignal {
    MultichannelSignal signal;
    ExpectedModeTable expected;
    /// references[mode][channel], absent cells hold std::nullopt
    std::vector<std::vector<std::optional<Signal>>> references;
};

/// Bivariate tone mixture: channel 1 = 2 Hz + 50 Hz, channel 2 = 2 + 20 + 50 Hz.
MultivariateTestSignal gen_mv_test(double duration_s = 2.0, double sample_rate_hz = 200.0);

/// Standard normal deviates from a seeded mt19937_64 via Box-Muller.
/// Both engine and transform are fully specified, so draws reproduce across platforms.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
    double next();
    Eigen::VectorXd draw(Eigen::Index n);

private:
    double uniform_open();
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// x + n with n white Gaussian noise scaled so the realized SNR equals snr_db.
Signal add_wgn(const Signal& x, double snr_db, std::uint64_t seed);

/// Per-channel noise; channel c uses seed + c * 0x9E3779B97F4A7C15.
MultichannelSignal add_wgn(const MultichannelSignal& x, double snr_db, std::uint64_t seed);

/// 10 log10(P_signal / P_noise) of (noisy - clean) against clean.
double realized_snr_db(const Signal& clean, const Signal& noisy);

}  // namespace sdecomp
