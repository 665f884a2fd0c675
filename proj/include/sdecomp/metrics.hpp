#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sdecomp/signal.hpp"
#include "sdecomp/synth.hpp"

namespace sdecomp {

/// Returned by qrf() when the estimate is exact; keeps reports finite and comparable.
inline constexpr double kQrfSaturationDb = 300.0;

/// Quality of reconstruction 20 log10(||ref|| / ||ref - est||) in dB.
double qrf(const Signal& est, const Signal& ref);

struct QrfReport {
    /// (extracted index, reference index) pairs, injective on both sides
    std::vector<std::pair<std::size_t, std::size_t>> assignment;
    std::vector<double> per_mode_qrf_db;  // aligned with assignment
    double total_qrf_db = 0.0;
    std::vector<std::size_t> unmatched_est;
    std::vector<std::size_t> unmatched_ref;

    /// QRF for reference r, if it was matched.
    std::optional<double> qrf_for_reference(std::size_t r) const;
};

/// Injective pairing maximizing the summed QRF (exhaustive up to 8 pairs, greedy beyond).
QrfReport match_components(const std::vector<Signal>& est, const std::vector<Signal>& refs);

double total_qrf(const QrfReport& report);

struct AlignmentScore {
    /// dominant_hz[mode][channel]
    std::vector<std::vector<double>> dominant_hz;
    /// relative energy of each cell against the strongest channel of that mode
    std::vector<std::vector<double>> relative_energy;
    std::vector<std::vector<bool>> cell_pass;
    bool pass = false;
    double tolerance_hz = 1.0;
};

/// Checks mode-by-mode frequency content against an expected table. A missing
/// entry requires the cell to carry < 10% of the mode's strongest channel energy.
AlignmentScore alignment_score(const AlignedDecomposition& d, const ExpectedModeTable& expected, double tol_hz);

}  // namespace sdecomp
