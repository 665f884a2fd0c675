#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sdecomp/signal.hpp"

namespace sdecomp {

enum class VmdInit { zeros, uniform, random };

/// Variational mode decomposition settings. Frequencies inside the solver are in
/// cycles per sample, so alpha is dimensionless and independent of fs.
struct VmdConfig {
    int K = 3;
    double alpha = 500.0;
    double tau = 0.0;
    double tol = 1e-7;
    int max_iters = 500;
    VmdInit init_mode = VmdInit::uniform;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ConvergenceReport {
    int iterations = 0;
    double final_update = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;
};

struct VmdResult {
    Decomposition decomposition;
    ConvergenceReport report;
};

/// VMD on a mirrored copy of x; modes come back by ascending center frequency.
VmdResult vmd_decompose(const Signal& x, const VmdConfig& cfg);

/// Settings for variational nonlinear chirp mode decomposition.
struct VncmdConfig {
    std::vector<double> init_if_hz;  // one constant initial IF per mode
    /// Envelope bandwidth: the demodulated envelopes pay (1/alpha) * ||D2 a||^2,
    /// D2 the unit second difference.
    double alpha = 1e-3;
    double mu = 0.5;                // step applied to each IF increment
    /// Second-difference penalty on the IF increment, relative to the mean envelope energy.
    double if_smoothing = 1e4;
    double tol = 1e-7;
    int max_iters = 300;

    int K() const { return static_cast<int>(init_if_hz.size()); }
    void validate(double sample_rate_hz) const;
};

struct VncmdResult {
    Decomposition decomposition;
    ConvergenceReport report;
};

/// Raised when the mode-update norm grows for 10 consecutive iterations.
class VncmdDiverged : public NumericalFailure {
public:
    VncmdDiverged(Decomposition partial, ConvergenceReport report)
        : NumericalFailure("VNCMD diverged"), partial_(std::move(partial)), report_(std::move(report)) {}
    const Decomposition& partial() const { return partial_; }
    const ConvergenceReport& report() const { return report_; }

private:
    Decomposition partial_;
    ConvergenceReport report_;
};

/// Modes keep the order of init_if_hz; IF tracks are returned in Hz.
VncmdResult vncmd_decompose(const Signal& x, const VncmdConfig& cfg);

}  // namespace sdecomp
