#pragma once

#include <vector>

#include "sdecomp/signal.hpp"

namespace sdecomp {

/// Sifting controls. The defaults are the usual two-threshold stopping values.
struct EmdConfig {
    double theta1 = 0.05;
    double theta2 = 0.5;
    double alpha_fraction = 0.05;
    int max_sift_iters = 1000;
    int max_imfs = 12;
    int boundary_extrema = 2;  // mirror depth, in extrema

    void validate() const;
};

struct Extrema {
    std::vector<Eigen::Index> maxima;
    std::vector<Eigen::Index> minima;
    std::size_t count() const { return maxima.size() + minima.size(); }
};

/// Strict local extrema; a flat run contributes its midpoint once.
Extrema find_extrema(const Eigen::VectorXd& x);
inline Extrema find_extrema(const Signal& x) { return find_extrema(x.samples()); }

/// Sign changes, with a run of exact zeros counted once.
std::size_t count_zero_crossings(const Eigen::VectorXd& x);

/// Envelope knots after mirroring the extrema about the signal ends.
/// Rows of *_values are samples of the (possibly multichannel) signal at the knots.
struct EnvelopeKnots {
    Eigen::VectorXd max_times;
    Eigen::MatrixXd max_values;
    Eigen::VectorXd min_times;
    Eigen::MatrixXd min_values;
};

/// Mirror `depth` extrema about the first/last extremum or endpoint.
/// `decision` is the scalar series the extrema were found on; `values` holds the
/// samples (one column per channel) that get interpolated.
/// Throws NotEnoughExtrema when fewer than 3 extrema are available.
EnvelopeKnots mirror_extrema(const Extrema& ext, const Eigen::VectorXd& decision, const Eigen::MatrixXd& values,
                             int depth);

struct EnvelopeMean {
    Eigen::VectorXd mean;
    Eigen::VectorXd half_range;  // |upper - lower| / 2
};

/// Mean of the natural cubic-spline envelopes through the mirrored extrema.
EnvelopeMean envelope_mean(const Eigen::VectorXd& x, int boundary_extrema = 2);
inline Signal envelope_mean(const Signal& x) { return x.with_samples(envelope_mean(x.samples()).mean); }

/// Two-threshold test on sigma = |mean| / half_range.
bool sifting_converged(const Eigen::VectorXd& sigma, const EmdConfig& cfg);

/// Empirical mode decomposition, highest-frequency IMF first.
Decomposition emd_decompose(const Signal& x, const EmdConfig& cfg = {});

}  // namespace sdecomp
