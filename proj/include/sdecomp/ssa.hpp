#pragma once

#include <optional>

#include "sdecomp/signal.hpp"

namespace sdecomp {

struct SsaConfig {
    int L = 110;
    int K = 3;
    double epsilon = 1e-6;
    std::optional<int> window_len;  // default min(N, 4L)
    std::optional<int> hop;         // default window_len / 4

    int resolved_window(Eigen::Index n) const;
    int resolved_hop(Eigen::Index n) const;
    void validate(Eigen::Index n) const;
};

/// L x (len - L + 1) Hankel matrix; column j holds x[j .. j + L - 1].
Eigen::MatrixXd embed(const Eigen::VectorXd& x, int L);

/// Hankelization: average each anti-diagonal back into a series of length rows + cols - 1.
Eigen::VectorXd diagonal_average(const Eigen::MatrixXd& m);

/// Singular values and elementary reconstructed series (one column per eigentriple)
/// of a window, keeping triples with sigma_i > epsilon * sigma_1.
struct EigentripleSet {
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd components;  // window length x kept triples
};
EigentripleSet elementary_reconstructions(const Eigen::VectorXd& window, int L, double epsilon);

/// Window start positions and the normalized Hann cross-fade weights
/// (row w = weight of window w at every sample; columns sum to one).
struct OverlapPlan {
    std::vector<Eigen::Index> starts;
    Eigen::MatrixXd weights;
};
OverlapPlan overlap_plan(Eigen::Index n, int window_len, int hop);

/// Sliding SSA with frequency-based grouping of eigentriples into K classes.
/// Classes come back in ascending order of energy-weighted mean frequency.
Decomposition ssa_decompose(const Signal& x, const SsaConfig& cfg);

}  // namespace sdecomp
