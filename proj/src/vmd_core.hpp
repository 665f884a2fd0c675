#pragma once

// Shared solver for univariate and multivariate VMD.

#include <vector>

#include <Eigen/Dense>

#include "sdecomp/variational.hpp"

namespace sdecomp::detail {

struct VmdCoreResult {
    // modes[k] is channels x samples, already trimmed back to the input length
    std::vector<Eigen::MatrixXd> modes;
    std::vector<double> omega;  // cycles per sample, ascending
    ConvergenceReport report;
};

/// Alternating minimization on every row of `channels`, one center frequency per
/// mode shared by all rows.
VmdCoreResult vmd_core(const Eigen::MatrixXd& channels, const VmdConfig& cfg);

}  // namespace sdecomp::detail
