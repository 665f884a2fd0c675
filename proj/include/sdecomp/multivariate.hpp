#pragma once

#include <cstdint>
#include <vector>

#include "sdecomp/emd.hpp"
#include "sdecomp/signal.hpp"
#include "sdecomp/variational.hpp"

namespace sdecomp {

struct MemdConfig {
    int M = 64;
    EmdConfig emd;
    /// 0 keeps the plain Hammersley set; any other value applies a seeded
    /// Cranley-Patterson rotation to it.
    std::uint64_t seed = 0;

    void validate(Eigen::Index n_channels) const;
};

struct MvmdConfig {
    int K = 3;
    double alpha = 500.0;
    double tau = 0.0;
    double tol = 1e-7;
    int max_iters = 500;
    VmdInit init_mode = VmdInit::zeros;
    std::uint64_t seed = 0;

    VmdConfig as_vmd() const;
};

/// M low-discrepancy unit vectors in R^n (columns of the returned n x M matrix).
Eigen::MatrixXd hypersphere_directions(int M, int n_channels, std::uint64_t seed = 0);

/// Multivariate sifting along projection directions; every channel gets the same number of IMFs.
AlignedDecomposition memd_decompose(const MultichannelSignal& x, const MemdConfig& cfg = {});

/// Joint VMD with one center frequency per mode shared by every channel.
AlignedDecomposition mvmd_decompose(const MultichannelSignal& x, const MvmdConfig& cfg = {});

/// Independent VMD on each channel, packaged index-aligned for comparison.
AlignedDecomposition vmd_channelwise(const MultichannelSignal& x, const VmdConfig& cfg);

}  // namespace sdecomp
