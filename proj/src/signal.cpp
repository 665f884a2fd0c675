#include "sdecomp/signal.hpp"

namespace sdecomp {

MultichannelSignal::MultichannelSignal(Eigen::MatrixXd channels, double sample_rate_hz)
    : data_(std::move(channels)), sample_rate_hz_(sample_rate_hz) {
    require(data_.rows() >= 1, "multichannel signal needs at least one channel");
    require(data_.cols() >= 2, "multichannel signal needs at least 2 samples");
    require(sample_rate_hz_ > 0.0 && std::isfinite(sample_rate_hz_), "sample rate must be positive");
    require(data_.allFinite(), "signal samples must be finite");
}

namespace {
Eigen::MatrixXd stack(const std::vector<Signal>& channels) {
    require(!channels.empty(), "multichannel signal needs at least one channel");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(channels.size()), channels.front().size());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        require_compatible(channels[c], channels.front());
        m.row(static_cast<Eigen::Index>(c)) = channels[c].samples().transpose();
    }
    return m;
}
}  // namespace

MultichannelSignal::MultichannelSignal(const std::vector<Signal>& channels)
    : MultichannelSignal(stack(channels), channels.empty() ? 1.0 : channels.front().sample_rate_hz()) {}

Signal Decomposition::mode_sum() const {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(residual.size());
    for (const auto& m : modes) sum += m.samples();
    return residual.with_samples(std::move(sum));
}

double Decomposition::reconstruction_error(const Signal& input) const {
    require_compatible(input, residual);
    Eigen::VectorXd diff = input.samples() - residual.samples();
    for (const auto& m : modes) diff -= m.samples();
    return diff.norm();
}

void Decomposition::validate(const Signal& input) const {
    require_compatible(input, residual);
    for (const auto& m : modes) require_compatible(input, m);
    if (center_freqs_hz) require(center_freqs_hz->size() == modes.size(), "center frequency count mismatch");
    if (if_tracks_hz) {
        require(if_tracks_hz->size() == modes.size(), "IF track count mismatch");
        for (const auto& t : *if_tracks_hz) require(t.size() == input.size(), "IF track length mismatch");
    }
}

void AlignedDecomposition::validate(const MultichannelSignal& input) const {
    require(static_cast<Eigen::Index>(channels.size()) == input.n_channels(), "channel count mismatch");
    for (std::size_t c = 0; c < channels.size(); ++c) {
        require(channels[c].size() == n_modes(), "mode count differs across channels");
        channels[c].validate(input.channel(static_cast<Eigen::Index>(c)));
    }
    if (center_freqs_hz) require(center_freqs_hz->size() == n_modes(), "center frequency count mismatch");
}

}  // namespace sdecomp
