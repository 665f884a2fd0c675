#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdecomp/error.hpp"

namespace sdecomp {

/// True when two sample rates agree to 1e-9 relative.
inline bool same_rate(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

/// Uniformly sampled real time series. Immutable once constructed.
template <typename Scalar>
class BasicSignal {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    BasicSignal(Vector samples, double sample_rate_hz)
        : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
        require(samples_.size() >= 2, "signal needs at least 2 samples");
        require(sample_rate_hz_ > 0.0 && std::isfinite(sample_rate_hz_), "sample rate must be positive");
        require(samples_.allFinite(), "signal samples must be finite");
    }

    static BasicSignal zeros(Eigen::Index n, double sample_rate_hz) {
        return BasicSignal(Vector::Zero(n), sample_rate_hz);
    }

    const Vector& samples() const { return samples_; }
    double sample_rate_hz() const { return sample_rate_hz_; }
    Eigen::Index size() const { return samples_.size(); }
    double dt() const { return 1.0 / sample_rate_hz_; }
    double duration_s() const { return static_cast<double>(samples_.size()) / sample_rate_hz_; }
    Scalar operator[](Eigen::Index i) const { return samples_[i]; }

    Eigen::VectorXd times() const {
        return Eigen::VectorXd::LinSpaced(samples_.size(), 0.0, static_cast<double>(samples_.size() - 1)) /
               sample_rate_hz_;
    }

    bool compatible_with(const BasicSignal& other) const {
        return size() == other.size() && same_rate(sample_rate_hz_, other.sample_rate_hz_);
    }

    BasicSignal with_samples(Vector samples) const { return BasicSignal(std::move(samples), sample_rate_hz_); }

private:
    Vector samples_;
    double sample_rate_hz_;
};

using Signal = BasicSignal<double>;

template <typename Scalar>
void require_compatible(const BasicSignal<Scalar>& a, const BasicSignal<Scalar>& b) {
    require(a.size() == b.size(), "signal length mismatch");
    require(same_rate(a.sample_rate_hz(), b.sample_rate_hz()), "sample rate mismatch");
}

template <typename Scalar>
Scalar l2_norm(const BasicSignal<Scalar>& s) {
    return s.samples().norm();
}

template <typename Scalar>
BasicSignal<Scalar> add(const BasicSignal<Scalar>& a, const BasicSignal<Scalar>& b) {
    require_compatible(a, b);
    return a.with_samples(a.samples() + b.samples());
}

template <typename Scalar>
BasicSignal<Scalar> subtract(const BasicSignal<Scalar>& a, const BasicSignal<Scalar>& b) {
    require_compatible(a, b);
    return a.with_samples(a.samples() - b.samples());
}

template <typename Scalar>
BasicSignal<Scalar> scale(const BasicSignal<Scalar>& a, Scalar gain) {
    return a.with_samples(a.samples() * gain);
}

template <typename Scalar>
BasicSignal<Scalar> operator+(const BasicSignal<Scalar>& a, const BasicSignal<Scalar>& b) {
    return add(a, b);
}

template <typename Scalar>
BasicSignal<Scalar> operator-(const BasicSignal<Scalar>& a, const BasicSignal<Scalar>& b) {
    return subtract(a, b);
}

template <typename Scalar>
BasicSignal<Scalar> operator*(Scalar gain, const BasicSignal<Scalar>& a) {
    return scale(a, gain);
}

/// Several equal-length channels sharing one sample rate; row c is channel c.
class MultichannelSignal {
public:
    MultichannelSignal(Eigen::MatrixXd channels, double sample_rate_hz);
    MultichannelSignal(const std::vector<Signal>& channels);

    const Eigen::MatrixXd& data() const { return data_; }
    double sample_rate_hz() const { return sample_rate_hz_; }
    Eigen::Index n_channels() const { return data_.rows(); }
    Eigen::Index size() const { return data_.cols(); }
    Signal channel(Eigen::Index c) const { return Signal(data_.row(c).transpose(), sample_rate_hz_); }

private:
    Eigen::MatrixXd data_;
    double sample_rate_hz_;
};

/// Extracted modes plus whatever the method could not explain.
struct Decomposition {
    std::vector<Signal> modes;
    Signal residual;
    std::optional<std::vector<double>> center_freqs_hz;
    std::optional<std::vector<Eigen::VectorXd>> if_tracks_hz;
    std::vector<std::string> warnings;

    explicit Decomposition(Signal residual_) : residual(std::move(residual_)) {}

    std::size_t size() const { return modes.size(); }
    Signal mode_sum() const;
    /// ||input - sum(modes) - residual||
    double reconstruction_error(const Signal& input) const;
    /// Checks the shape invariants against the input; throws ContractViolation.
    void validate(const Signal& input) const;
};

/// Modes of several channels, index-aligned across channels.
struct AlignedDecomposition {
    std::vector<Decomposition> channels;
    std::optional<std::vector<double>> center_freqs_hz;

    std::size_t n_modes() const { return channels.empty() ? 0 : channels.front().size(); }
    std::size_t n_channels() const { return channels.size(); }
    void validate(const MultichannelSignal& input) const;
};

/// Instantaneous amplitude / phase description of one AM-FM component.
struct ModeModel {
    Eigen::VectorXd ia_track;
    Eigen::VectorXd phase_track;
    Eigen::VectorXd if_track_hz;
};

}  // namespace sdecomp
