#include "sdecomp/spectral.hpp"

#include <cmath>
#include <numbers>

#include "sdecomp/fft.hpp"

namespace sdecomp {

Eigen::VectorXcd analytic_signal(const Signal& x) {
    require(x.size() >= 4, "analytic signal needs at least 4 samples");
    const Eigen::Index n = x.size();
    Eigen::VectorXcd X = fft(x.samples());
    const Eigen::Index half = n / 2;
    // bins 1..ceil(n/2)-1 are strictly positive frequencies
    for (Eigen::Index k = 1; k < (n + 1) / 2; ++k) X[k] *= 2.0;
    for (Eigen::Index k = half + 1; k < n; ++k) X[k] = 0.0;
    return ifft(X);
}

Eigen::VectorXd unwrap_phase(const Eigen::VectorXd& wrapped) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    Eigen::VectorXd out = wrapped;
    double offset = 0.0;
    for (Eigen::Index i = 1; i < wrapped.size(); ++i) {
        const double d = wrapped[i] - wrapped[i - 1];
        if (std::abs(d) > std::numbers::pi) offset -= kTwoPi * std::round(d / kTwoPi);
        out[i] = wrapped[i] + offset;
    }
    return out;
}

ModeModel ia_if(const Signal& x) {
    const Eigen::VectorXcd z = analytic_signal(x);
    const Eigen::Index n = z.size();
    ModeModel m;
    m.ia_track = z.cwiseAbs();
    Eigen::VectorXd wrapped(n);
    for (Eigen::Index i = 0; i < n; ++i) wrapped[i] = std::arg(z[i]);
    m.phase_track = unwrap_phase(wrapped);
    m.if_track_hz.resize(n);
    const double scale = x.sample_rate_hz() / (2.0 * std::numbers::pi);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        m.if_track_hz[i] = 0.5 * (m.phase_track[i + 1] - m.phase_track[i - 1]) * scale;
    }
    m.if_track_hz[0] = (m.phase_track[1] - m.phase_track[0]) * scale;
    m.if_track_hz[n - 1] = (m.phase_track[n - 1] - m.phase_track[n - 2]) * scale;
    return m;
}

TFGrid hilbert_spectrum(const Decomposition& d, Eigen::Index n_freq_bins, double fmax_hz) {
    require(n_freq_bins >= 2, "need at least 2 frequency bins");
    const double nyquist = 0.5 * d.residual.sample_rate_hz();
    require(fmax_hz > 0.0 && fmax_hz <= nyquist * (1.0 + 1e-12), "fmax must lie in (0, Nyquist]");
    const Eigen::Index n = d.residual.size();
    TFGrid grid;
    grid.times_s = d.residual.times();
    grid.freqs_hz = Eigen::VectorXd::LinSpaced(n_freq_bins, 0.0, fmax_hz);
    grid.energy = Eigen::MatrixXd::Zero(n_freq_bins, n);
    const double bin_width = fmax_hz / static_cast<double>(n_freq_bins - 1);
    for (const auto& mode : d.modes) {
        const ModeModel mm = ia_if(mode);
        for (Eigen::Index t = 0; t < n; ++t) {
            const double f = mm.if_track_hz[t];
            const double e = mm.ia_track[t] * mm.ia_track[t];
            const double pos = std::round(f / bin_width);
            if (!(f >= -0.5 * bin_width) || pos > static_cast<double>(n_freq_bins - 1)) {
                ++grid.dropped_points;
                continue;
            }
            grid.energy(static_cast<Eigen::Index>(std::max(0.0, pos)), t) += e;
        }
    }
    return grid;
}

}  // namespace sdecomp
