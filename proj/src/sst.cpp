#include "sdecomp/sst.hpp"

#include <cmath>
#include <numbers>

#include "sdecomp/fft.hpp"

namespace sdecomp {

void SstConfig::validate() const {
    require(n_voices >= 4, "SST needs at least 4 voices per octave");
    require(gamma >= 0.0, "SST gamma must be non-negative");
    require(omega0 > 0.0, "Morlet center frequency must be positive");
    require(K >= 1, "SST needs K >= 1");
}

void RidgeConfig::validate() const {
    require(start_band >= 1 && max_step >= 1, "ridge start band and max step must be >= 1");
}

double CwtResult::log_step() const { return std::numbers::ln2 / static_cast<double>(n_voices); }

namespace {

double morlet_hat(double xi, double omega0) {
    const double d = xi - omega0;
    return 2.0 * std::exp(-0.5 * d * d);
}

}  // namespace

double morlet_admissibility(double omega0) {
    // trapezoid in log(xi); the integrand is negligible outside [omega0 - 12, omega0 + 12]
    const double lo = std::log(std::max(1e-8, omega0 - 12.0));
    const double hi = std::log(omega0 + 12.0);
    const int steps = 20000;
    const double h = (hi - lo) / steps;
    double acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        acc += w * morlet_hat(std::exp(lo + i * h), omega0);
    }
    return acc * h;
}

CwtResult cwt_morlet(const Signal& x, const SstConfig& cfg) {
    cfg.validate();
    require(x.size() >= 64, "CWT needs at least 64 samples");
    const Eigen::Index n = x.size();
    const double fs = x.sample_rate_hz();
    const double fmin = 2.0 / x.duration_s();
    const double fmax = 0.5 * fs;
    const auto rows =
        static_cast<Eigen::Index>(std::floor(cfg.n_voices * std::log2(fmax / fmin) + 1e-9)) + 1;

    CwtResult out;
    out.sample_rate_hz = fs;
    out.n_voices = cfg.n_voices;
    out.omega0 = cfg.omega0;
    out.freqs_hz.resize(rows);
    for (Eigen::Index j = 0; j < rows; ++j) {
        out.freqs_hz[j] = fmin * std::exp2(static_cast<double>(j) / cfg.n_voices);
    }
    out.coeffs.resize(rows, n);

    const Eigen::VectorXcd X = fft(x.samples());
    Eigen::VectorXcd filtered(n);
    for (Eigen::Index j = 0; j < rows; ++j) {
        filtered.setZero();
        for (Eigen::Index k = 1; k <= n / 2; ++k) {
            const double f = static_cast<double>(k) * fs / static_cast<double>(n);
            filtered[k] = X[k] * morlet_hat(cfg.omega0 * f / out.freqs_hz[j], cfg.omega0);
        }
        out.coeffs.row(j) = ifft(filtered).transpose();
    }
    return out;
}

namespace {

double absolute_threshold(const CwtResult& W, const SstConfig& cfg) {
    const double peak = W.coeffs.size() ? W.coeffs.cwiseAbs().maxCoeff() : 0.0;
    return cfg.gamma * peak;
}

}  // namespace

SqueezedTransform synchrosqueeze(const CwtResult& W, const SstConfig& cfg) {
    cfg.validate();
    const Eigen::Index rows = W.coeffs.rows();
    const Eigen::Index n = W.coeffs.cols();
    const double dt = 1.0 / W.sample_rate_hz;
    const double fmin = W.freqs_hz[0];

    SqueezedTransform S;
    S.coeffs = Eigen::MatrixXcd::Zero(rows, n);
    S.freqs_hz = W.freqs_hz;
    S.times_s = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) * dt;
    S.sample_rate_hz = W.sample_rate_hz;
    S.gain = 2.0 / morlet_admissibility(W.omega0);
    S.threshold = absolute_threshold(W, cfg);
    const double measure = W.log_step();

    for (Eigen::Index j = 0; j < rows; ++j) {
        for (Eigen::Index t = 0; t < n; ++t) {
            const std::complex<double> w = W.coeffs(j, t);
            if (!(std::abs(w) > S.threshold)) continue;
            // mean of the one-sample phase advances on either side; each is unambiguous up to Nyquist
            double advance = 0.0;
            int steps = 0;
            if (t > 0) {
                advance += std::arg(w * std::conj(W.coeffs(j, t - 1)));
                ++steps;
            }
            if (t + 1 < n) {
                advance += std::arg(W.coeffs(j, t + 1) * std::conj(w));
                ++steps;
            }
            const double omega_hz = advance / (2.0 * std::numbers::pi * steps * dt);
            if (!(omega_hz > 0.0)) {
                ++S.dropped_cells;
                continue;
            }
            const double pos = std::round(W.n_voices * std::log2(omega_hz / fmin));
            if (pos < 0.0 || pos > static_cast<double>(rows - 1)) {
                ++S.dropped_cells;
                continue;
            }
            S.coeffs(static_cast<Eigen::Index>(pos), t) += w * measure;
        }
    }
    return S;
}

double thresholded_mass(const CwtResult& W, const SstConfig& cfg) {
    const double thr = absolute_threshold(W, cfg);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < W.coeffs.size(); ++i) {
        const double a = std::abs(W.coeffs.data()[i]);
        if (a > thr) acc += a;
    }
    return acc * W.log_step();
}

TFGrid SqueezedTransform::energy_grid() const {
    TFGrid g;
    g.times_s = times_s;
    g.freqs_hz = freqs_hz;
    g.energy = coeffs.cwiseAbs2();
    g.dropped_points = dropped_cells;
    return g;
}

double SqueezedTransform::mass() const { return coeffs.cwiseAbs().sum(); }

bool RidgeTrack::any_valid() const {
    for (bool v : valid)
        if (v) return true;
    return false;
}

RidgeSet extract_ridges(const SqueezedTransform& S, const RidgeConfig& rcfg, int K, double gamma) {
    rcfg.validate();
    require(K >= 1, "ridge extraction needs K >= 1");
    Eigen::MatrixXd energy = S.coeffs.cwiseAbs2();
    const Eigen::Index rows = energy.rows();
    const Eigen::Index n = energy.cols();
    const double floor = gamma * (energy.size() ? energy.maxCoeff() : 0.0);

    RidgeSet out;
    for (int r = 0; r < K; ++r) {
        Eigen::Index l0 = 0, t0 = 0;
        const double peak = energy.size() ? energy.maxCoeff(&l0, &t0) : 0.0;
        if (!(peak > floor)) {
            out.incomplete = true;
            break;
        }
        RidgeTrack track;
        track.bins.assign(static_cast<std::size_t>(n), l0);
        track.valid.assign(static_cast<std::size_t>(n), false);
        track.valid[t0] = true;

        auto follow = [&](Eigen::Index step) {
            Eigen::Index prev = l0;
            bool alive = true;
            for (Eigen::Index t = t0 + step; t >= 0 && t < n; t += step) {
                if (alive) {
                    const Eigen::Index lo = std::max<Eigen::Index>(0, prev - rcfg.max_step);
                    const Eigen::Index hi = std::min<Eigen::Index>(rows - 1, prev + rcfg.max_step);
                    Eigen::Index best = prev;
                    double best_e = -1.0;
                    for (Eigen::Index l = lo; l <= hi; ++l) {
                        if (energy(l, t) > best_e) {
                            best_e = energy(l, t);
                            best = l;
                        }
                    }
                    if (best_e > floor) {
                        prev = best;
                        track.valid[t] = true;
                    } else {
                        alive = false;
                    }
                }
                track.bins[t] = prev;
            }
        };
        follow(+1);
        follow(-1);

        for (Eigen::Index t = 0; t < n; ++t) {
            if (!track.valid[t]) continue;
            const Eigen::Index lo = std::max<Eigen::Index>(0, track.bins[t] - rcfg.start_band);
            const Eigen::Index hi = std::min<Eigen::Index>(rows - 1, track.bins[t] + rcfg.start_band);
            energy.col(t).segment(lo, hi - lo + 1).setZero();
        }
        out.tracks.push_back(std::move(track));
    }
    return out;
}

Signal reconstruct_mode(const SqueezedTransform& S, const RidgeTrack& track, int half_width) {
    require(half_width >= 0, "half width must be non-negative");
    const Eigen::Index rows = S.coeffs.rows();
    const Eigen::Index n = S.coeffs.cols();
    require(static_cast<Eigen::Index>(track.bins.size()) == n, "ridge track length mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        if (!track.valid[t]) continue;
        const Eigen::Index lo = std::max<Eigen::Index>(0, track.bins[t] - half_width);
        const Eigen::Index hi = std::min<Eigen::Index>(rows - 1, track.bins[t] + half_width);
        out[t] = (S.gain * S.coeffs.col(t).segment(lo, hi - lo + 1).sum()).real();
    }
    return Signal(std::move(out), S.sample_rate_hz);
}

SstResult sst_decompose(const Signal& x, const SstConfig& cfg, const RidgeConfig& rcfg,
                        std::optional<int> half_width) {
    const CwtResult W = cwt_morlet(x, cfg);
    SqueezedTransform S = synchrosqueeze(W, cfg);
    RidgeSet ridges = extract_ridges(S, rcfg, cfg.K, cfg.gamma);
    const int hw = half_width.value_or(rcfg.start_band);
    Decomposition d(x);
    Eigen::VectorXd residual = x.samples();
    for (const auto& track : ridges.tracks) {
        Signal mode = x.with_samples(reconstruct_mode(S, track, hw).samples());
        residual -= mode.samples();
        d.modes.push_back(std::move(mode));
    }
    d.residual = x.with_samples(residual);
    if (ridges.incomplete) d.warnings.push_back("fewer ridges than requested");
    return {std::move(d), std::move(ridges), std::move(S)};
}

}  // namespace sdecomp
