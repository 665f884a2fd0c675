#include "sdecomp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdecomp {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd time_axis(Eigen::Index n, double fs) {
    return Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / fs;
}

// Gaussian smoothing with a truncated (+-4 sigma) kernel and edge replication.
Eigen::VectorXd gaussian_smooth(const Eigen::VectorXd& x, double sigma_samples) {
    if (sigma_samples <= 0.0) return x;
    const auto half = static_cast<Eigen::Index>(std::ceil(4.0 * sigma_samples));
    Eigen::VectorXd kernel(2 * half + 1);
    for (Eigen::Index k = -half; k <= half; ++k) {
        const double u = static_cast<double>(k) / sigma_samples;
        kernel[k + half] = std::exp(-0.5 * u * u);
    }
    kernel /= kernel.sum();
    const Eigen::Index n = x.size();
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index k = -half; k <= half; ++k) {
            const Eigen::Index j = std::clamp<Eigen::Index>(i + k, 0, n - 1);
            acc += kernel[k + half] * x[j];
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace

double s11_if_hz(double t) { return 15.0 * (2.0 - 0.3 * std::sin(t)); }
double s12_if_hz(double t) { return 15.0 * (2.4 + 0.6 * std::pow(t, 0.2) + 0.3 * std::cos(t)); }
double s13_if_hz(double t) { return 15.0 * (5.3 + 0.26 * std::pow(t, 0.3)); }
double s21_if_hz(double t) { return 0.55 * (50.0 - 200.0 * t + 1248.0 * t * t - 800.0 * t * t * t); }

SyntheticSignal gen_s1(std::optional<GapSpec> gap) {
    if (gap) {
        require(gap->start_s >= 0.0 && gap->start_s < gap->end_s && gap->end_s <= kS1DurationS,
                "gap must satisfy 0 <= start < end <= 10 s");
    }
    const auto n = static_cast<Eigen::Index>(kS1DurationS * kS1SampleRateHz);
    const Eigen::VectorXd t = time_axis(n, kS1SampleRateHz);
    Eigen::VectorXd s11(n), s12(n), s13(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ti = t[i];
        s11[i] = (1.0 + 0.2 * std::cos(ti)) * std::cos(30.0 * kPi * (2.0 * ti + 0.3 * std::cos(ti)));
        s12[i] = (1.0 + 0.3 * std::cos(2.0 * ti)) * std::exp(-ti / 15.0) *
                 std::cos(30.0 * kPi * (2.4 * ti + 0.5 * std::pow(ti, 1.2) + 0.3 * std::sin(ti)));
        s13[i] = std::cos(30.0 * kPi * (5.3 * ti + 0.2 * std::pow(ti, 1.3)));
        if (gap && ti >= gap->start_s && ti < gap->end_s) s13[i] = 0.0;
    }
    Signal r1(s11, kS1SampleRateHz), r2(s12, kS1SampleRateHz), r3(s13, kS1SampleRateHz);
    SyntheticSignal out{r1 + r2 + r3, {r1, r2, r3}, {"s1", "s11", "s12", "s13"}};
    return out;
}

SyntheticSignal gen_s2(const S2Config& cfg) {
    const double n_real = cfg.duration_s * cfg.sample_rate_hz;
    require(cfg.duration_s > 0.0 && cfg.sample_rate_hz > 0.0, "duration and sample rate must be positive");
    require(std::abs(n_real - std::round(n_real)) < 1e-9, "duration * sample rate must be an integer");
    require(cfg.smoothing_sigma_s > 0.0 && cfg.carrier_hz > 0.0, "smoothing sigma and carrier must be positive");
    const auto n = static_cast<Eigen::Index>(std::llround(n_real));
    const double dt = 1.0 / cfg.sample_rate_hz;
    const Eigen::VectorXd t = time_axis(n, cfg.sample_rate_hz);

    GaussianSource gauss(cfg.rng_seed);
    Eigen::VectorXd brown(n);
    brown[0] = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        brown[i + 1] = brown[i] + cfg.drift * dt + cfg.volatility * std::sqrt(dt) * gauss.next();
    }
    const Eigen::VectorXd smooth = gaussian_smooth(brown, cfg.smoothing_sigma_s * cfg.sample_rate_hz);

    Eigen::VectorXd s21(n), s22(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ti = t[i];
        const double poly = 0.8 + 50.0 * ti - 100.0 * ti * ti + 416.0 * ti * ti * ti - 200.0 * ti * ti * ti * ti;
        s21[i] = std::exp(0.8 * ti) * std::cos(1.1 * kPi * poly);
        const double envelope = std::max(0.05, 1.0 + smooth[i]);
        s22[i] = envelope * std::cos(2.0 * kPi * cfg.carrier_hz * ti);
    }
    Signal r1(s21, cfg.sample_rate_hz), r2(s22, cfg.sample_rate_hz);
    return SyntheticSignal{r1 + r2, {r1, r2}, {"s2", "s21", "s22"}};
}

MultivariateTestSignal gen_mv_test(double duration_s, double sample_rate_hz) {
    require(sample_rate_hz > 100.0, "multivariate test signal needs fs > 100 Hz");
    require(duration_s > 0.0, "duration must be positive");
    const auto n = static_cast<Eigen::Index>(std::llround(duration_s * sample_rate_hz));
    require(n >= 2, "duration too short");
    const Eigen::VectorXd t = time_axis(n, sample_rate_hz);
    auto tone = [&](double f) {
        return Signal((2.0 * kPi * f * t.array()).sin().matrix(), sample_rate_hz);
    };
    const Signal t2 = tone(2.0), t20 = tone(20.0), t50 = tone(50.0);
    MultivariateTestSignal out{
        MultichannelSignal(std::vector<Signal>{t2 + t50, t2 + t20 + t50}),
        {{2.0, 2.0}, {std::nullopt, 20.0}, {50.0, 50.0}},
        {{t2, t2}, {std::nullopt, t20}, {t50, t50}}};
    return out;
}

double GaussianSource::uniform_open() {
    // 53 random mantissa bits mapped to (0, 1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double GaussianSource::next() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    return r * std::cos(2.0 * kPi * u2);
}

Eigen::VectorXd GaussianSource::draw(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = next();
    return v;
}

Signal add_wgn(const Signal& x, double snr_db, std::uint64_t seed) {
    require(std::isfinite(snr_db), "SNR must be finite");
    const double signal_power = x.samples().squaredNorm() / static_cast<double>(x.size());
    require(signal_power > 0.0, "SNR is undefined for an all-zero signal");
    GaussianSource gauss(seed);
    Eigen::VectorXd noise = gauss.draw(x.size());
    const double drawn_power = noise.squaredNorm() / static_cast<double>(x.size());
    const double target_power = signal_power / std::pow(10.0, snr_db / 10.0);
    noise *= std::sqrt(target_power / drawn_power);
    return x.with_samples(x.samples() + noise);
}

MultichannelSignal add_wgn(const MultichannelSignal& x, double snr_db, std::uint64_t seed) {
    Eigen::MatrixXd out(x.n_channels(), x.size());
    for (Eigen::Index c = 0; c < x.n_channels(); ++c) {
        const std::uint64_t channel_seed = seed + static_cast<std::uint64_t>(c) * 0x9E3779B97F4A7C15ULL;
        out.row(c) = add_wgn(x.channel(c), snr_db, channel_seed).samples().transpose();
    }
    return MultichannelSignal(std::move(out), x.sample_rate_hz());
}

double realized_snr_db(const Signal& clean, const Signal& noisy) {
    require_compatible(clean, noisy);
    const double noise = (noisy.samples() - clean.samples()).squaredNorm();
    return 10.0 * std::log10(clean.samples().squaredNorm() / noise);
}

}  // namespace sdecomp
