#include "sdecomp/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sdecomp/fft.hpp"
#include "vmd_core.hpp"

namespace sdecomp {

void VmdConfig::validate() const {
    require(K >= 1, "VMD needs K >= 1");
    require(alpha > 0.0, "VMD alpha must be positive");
    require(tau >= 0.0, "VMD tau must be non-negative");
    require(tol > 0.0 && max_iters >= 1, "VMD tolerance and iteration cap must be positive");
}

namespace detail {

namespace {

Eigen::VectorXd mirror(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    const Eigen::Index h = n / 2;
    Eigen::VectorXd out(2 * n);
    out.head(h) = x.head(h).reverse();
    out.segment(h, n) = x;
    out.tail(n - h) = x.tail(n - h).reverse();
    return out;
}

std::vector<double> initial_omegas(const VmdConfig& cfg, Eigen::Index mirrored_len) {
    std::vector<double> omega(static_cast<std::size_t>(cfg.K), 0.0);
    switch (cfg.init_mode) {
        case VmdInit::zeros:
            break;
        case VmdInit::uniform:
            for (int k = 0; k < cfg.K; ++k) omega[k] = 0.5 * (k + 1) / (cfg.K + 1);
            break;
        case VmdInit::random: {
            std::mt19937_64 engine(cfg.seed);
            const double lo = std::log(1.0 / static_cast<double>(mirrored_len));
            const double hi = std::log(0.5);
            for (auto& w : omega) {
                const double u = static_cast<double>(engine() >> 11) * (1.0 / 9007199254740992.0);
                w = std::exp(lo + (hi - lo) * u);
            }
            std::sort(omega.begin(), omega.end());
            break;
        }
    }
    return omega;
}

}  // namespace

VmdCoreResult vmd_core(const Eigen::MatrixXd& channels, const VmdConfig& cfg) {
    cfg.validate();
    const Eigen::Index n = channels.cols();
    const Eigen::Index n_ch = channels.rows();
    require(2 * cfg.K < n, "VMD needs K < N/2");
    const Eigen::Index T = 2 * n;
    const Eigen::Index n_bins = T / 2 + 1;
    const auto K = static_cast<std::size_t>(cfg.K);

    Eigen::VectorXd freqs(n_bins);
    for (Eigen::Index j = 0; j < n_bins; ++j) freqs[j] = static_cast<double>(j) / static_cast<double>(T);

    // one-sided spectra of the mirrored channels, bins x channels
    Eigen::MatrixXcd spectrum(n_bins, n_ch);
    for (Eigen::Index c = 0; c < n_ch; ++c) {
        const Eigen::VectorXcd full = fft(mirror(channels.row(c).transpose()));
        spectrum.col(c) = full.head(n_bins);
    }

    std::vector<Eigen::MatrixXcd> u(K, Eigen::MatrixXcd::Zero(n_bins, n_ch));
    Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(n_bins, n_ch);
    Eigen::MatrixXcd u_sum = Eigen::MatrixXcd::Zero(n_bins, n_ch);
    std::vector<double> omega = initial_omegas(cfg, T);
    std::vector<int> collide_count(K, 0);
    const double bin = 1.0 / static_cast<double>(T);

    ConvergenceReport report;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        double update = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const Eigen::MatrixXcd previous = u[k];
            u_sum -= previous;
            const Eigen::ArrayXd weight =
                1.0 / (1.0 + 2.0 * cfg.alpha * (freqs.array() - omega[k]).square());
            Eigen::MatrixXcd target = spectrum - u_sum + 0.5 * lambda;
            u[k] = (target.array().colwise() * weight.cast<std::complex<double>>()).matrix();
            u_sum += u[k];

            const Eigen::VectorXd power = u[k].cwiseAbs2().rowwise().sum();
            const double mass = power.sum();
            if (mass > 0.0) omega[k] = freqs.dot(power) / mass;

            const double old_norm = previous.squaredNorm();
            const double diff = (u[k] - previous).squaredNorm();
            update += old_norm > 0.0 ? diff / old_norm : (diff > 0.0 ? 1.0 : 0.0);
        }
        // keep colliding centers from locking onto a shared fixed point
        for (std::size_t k = 1; k < K; ++k) {
            bool collides = false;
            for (std::size_t j = 0; j < k; ++j) collides |= std::abs(omega[k] - omega[j]) < bin;
            collide_count[k] = collides ? collide_count[k] + 1 : 0;
            if (collide_count[k] >= 5) {
                omega[k] = std::min(0.5, omega[k] + 2.0 * bin);
                collide_count[k] = 0;
            }
        }
        if (cfg.tau > 0.0) lambda += cfg.tau * (spectrum - u_sum);

        double objective = (spectrum - u_sum).squaredNorm();
        for (std::size_t k = 0; k < K; ++k) {
            const Eigen::VectorXd power = u[k].cwiseAbs2().rowwise().sum();
            objective += 2.0 * cfg.alpha * ((freqs.array() - omega[k]).square() * power.array()).sum();
        }
        objective /= static_cast<double>(T);
        if (!std::isfinite(update) || !std::isfinite(objective) ||
            std::any_of(omega.begin(), omega.end(), [](double w) { return !std::isfinite(w); })) {
            throw NumericalFailure("VMD iteration produced a non-finite value");
        }
        report.objective_trace.push_back(objective);
        report.iterations = iter + 1;
        report.final_update = update;
        if (update < cfg.tol) {
            report.converged = true;
            break;
        }
    }

    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return omega[a] < omega[b]; });

    VmdCoreResult out;
    out.report = std::move(report);
    const Eigen::Index h = n / 2;
    for (auto k : order) {
        Eigen::MatrixXd mode(n_ch, n);
        for (Eigen::Index c = 0; c < n_ch; ++c) {
            mode.row(c) = irfft_half(u[k].col(c), T).segment(h, n).transpose();
        }
        out.modes.push_back(std::move(mode));
        out.omega.push_back(omega[k]);
    }
    return out;
}

}  // namespace detail

VmdResult vmd_decompose(const Signal& x, const VmdConfig& cfg) {
    detail::VmdCoreResult core = detail::vmd_core(x.samples().transpose(), cfg);
    Decomposition d(x);
    std::vector<double> centers;
    Eigen::VectorXd residual = x.samples();
    for (std::size_t k = 0; k < core.modes.size(); ++k) {
        const Eigen::VectorXd mode = core.modes[k].row(0).transpose();
        residual -= mode;
        d.modes.push_back(x.with_samples(mode));
        centers.push_back(core.omega[k] * x.sample_rate_hz());
    }
    d.residual = x.with_samples(residual);
    d.center_freqs_hz = std::move(centers);
    return {std::move(d), std::move(core.report)};
}

}  // namespace sdecomp
