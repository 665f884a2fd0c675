#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdecomp/variational.hpp"

namespace sdecomp {

void VncmdConfig::validate(double sample_rate_hz) const {
    require(!init_if_hz.empty(), "VNCMD needs at least one initial IF");
    const double nyquist = 0.5 * sample_rate_hz;
    for (std::size_t i = 0; i < init_if_hz.size(); ++i) {
        require(init_if_hz[i] > 0.0 && init_if_hz[i] < nyquist, "VNCMD initial IFs must lie in (0, Nyquist)");
        for (std::size_t j = 0; j < i; ++j) require(init_if_hz[i] != init_if_hz[j], "VNCMD initial IFs must be distinct");
    }
    require(alpha > 0.0 && mu > 0.0, "VNCMD alpha and mu must be positive");
    require(if_smoothing > 0.0, "VNCMD IF smoothing weight must be positive");
    require(tol > 0.0 && max_iters >= 1, "VNCMD tolerance and iteration cap must be positive");
}

namespace {

/// Symmetric pentadiagonal system diag(c^2) + w * D2'D2, factored by banded Cholesky.
class EnvelopeSolver {
public:
    EnvelopeSolver(Eigen::Index n, double weight) : n_(n), weight_(weight) {
        base0_ = Eigen::VectorXd::Constant(n, 6.0);
        base1_ = Eigen::VectorXd::Constant(std::max<Eigen::Index>(n - 1, 0), -4.0);
        base2_ = Eigen::VectorXd::Constant(std::max<Eigen::Index>(n - 2, 0), 1.0);
        if (n >= 3) {
            base0_[0] = base0_[n - 1] = 1.0;
            base0_[1] = base0_[n - 2] = 5.0;
            base1_[0] = base1_[n - 2] = -2.0;
        } else {
            base0_.setZero();
            base1_.setZero();
            base2_.setZero();
        }
        if (n == 3) base0_[1] = 4.0;
        base0_ *= weight_;
        base1_ *= weight_;
        base2_ *= weight_;
    }

    /// Solves (diag(carrier^2) + w D2'D2) a = carrier .* rhs.
    Eigen::VectorXd solve(const Eigen::VectorXd& carrier, const Eigen::VectorXd& rhs) const {
        const Eigen::Index n = n_;
        // A = L D L^T with unit lower L of bandwidth 2
        Eigen::VectorXd d(n), e1 = Eigen::VectorXd::Zero(n), e2 = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double di = base0_[i] + carrier[i] * carrier[i];
            if (i >= 2) {
                e2[i] = base2_[i - 2] / d[i - 2];
            }
            if (i >= 1) {
                double a1 = base1_[i - 1];
                if (i >= 2) a1 -= e2[i] * d[i - 2] * e1[i - 1];
                e1[i] = a1 / d[i - 1];
            }
            if (i >= 1) di -= e1[i] * e1[i] * d[i - 1];
            if (i >= 2) di -= e2[i] * e2[i] * d[i - 2];
            d[i] = di;
        }
        Eigen::VectorXd y = carrier.cwiseProduct(rhs);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i >= 1) y[i] -= e1[i] * y[i - 1];
            if (i >= 2) y[i] -= e2[i] * y[i - 2];
        }
        for (Eigen::Index i = 0; i < n; ++i) y[i] /= d[i];
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (i + 1 < n) y[i] -= e1[i + 1] * y[i + 1];
            if (i + 2 < n) y[i] -= e2[i + 2] * y[i + 2];
        }
        return y;
    }

    double penalty(const Eigen::VectorXd& a) const {
        double acc = 0.0;
        for (Eigen::Index i = 0; i + 2 < a.size(); ++i) {
            const double d2 = a[i] - 2.0 * a[i + 1] + a[i + 2];
            acc += d2 * d2;
        }
        return weight_ * acc;
    }

private:
    Eigen::Index n_;
    double weight_;
    Eigen::VectorXd base0_, base1_, base2_;
};

Eigen::VectorXd centered_derivative(const Eigen::VectorXd& x, double dt) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    d[0] = (x[1] - x[0]) / dt;
    d[n - 1] = (x[n - 1] - x[n - 2]) / dt;
    return d;
}

Eigen::VectorXd integrate_phase(const Eigen::VectorXd& if_hz, double dt) {
    Eigen::VectorXd phase(if_hz.size());
    phase[0] = 0.0;
    for (Eigen::Index i = 1; i < if_hz.size(); ++i) {
        phase[i] = phase[i - 1] + std::numbers::pi * (if_hz[i] + if_hz[i - 1]) * dt;
    }
    return phase;
}

struct ModeState {
    Eigen::VectorXd if_hz, cos_c, sin_c, a, b, mode;

    void set_carriers(double dt) {
        const Eigen::VectorXd phase = integrate_phase(if_hz, dt);
        cos_c = phase.array().cos().matrix();
        sin_c = phase.array().sin().matrix();
    }
    void refresh_mode() { mode = a.cwiseProduct(cos_c) + b.cwiseProduct(sin_c); }
};

}  // namespace

VncmdResult vncmd_decompose(const Signal& x, const VncmdConfig& cfg) {
    cfg.validate(x.sample_rate_hz());
    const Eigen::Index n = x.size();
    require(n >= 8, "VNCMD needs at least 8 samples");
    const double dt = x.dt();
    const auto K = static_cast<std::size_t>(cfg.K());
    const EnvelopeSolver solver(n, 1.0 / cfg.alpha);
    const EnvelopeSolver if_smoother(n, cfg.if_smoothing);
    const Eigen::VectorXd& g = x.samples();

    std::vector<ModeState> modes(K);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < K; ++k) {
        auto& m = modes[k];
        m.if_hz = Eigen::VectorXd::Constant(n, cfg.init_if_hz[k]);
        m.set_carriers(dt);
        m.a = solver.solve(m.cos_c, g);
        m.b = solver.solve(m.sin_c, g);
        m.refresh_mode();
        total += m.mode;
    }

    auto objective = [&] {
        double j = (g - total).squaredNorm();
        for (const auto& m : modes) j += solver.penalty(m.a) + solver.penalty(m.b);
        return j;
    };
    auto assemble = [&] {
        Decomposition d(x);
        std::vector<Eigen::VectorXd> tracks;
        Eigen::VectorXd residual = g;
        for (const auto& m : modes) {
            d.modes.push_back(x.with_samples(m.mode));
            tracks.push_back(m.if_hz);
            residual -= m.mode;
        }
        d.residual = x.with_samples(residual);
        d.if_tracks_hz = std::move(tracks);
        return d;
    };

    ConvergenceReport report;
    double last_update = INFINITY;
    int growth_streak = 0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        double update = 0.0;
        for (auto& m : modes) {
            const Eigen::VectorXd previous = m.mode;
            total -= m.mode;
            // cosine then sine envelope against the current residual
            Eigen::VectorXd sin_part = m.b.cwiseProduct(m.sin_c);
            m.a = solver.solve(m.cos_c, g - total - sin_part);
            Eigen::VectorXd cos_part = m.a.cwiseProduct(m.cos_c);
            m.b = solver.solve(m.sin_c, g - total - cos_part);

            // IF increment from the demodulated quadrature pair
            const Eigen::VectorXd da = centered_derivative(m.a, dt);
            const Eigen::VectorXd db = centered_derivative(m.b, dt);
            // energy-weighted low-pass of the increment:
            // (E + w D2'D2) delta = E .* raw, with E the envelope energy scaled to unit mean
            Eigen::VectorXd energy(n), weighted(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                energy[i] = m.a[i] * m.a[i] + m.b[i] * m.b[i];
                weighted[i] = (m.a[i] * db[i] - m.b[i] * da[i]) / (2.0 * std::numbers::pi);
            }
            const double mean_energy = energy.mean();
            Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
            if (mean_energy > 0.0) {
                const Eigen::VectorXd root = (energy / mean_energy).cwiseSqrt();
                Eigen::VectorXd rhs(n);
                for (Eigen::Index i = 0; i < n; ++i) rhs[i] = root[i] > 0.0 ? weighted[i] / mean_energy / root[i] : 0.0;
                delta = if_smoother.solve(root, rhs);
            }
            m.if_hz -= cfg.mu * delta;
            m.set_carriers(dt);

            sin_part = m.b.cwiseProduct(m.sin_c);
            m.a = solver.solve(m.cos_c, g - total - sin_part);
            cos_part = m.a.cwiseProduct(m.cos_c);
            m.b = solver.solve(m.sin_c, g - total - cos_part);
            m.refresh_mode();
            total += m.mode;

            const double old_norm = previous.norm();
            const double rel = old_norm > 0.0 ? (m.mode - previous).norm() / old_norm : 1.0;
            update += rel * rel;
        }
        const double j = objective();
        if (!std::isfinite(update) || !std::isfinite(j)) {
            throw NumericalFailure("VNCMD iteration produced a non-finite value");
        }
        report.objective_trace.push_back(j);
        report.iterations = iter + 1;
        report.final_update = update;
        growth_streak = update > last_update ? growth_streak + 1 : 0;
        last_update = update;
        if (growth_streak >= 10) throw VncmdDiverged(assemble(), report);
        if (update < cfg.tol) {
            report.converged = true;
            break;
        }
    }
    return {assemble(), std::move(report)};
}

}  // namespace sdecomp
