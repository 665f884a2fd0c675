#include "sdecomp/multivariate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sdecomp/spline.hpp"
#include "vmd_core.hpp"

namespace sdecomp {

void MemdConfig::validate(Eigen::Index n_channels) const {
    require(n_channels >= 2, "MEMD needs at least 2 channels");
    require(M >= n_channels, "MEMD needs at least as many directions as channels");
    emd.validate();
}

VmdConfig MvmdConfig::as_vmd() const {
    VmdConfig v;
    v.K = K;
    v.alpha = alpha;
    v.tau = tau;
    v.tol = tol;
    v.max_iters = max_iters;
    v.init_mode = init_mode;
    v.seed = seed;
    return v;
}

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

Eigen::MatrixXd hypersphere_directions(int M, int n_channels, std::uint64_t seed) {
    require(n_channels >= 2, "directions need at least 2 dimensions");
    require(M >= 1, "number of directions must be positive");
    require(n_channels - 1 <= static_cast<int>(std::size(kPrimes)) + 1, "too many channels for the direction set");
    const int dims = n_channels - 1;  // sphere parameters

    std::vector<double> shift(static_cast<std::size_t>(dims), 0.0);
    if (seed != 0) {
        std::mt19937_64 engine(seed);
        for (auto& s : shift) s = static_cast<double>(engine() >> 11) * (1.0 / 9007199254740992.0);
    }

    Eigen::MatrixXd dirs(n_channels, M);
    for (int i = 0; i < M; ++i) {
        // centred Hammersley point: (i + 1/2)/M in the first coordinate, radical inverses after
        std::vector<double> u(static_cast<std::size_t>(dims));
        for (int j = 0; j < dims; ++j) {
            const double raw = j == 0 ? (static_cast<double>(i) + 0.5) / M
                                      : radical_inverse(static_cast<std::uint64_t>(i), kPrimes[j - 1]);
            u[j] = std::fmod(raw + shift[j], 1.0);
        }
        // azimuth from the first coordinate; polar angles mapped so the caps get equal area
        Eigen::VectorXd v(n_channels);
        double sin_prod = 1.0;
        for (int j = dims - 1; j >= 1; --j) {
            const double polar = std::acos(1.0 - 2.0 * u[j]);
            v[dims - j + 1] = sin_prod * std::cos(polar);
            sin_prod *= std::sin(polar);
        }
        const double azimuth = 2.0 * std::numbers::pi * u[0];
        v[0] = sin_prod * std::cos(azimuth);
        v[1] = sin_prod * std::sin(azimuth);
        dirs.col(i) = v / v.norm();
    }
    return dirs;
}

namespace {

struct MultiEnvelope {
    Eigen::MatrixXd mean;    // samples x channels
    Eigen::VectorXd amp;     // averaged half-range norm per sample
    int used_directions = 0;
};

MultiEnvelope multivariate_envelope(const Eigen::MatrixXd& m, const Eigen::MatrixXd& dirs, int depth) {
    const Eigen::Index n = m.rows();
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    MultiEnvelope env{Eigen::MatrixXd::Zero(n, m.cols()), Eigen::VectorXd::Zero(n), 0};
    for (Eigen::Index d = 0; d < dirs.cols(); ++d) {
        const Eigen::VectorXd proj = m * dirs.col(d);
        EnvelopeKnots knots;
        try {
            knots = mirror_extrema(find_extrema(proj), proj, m, depth);
        } catch (const NotEnoughExtrema&) {
            continue;
        }
        const Eigen::MatrixXd upper = natural_spline(knots.max_times, knots.max_values, t);
        const Eigen::MatrixXd lower = natural_spline(knots.min_times, knots.min_values, t);
        env.mean += 0.5 * (upper + lower);
        env.amp += 0.5 * (upper - lower).rowwise().norm();
        ++env.used_directions;
    }
    if (env.used_directions > 0) {
        env.mean /= env.used_directions;
        env.amp /= env.used_directions;
    }
    return env;
}

bool any_direction_oscillates(const Eigen::MatrixXd& r, const Eigen::MatrixXd& dirs) {
    for (Eigen::Index d = 0; d < dirs.cols(); ++d) {
        if (find_extrema(Eigen::VectorXd(r * dirs.col(d))).count() >= 3) return true;
    }
    return false;
}

}  // namespace

AlignedDecomposition memd_decompose(const MultichannelSignal& x, const MemdConfig& cfg) {
    cfg.validate(x.n_channels());
    const Eigen::MatrixXd dirs = hypersphere_directions(cfg.M, static_cast<int>(x.n_channels()), cfg.seed);
    Eigen::MatrixXd residual = x.data().transpose();  // samples x channels
    std::vector<Eigen::MatrixXd> imfs;

    while (static_cast<int>(imfs.size()) < cfg.emd.max_imfs && any_direction_oscillates(residual, dirs)) {
        Eigen::MatrixXd m = residual;
        bool extracted = false;
        for (int it = 0; it < cfg.emd.max_sift_iters; ++it) {
            const MultiEnvelope env = multivariate_envelope(m, dirs, cfg.emd.boundary_extrema);
            if (env.used_directions == 0) break;
            extracted = true;
            Eigen::VectorXd sigma(m.rows());
            for (Eigen::Index i = 0; i < sigma.size(); ++i) {
                const double mean_norm = env.mean.row(i).norm();
                sigma[i] = env.amp[i] > 0.0 ? mean_norm / env.amp[i] : (mean_norm == 0.0 ? 0.0 : INFINITY);
            }
            if (sifting_converged(sigma, cfg.emd)) break;
            m -= env.mean;
        }
        if (!extracted) break;
        residual -= m;
        imfs.push_back(std::move(m));
    }

    AlignedDecomposition out;
    const double fs = x.sample_rate_hz();
    for (Eigen::Index c = 0; c < x.n_channels(); ++c) {
        Decomposition d(Signal(residual.col(c), fs));
        for (const auto& imf : imfs) d.modes.emplace_back(imf.col(c), fs);
        out.channels.push_back(std::move(d));
    }
    return out;
}

namespace {

AlignedDecomposition from_core(const MultichannelSignal& x, const detail::VmdCoreResult& core) {
    const double fs = x.sample_rate_hz();
    std::vector<double> centers;
    for (double w : core.omega) centers.push_back(w * fs);
    AlignedDecomposition out;
    for (Eigen::Index c = 0; c < x.n_channels(); ++c) {
        Eigen::VectorXd residual = x.data().row(c).transpose();
        Decomposition d(x.channel(c));
        for (const auto& mode : core.modes) {
            Eigen::VectorXd v = mode.row(c).transpose();
            residual -= v;
            d.modes.emplace_back(std::move(v), fs);
        }
        d.residual = Signal(residual, fs);
        d.center_freqs_hz = centers;
        if (!core.report.converged) d.warnings.push_back("iteration cap reached before tolerance");
        out.channels.push_back(std::move(d));
    }
    out.center_freqs_hz = centers;
    return out;
}

}  // namespace

AlignedDecomposition mvmd_decompose(const MultichannelSignal& x, const MvmdConfig& cfg) {
    return from_core(x, detail::vmd_core(x.data(), cfg.as_vmd()));
}

AlignedDecomposition vmd_channelwise(const MultichannelSignal& x, const VmdConfig& cfg) {
    AlignedDecomposition out;
    for (Eigen::Index c = 0; c < x.n_channels(); ++c) {
        out.channels.push_back(vmd_decompose(x.channel(c), cfg).decomposition);
    }
    return out;
}

}  // namespace sdecomp
