#include "sdecomp/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sdecomp/fft.hpp"

namespace sdecomp {

int SsaConfig::resolved_window(Eigen::Index n) const {
    return window_len.value_or(static_cast<int>(std::min<Eigen::Index>(n, 4 * static_cast<Eigen::Index>(L))));
}

int SsaConfig::resolved_hop(Eigen::Index n) const {
    return hop.value_or(std::max(1, resolved_window(n) / 4));
}

void SsaConfig::validate(Eigen::Index n) const {
    const int w = resolved_window(n);
    require(K >= 1, "SSA needs K >= 1");
    require(L >= 2 && 2 * L <= w, "SSA needs 2 <= L <= window_len / 2");
    require(w <= n, "SSA window longer than the signal");
    require(resolved_hop(n) >= 1, "SSA hop must be positive");
    require(epsilon >= 0.0, "SSA epsilon must be non-negative");
}

Eigen::MatrixXd embed(const Eigen::VectorXd& x, int L) {
    require(L >= 1 && x.size() > L, "window must be longer than the embedding dimension");
    const Eigen::Index cols = x.size() - L + 1;
    Eigen::MatrixXd m(L, cols);
    for (Eigen::Index j = 0; j < cols; ++j) m.col(j) = x.segment(j, L);
    return m;
}

Eigen::VectorXd diagonal_average(const Eigen::MatrixXd& m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(rows + cols - 1);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(rows + cols - 1);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            sum[i + j] += m(i, j);
            count[i + j] += 1.0;
        }
    }
    return sum.cwiseQuotient(count);
}

namespace {

// Diagonal average of the rank-one matrix s * u v^T without forming it.
Eigen::VectorXd rank_one_average(double s, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const Eigen::Index rows = u.size(), cols = v.size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(rows + cols - 1);
    for (Eigen::Index i = 0; i < rows; ++i) out.segment(i, cols) += u[i] * v;
    for (Eigen::Index t = 0; t < out.size(); ++t) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, t - cols + 1);
        const Eigen::Index hi = std::min<Eigen::Index>(rows - 1, t);
        out[t] *= s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

struct WindowClasses {
    std::vector<Eigen::VectorXd> segments;
};

std::vector<int> kmeans_1d(const std::vector<double>& values, const std::vector<double>& weights,
                           std::vector<double> centroids) {
    const std::size_t k = centroids.size();
    std::vector<int> label(values.size(), -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            int best = 0;
            for (std::size_t c = 1; c < k; ++c) {
                if (std::abs(values[i] - centroids[c]) < std::abs(values[i] - centroids[best])) best = static_cast<int>(c);
            }
            if (label[i] != best) {
                label[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        for (std::size_t c = 0; c < k; ++c) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (label[i] == static_cast<int>(c)) {
                    num += weights[i] * values[i];
                    den += weights[i];
                }
            }
            if (den > 0.0) centroids[c] = num / den;
        }
    }
    return label;
}

}  // namespace

EigentripleSet elementary_reconstructions(const Eigen::VectorXd& window, int L, double epsilon) {
    const Eigen::MatrixXd traj = embed(window, L);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(traj, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index kept = 0;
    while (kept < sv.size() && sv[kept] > epsilon * sv[0]) ++kept;
    EigentripleSet out;
    out.singular_values = sv.head(kept);
    out.components.resize(window.size(), kept);
    for (Eigen::Index i = 0; i < kept; ++i) {
        out.components.col(i) = rank_one_average(sv[i], svd.matrixU().col(i), svd.matrixV().col(i));
    }
    return out;
}

OverlapPlan overlap_plan(Eigen::Index n, int window_len, int hop) {
    require(window_len >= 2 && window_len <= n && hop >= 1, "invalid overlap plan");
    OverlapPlan plan;
    for (Eigen::Index s = 0; s + window_len <= n; s += hop) plan.starts.push_back(s);
    if (plan.starts.back() + window_len < n) plan.starts.push_back(n - window_len);
    plan.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(plan.starts.size()), n);
    for (std::size_t w = 0; w < plan.starts.size(); ++w) {
        for (int k = 0; k < window_len; ++k) {
            // strictly positive Hann taper so every sample has nonzero cover
            const double s = std::sin(std::numbers::pi * (k + 1) / (window_len + 1));
            plan.weights(static_cast<Eigen::Index>(w), plan.starts[w] + k) = s * s;
        }
    }
    const Eigen::RowVectorXd total = plan.weights.colwise().sum();
    for (Eigen::Index r = 0; r < plan.weights.rows(); ++r) {
        plan.weights.row(r) = plan.weights.row(r).cwiseQuotient(total);
    }
    return plan;
}

Decomposition ssa_decompose(const Signal& x, const SsaConfig& cfg) {
    const Eigen::Index n = x.size();
    cfg.validate(n);
    const int wlen = cfg.resolved_window(n);
    const OverlapPlan plan = overlap_plan(n, wlen, cfg.resolved_hop(n));
    const double fs = x.sample_rate_hz();
    const double resolution = fs / static_cast<double>(wlen);

    std::vector<EigentripleSet> sets;
    std::vector<std::vector<double>> freqs;
    int classes = cfg.K;
    for (auto start : plan.starts) {
        sets.push_back(elementary_reconstructions(x.samples().segment(start, wlen), cfg.L, cfg.epsilon));
        std::vector<double> f;
        for (Eigen::Index i = 0; i < sets.back().components.cols(); ++i) {
            f.push_back(dominant_frequency_hz(sets.back().components.col(i), fs));
        }
        // seeds need distinct frequencies; count how many the window can offer
        std::vector<double> distinct;
        for (double fi : f) {
            bool fresh = std::all_of(distinct.begin(), distinct.end(),
                                     [&](double d) { return std::abs(d - fi) > resolution; });
            if (fresh) distinct.push_back(fi);
        }
        classes = std::min<int>(classes, static_cast<int>(distinct.size()));
        freqs.push_back(std::move(f));
    }

    Decomposition d(x);
    if (classes < cfg.K) d.warnings.push_back("fewer eigentriples than requested classes");
    if (classes == 0) return d;

    std::vector<Eigen::VectorXd> modes(static_cast<std::size_t>(classes), Eigen::VectorXd::Zero(n));
    for (std::size_t w = 0; w < plan.starts.size(); ++w) {
        const auto& set = sets[w];
        const auto& f = freqs[w];
        std::vector<double> energy(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) energy[i] = set.singular_values[static_cast<Eigen::Index>(i)] * set.singular_values[static_cast<Eigen::Index>(i)];

        // triples are already sorted by energy; take the first distinct frequencies
        std::vector<double> centroids;
        for (double fi : f) {
            if (static_cast<int>(centroids.size()) == classes) break;
            bool fresh = std::all_of(centroids.begin(), centroids.end(),
                                     [&](double c) { return std::abs(c - fi) > resolution; });
            if (fresh) centroids.push_back(fi);
        }
        const std::vector<int> label = kmeans_1d(f, energy, centroids);

        std::vector<Eigen::VectorXd> segs(static_cast<std::size_t>(classes), Eigen::VectorXd::Zero(wlen));
        std::vector<double> num(static_cast<std::size_t>(classes), 0.0), den(static_cast<std::size_t>(classes), 0.0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto c = static_cast<std::size_t>(label[i]);
            segs[c] += set.components.col(static_cast<Eigen::Index>(i));
            num[c] += energy[i] * f[i];
            den[c] += energy[i];
        }
        std::vector<std::size_t> order(static_cast<std::size_t>(classes));
        std::iota(order.begin(), order.end(), 0);
        auto mean_freq = [&](std::size_t c) { return den[c] > 0.0 ? num[c] / den[c] : centroids[c]; };
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mean_freq(a) < mean_freq(b); });

        const Eigen::Index start = plan.starts[w];
        const Eigen::VectorXd weight = plan.weights.row(static_cast<Eigen::Index>(w)).segment(start, wlen).transpose();
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            modes[rank].segment(start, wlen) += weight.cwiseProduct(segs[order[rank]]);
        }
    }

    Eigen::VectorXd residual = x.samples();
    for (auto& m : modes) {
        residual -= m;
        d.modes.push_back(x.with_samples(std::move(m)));
    }
    d.residual = x.with_samples(residual);
    return d;
}

}  // namespace sdecomp
