#include "sdecomp/emd.hpp"

#include <algorithm>
#include <cmath>

#include "sdecomp/spline.hpp"

namespace sdecomp {

void EmdConfig::validate() const {
    require(theta1 > 0.0 && theta1 < theta2, "EMD thresholds need 0 < theta1 < theta2");
    require(alpha_fraction > 0.0 && alpha_fraction < 1.0, "EMD alpha fraction must lie in (0, 1)");
    require(max_sift_iters >= 1 && max_imfs >= 1, "EMD iteration caps must be positive");
    require(boundary_extrema >= 1, "mirror depth must be positive");
}

Extrema find_extrema(const Eigen::VectorXd& x) {
    Extrema ext;
    const Eigen::Index n = x.size();
    Eigen::Index i = 1;
    while (i < n - 1) {
        if (x[i] == x[i - 1]) {
            ++i;
            continue;
        }
        Eigen::Index j = i;
        while (j + 1 < n && x[j + 1] == x[i]) ++j;
        if (j + 1 >= n) break;
        const Eigen::Index mid = (i + j) / 2;
        if (x[i] > x[i - 1] && x[j] > x[j + 1]) ext.maxima.push_back(mid);
        else if (x[i] < x[i - 1] && x[j] < x[j + 1]) ext.minima.push_back(mid);
        i = j + 1;
    }
    return ext;
}

std::size_t count_zero_crossings(const Eigen::VectorXd& x) {
    std::size_t count = 0;
    Eigen::Index i = 0;
    const Eigen::Index n = x.size();
    while (i < n && x[i] == 0.0) ++i;
    double last_sign = i < n ? (x[i] > 0.0 ? 1.0 : -1.0) : 0.0;
    bool in_zero_run = false;
    for (; i < n; ++i) {
        if (x[i] == 0.0) {
            if (!in_zero_run) ++count;
            in_zero_run = true;
            continue;
        }
        const double s = x[i] > 0.0 ? 1.0 : -1.0;
        if (!in_zero_run && s != last_sign) ++count;
        in_zero_run = false;
        last_sign = s;
    }
    return count;
}

namespace {

using Indices = std::vector<Eigen::Index>;

// Reversed copy of v[first, last) with bounds clamped to the vector.
Indices reversed_slice(const Indices& v, long first, long last) {
    first = std::max<long>(first, 0);
    last = std::min<long>(last, static_cast<long>(v.size()));
    Indices out;
    for (long k = last - 1; k >= first; --k) out.push_back(v[static_cast<std::size_t>(k)]);
    return out;
}

}  // namespace

EnvelopeKnots mirror_extrema(const Extrema& ext, const Eigen::VectorXd& decision, const Eigen::MatrixXd& values,
                             int depth) {
    const Indices& indmax = ext.maxima;
    const Indices& indmin = ext.minima;
    if (ext.count() < 3 || indmax.empty() || indmin.empty()) throw NotEnoughExtrema();
    const Eigen::Index last = decision.size() - 1;
    const long nb = depth;
    const long nmax = static_cast<long>(indmax.size());
    const long nmin = static_cast<long>(indmin.size());

    Indices lmax, lmin, rmax, rmin;
    Eigen::Index lsym = 0, rsym = last;

    if (indmax.front() < indmin.front()) {
        if (decision[0] > decision[indmin.front()]) {
            lmax = reversed_slice(indmax, 1, nb + 1);
            lmin = reversed_slice(indmin, 0, nb);
            lsym = indmax.front();
        } else {
            lmax = reversed_slice(indmax, 0, nb);
            lmin = reversed_slice(indmin, 0, nb - 1);
            lmin.push_back(0);
            lsym = 0;
        }
    } else {
        if (decision[0] < decision[indmax.front()]) {
            lmax = reversed_slice(indmax, 0, nb);
            lmin = reversed_slice(indmin, 1, nb + 1);
            lsym = indmin.front();
        } else {
            lmax = reversed_slice(indmax, 0, nb - 1);
            lmax.push_back(0);
            lmin = reversed_slice(indmin, 0, nb);
            lsym = 0;
        }
    }

    if (indmax.back() < indmin.back()) {
        if (decision[last] < decision[indmax.back()]) {
            rmax = reversed_slice(indmax, nmax - nb, nmax);
            rmin = reversed_slice(indmin, nmin - nb - 1, nmin - 1);
            rsym = indmin.back();
        } else {
            rmax = reversed_slice(indmax, nmax - nb + 1, nmax);
            rmax.insert(rmax.begin(), last);
            rmin = reversed_slice(indmin, nmin - nb, nmin);
            rsym = last;
        }
    } else {
        if (decision[last] > decision[indmin.back()]) {
            rmax = reversed_slice(indmax, nmax - nb - 1, nmax - 1);
            rmin = reversed_slice(indmin, nmin - nb, nmin);
            rsym = indmax.back();
        } else {
            rmax = reversed_slice(indmax, nmax - nb, nmax);
            rmin = reversed_slice(indmin, nmin - nb + 1, nmin);
            rmin.insert(rmin.begin(), last);
            rsym = last;
        }
    }

    auto mirror = [](Eigen::Index sym, const Indices& idx) {
        std::vector<double> t;
        for (auto i : idx) t.push_back(2.0 * static_cast<double>(sym) - static_cast<double>(i));
        return t;
    };
    std::vector<double> tlmin = mirror(lsym, lmin), tlmax = mirror(lsym, lmax);
    std::vector<double> trmin = mirror(rsym, rmin), trmax = mirror(rsym, rmax);

    // the mirrored part must reach past the ends; otherwise mirror about the endpoint
    auto too_short_left = [&] {
        return (!tlmin.empty() && tlmin.front() > 0.0) || (!tlmax.empty() && tlmax.front() > 0.0) ||
               tlmin.empty() || tlmax.empty();
    };
    if (too_short_left() && lsym != 0) {
        if (lsym == indmax.front()) lmax = reversed_slice(indmax, 0, nb);
        else lmin = reversed_slice(indmin, 0, nb);
        lsym = 0;
        tlmin = mirror(lsym, lmin);
        tlmax = mirror(lsym, lmax);
    }
    const double tend = static_cast<double>(last);
    auto too_short_right = [&] {
        return (!trmin.empty() && trmin.back() < tend) || (!trmax.empty() && trmax.back() < tend) ||
               trmin.empty() || trmax.empty();
    };
    if (too_short_right() && rsym != last) {
        if (rsym == indmax.back()) rmax = reversed_slice(indmax, nmax - nb, nmax);
        else rmin = reversed_slice(indmin, nmin - nb, nmin);
        rsym = last;
        trmin = mirror(rsym, rmin);
        trmax = mirror(rsym, rmax);
    }

    auto assemble = [&](const std::vector<double>& tl, const Indices& il, const Indices& mid,
                        const std::vector<double>& tr, const Indices& ir, Eigen::VectorXd& times,
                        Eigen::MatrixXd& vals) {
        std::vector<std::pair<double, Eigen::Index>> knots;
        for (std::size_t k = 0; k < tl.size(); ++k) knots.emplace_back(tl[k], il[k]);
        for (auto i : mid) knots.emplace_back(static_cast<double>(i), i);
        for (std::size_t k = 0; k < tr.size(); ++k) knots.emplace_back(tr[k], ir[k]);
        std::stable_sort(knots.begin(), knots.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        knots.erase(std::unique(knots.begin(), knots.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; }),
                    knots.end());
        times.resize(static_cast<Eigen::Index>(knots.size()));
        vals.resize(static_cast<Eigen::Index>(knots.size()), values.cols());
        for (std::size_t k = 0; k < knots.size(); ++k) {
            times[static_cast<Eigen::Index>(k)] = knots[k].first;
            vals.row(static_cast<Eigen::Index>(k)) = values.row(knots[k].second);
        }
    };

    EnvelopeKnots out;
    assemble(tlmax, lmax, indmax, trmax, rmax, out.max_times, out.max_values);
    assemble(tlmin, lmin, indmin, trmin, rmin, out.min_times, out.min_values);
    if (out.max_times.size() < 2 || out.min_times.size() < 2) throw NotEnoughExtrema();
    return out;
}

EnvelopeMean envelope_mean(const Eigen::VectorXd& x, int boundary_extrema) {
    const Extrema ext = find_extrema(x);
    const EnvelopeKnots knots = mirror_extrema(ext, x, Eigen::MatrixXd(x), boundary_extrema);
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(x.size(), 0.0, static_cast<double>(x.size() - 1));
    const Eigen::VectorXd upper = natural_spline(knots.max_times, knots.max_values, t).col(0);
    const Eigen::VectorXd lower = natural_spline(knots.min_times, knots.min_values, t).col(0);
    return {0.5 * (upper + lower), 0.5 * (upper - lower).cwiseAbs()};
}

bool sifting_converged(const Eigen::VectorXd& sigma, const EmdConfig& cfg) {
    const Eigen::Index n = sigma.size();
    Eigen::Index above_theta1 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(sigma[i] < cfg.theta2)) return false;
        if (!(sigma[i] < cfg.theta1)) ++above_theta1;
    }
    return static_cast<double>(above_theta1) <= cfg.alpha_fraction * static_cast<double>(n);
}

namespace {

Eigen::VectorXd sigma_of(const EnvelopeMean& env) {
    Eigen::VectorXd sigma(env.mean.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        const double amp = env.half_range[i];
        sigma[i] = amp > 0.0 ? std::abs(env.mean[i]) / amp : (env.mean[i] == 0.0 ? 0.0 : INFINITY);
    }
    return sigma;
}

}  // namespace

Decomposition emd_decompose(const Signal& x, const EmdConfig& cfg) {
    cfg.validate();
    Decomposition d(x);
    Eigen::VectorXd residual = x.samples();
    while (static_cast<int>(d.modes.size()) < cfg.max_imfs) {
        if (find_extrema(residual).count() < 3) break;
        Eigen::VectorXd m = residual;
        bool extracted = false;
        for (int it = 0; it < cfg.max_sift_iters; ++it) {
            EnvelopeMean env;
            try {
                env = envelope_mean(m, cfg.boundary_extrema);
            } catch (const NotEnoughExtrema&) {
                break;
            }
            extracted = true;
            const Extrema ext = find_extrema(m);
            const long n_ext = static_cast<long>(ext.count());
            const long n_zc = static_cast<long>(count_zero_crossings(m));
            if (sifting_converged(sigma_of(env), cfg) && ext.count() > 2 && std::abs(n_ext - n_zc) <= 1) break;
            m -= env.mean;
        }
        if (!extracted) break;
        d.modes.push_back(x.with_samples(m));
        residual -= m;
    }
    d.residual = x.with_samples(residual);
    return d;
}

}  // namespace sdecomp
