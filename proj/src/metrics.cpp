#include "sdecomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdecomp/fft.hpp"

namespace sdecomp {

double qrf(const Signal& est, const Signal& ref) {
    require_compatible(est, ref);
    const double ref_norm = ref.samples().norm();
    require(ref_norm > 0.0, "QRF is undefined for a zero reference");
    const double err = (ref.samples() - est.samples()).norm();
    if (err == 0.0) return kQrfSaturationDb;
    return std::min(kQrfSaturationDb, 20.0 * std::log10(ref_norm / err));
}

std::optional<double> QrfReport::qrf_for_reference(std::size_t r) const {
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i].second == r) return per_mode_qrf_db[i];
    }
    return std::nullopt;
}

QrfReport match_components(const std::vector<Signal>& est, const std::vector<Signal>& refs) {
    QrfReport report;
    const std::size_t ne = est.size(), nr = refs.size();
    if (ne == 0 || nr == 0) {
        for (std::size_t i = 0; i < ne; ++i) report.unmatched_est.push_back(i);
        for (std::size_t j = 0; j < nr; ++j) report.unmatched_ref.push_back(j);
        return report;
    }

    std::vector<std::vector<double>> table(ne, std::vector<double>(nr));
    for (std::size_t i = 0; i < ne; ++i)
        for (std::size_t j = 0; j < nr; ++j) table[i][j] = qrf(est[i], refs[j]);

    std::vector<std::pair<std::size_t, std::size_t>> best;
    const std::size_t pairs = std::min(ne, nr);
    if (pairs <= 8) {
        // enumerate ordered choices of `pairs` items from the larger side
        const bool est_larger = ne >= nr;
        const std::size_t big = est_larger ? ne : nr;
        std::vector<std::size_t> perm(big);
        std::iota(perm.begin(), perm.end(), 0);
        double best_total = -INFINITY;
        do {
            double total = 0.0;
            for (std::size_t k = 0; k < pairs; ++k) {
                total += est_larger ? table[perm[k]][k] : table[k][perm[k]];
            }
            if (total > best_total) {
                best_total = total;
                best.clear();
                for (std::size_t k = 0; k < pairs; ++k) {
                    best.emplace_back(est_larger ? perm[k] : k, est_larger ? k : perm[k]);
                }
            }
            // skip orderings of the unused tail; they give the same prefix again
            std::reverse(perm.begin() + static_cast<long>(pairs), perm.end());
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        std::vector<bool> used_e(ne, false), used_r(nr, false);
        for (std::size_t k = 0; k < pairs; ++k) {
            double top = -INFINITY;
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < ne; ++i) {
                if (used_e[i]) continue;
                for (std::size_t j = 0; j < nr; ++j) {
                    if (!used_r[j] && table[i][j] > top) {
                        top = table[i][j];
                        bi = i;
                        bj = j;
                    }
                }
            }
            used_e[bi] = used_r[bj] = true;
            best.emplace_back(bi, bj);
        }
    }

    std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<bool> took_e(ne, false), took_r(nr, false);
    for (const auto& [i, j] : best) {
        report.assignment.emplace_back(i, j);
        report.per_mode_qrf_db.push_back(table[i][j]);
        took_e[i] = took_r[j] = true;
    }
    for (std::size_t i = 0; i < ne; ++i)
        if (!took_e[i]) report.unmatched_est.push_back(i);
    for (std::size_t j = 0; j < nr; ++j)
        if (!took_r[j]) report.unmatched_ref.push_back(j);
    report.total_qrf_db = total_qrf(report);
    return report;
}

double total_qrf(const QrfReport& report) {
    return std::accumulate(report.per_mode_qrf_db.begin(), report.per_mode_qrf_db.end(), 0.0);
}

AlignmentScore alignment_score(const AlignedDecomposition& d, const ExpectedModeTable& expected, double tol_hz) {
    const std::size_t n_modes = expected.size();
    require(d.n_modes() == n_modes, "alignment table mode count differs from the decomposition");
    for (const auto& row : expected) require(row.size() == d.n_channels(), "alignment table channel count mismatch");

    AlignmentScore s;
    s.tolerance_hz = tol_hz;
    s.pass = true;
    for (std::size_t k = 0; k < n_modes; ++k) {
        std::vector<double> freq, energy;
        for (const auto& ch : d.channels) {
            const Signal& m = ch.modes[k];
            freq.push_back(dominant_frequency_hz(m.samples(), m.sample_rate_hz()));
            energy.push_back(m.samples().squaredNorm());
        }
        const double top = *std::max_element(energy.begin(), energy.end());
        std::vector<double> rel;
        std::vector<bool> ok;
        for (std::size_t c = 0; c < freq.size(); ++c) {
            rel.push_back(top > 0.0 ? energy[c] / top : 0.0);
            const bool cell = expected[k][c] ? std::abs(freq[c] - *expected[k][c]) <= tol_hz : rel.back() < 0.1;
            ok.push_back(cell);
            s.pass = s.pass && cell;
        }
        s.dominant_hz.push_back(std::move(freq));
        s.relative_energy.push_back(std::move(rel));
        s.cell_pass.push_back(std::move(ok));
    }
    return s;
}

}  // namespace sdecomp
