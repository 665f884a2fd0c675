#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sdecomp/bench.hpp"
#include "sdecomp/emd.hpp"
#include "sdecomp/metrics.hpp"
#include "sdecomp/sst.hpp"
#include "sdecomp/synth.hpp"
#include "sdecomp/variational.hpp"

using namespace sdecomp;

namespace {

constexpr double kPi = std::numbers::pi;

Signal from_fn(Eigen::Index n, double fs, auto fn) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = fn(static_cast<double>(i) / fs);
    return Signal(v, fs);
}

Signal tone(double f, double fs = 256.0, Eigen::Index n = 1024) {
    return from_fn(n, fs, [f](double t) { return std::cos(2 * kPi * f * t); });
}

Eigen::Index nearest_bin(const Eigen::VectorXd& freqs, double f) {
    Eigen::Index best = 0;
    (freqs.array().log() - std::log(f)).abs().minCoeff(&best);
    return best;
}

double interior_qrf(const Signal& est, const Signal& ref) {
    const Eigen::Index n = ref.size(), a = n / 10, len = n - 2 * a;
    return qrf(Signal(est.samples().segment(a, len), ref.sample_rate_hz()),
               Signal(ref.samples().segment(a, len), ref.sample_rate_hz()));
}

SstRecipe s1_recipe() { return std::get<SstRecipe>(default_recipe("sst", "s1")); }

}  // namespace

TEST_CASE("cwt peak row of a tone") {
    const SstConfig cfg;
    const CwtResult W = cwt_morlet(tone(50.0), cfg);
    REQUIRE(W.coeffs.rows() == W.freqs_hz.size());
    CHECK(W.coeffs.cols() == 1024);
    for (Eigen::Index j = 1; j < W.freqs_hz.size(); ++j) CHECK(W.freqs_hz[j] > W.freqs_hz[j - 1]);
    CHECK(W.freqs_hz[0] == doctest::Approx(2.0 / 4.0).epsilon(0.05));
    CHECK(W.freqs_hz[W.freqs_hz.size() - 1] <= 128.0 * (1 + 1e-12));
    Eigen::Index peak = 0;
    W.coeffs.col(512).cwiseAbs().maxCoeff(&peak);
    CHECK(std::abs(std::log2(W.freqs_hz[peak] / 50.0)) <= 0.5 / cfg.n_voices + 1e-12);
}

TEST_CASE("cwt of zero is zero and the transform is linear") {
    const SstConfig cfg;
    CHECK(cwt_morlet(Signal::zeros(256, 64.0), cfg).coeffs.isZero(0.0));
    const Signal a = tone(20.0), b = tone(71.0);
    const Eigen::MatrixXcd sum = cwt_morlet(a + b, cfg).coeffs;
    const Eigen::MatrixXcd parts = cwt_morlet(a, cfg).coeffs + cwt_morlet(b, cfg).coeffs;
    CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-9 * sum.cwiseAbs().maxCoeff());
}

TEST_CASE("cwt needs enough samples and a valid config") {
    CHECK_THROWS_AS(cwt_morlet(Signal::zeros(32, 64.0), SstConfig{}), ContractViolation);
    SstConfig c;
    c.n_voices = 3;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    c = {};
    c.gamma = -1.0;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    RidgeConfig r;
    r.max_step = 0;
    CHECK_THROWS_AS(r.validate(), ContractViolation);
}

TEST_CASE("squeezed tone energy concentrates at its bin") {
    const SstConfig cfg;
    const SqueezedTransform S = synchrosqueeze(cwt_morlet(tone(50.0), cfg), cfg);
    const Eigen::Index b = nearest_bin(S.freqs_hz, 50.0);
    const Eigen::MatrixXd e = S.coeffs.cwiseAbs2();
    double near = 0.0, all = 0.0;
    for (Eigen::Index t = 102; t < 1024 - 102; ++t) {
        near += e.block(b - 1, t, 3, 1).sum();
        all += e.col(t).sum();
    }
    CHECK(near / all >= 0.8);
    const TFGrid g = S.energy_grid();
    CHECK(g.energy.minCoeff() >= 0.0);
    CHECK(g.energy.rows() == S.freqs_hz.size());
}

TEST_CASE("squeezing conserves the thresholded magnitude mass") {
    const SstConfig cfg;
    for (const Signal& x : {tone(33.0), gen_s2().composite, gen_s1().composite}) {
        const CwtResult W = cwt_morlet(x, cfg);
        const SqueezedTransform S = synchrosqueeze(W, cfg);
        CHECK(S.mass() == doctest::Approx(thresholded_mass(W, cfg)).epsilon(0.01));
    }
}

TEST_CASE("cells below the threshold contribute nothing") {
    SstConfig cfg;
    cfg.gamma = 0.5;
    const Signal x = tone(20.0) + scale(tone(90.0), 0.1);
    const CwtResult W = cwt_morlet(x, cfg);
    const SqueezedTransform S = synchrosqueeze(W, cfg);
    const Eigen::Index weak = nearest_bin(S.freqs_hz, 90.0);
    CHECK(S.coeffs.block(weak - 3, 0, 7, S.coeffs.cols()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(S.threshold == doctest::Approx(0.5 * W.coeffs.cwiseAbs().maxCoeff()));
}

TEST_CASE("two separated tones give two disjoint ridges") {
    const SstConfig cfg;
    const SqueezedTransform S = synchrosqueeze(cwt_morlet(tone(15.0) + tone(80.0), cfg), cfg);
    const RidgeSet rs = extract_ridges(S, RidgeConfig{}, 2);
    REQUIRE(rs.tracks.size() == 2);
    CHECK_FALSE(rs.incomplete);
    const Eigen::Index b15 = nearest_bin(S.freqs_hz, 15.0), b80 = nearest_bin(S.freqs_hz, 80.0);
    for (Eigen::Index t = 102; t < 922; ++t) {
        const auto i0 = rs.tracks[0].bins[t], i1 = rs.tracks[1].bins[t];
        CHECK(std::min(std::abs(i0 - b15), std::abs(i0 - b80)) <= 1);
        CHECK(std::min(std::abs(i1 - b15), std::abs(i1 - b80)) <= 1);
        CHECK(std::abs(i0 - i1) > 10);
    }
}

TEST_CASE("single tone ridge and reconstruction") {
    const SstConfig cfg;
    const Signal x = tone(40.0);
    const SqueezedTransform S = synchrosqueeze(cwt_morlet(x, cfg), cfg);
    const RidgeSet rs = extract_ridges(S, RidgeConfig{}, 1);
    REQUIRE(rs.tracks.size() == 1);
    const Eigen::Index b = nearest_bin(S.freqs_hz, 40.0);
    for (Eigen::Index t = 102; t < 922; ++t) {
        CHECK(rs.tracks[0].valid[t]);
        CHECK(std::abs(rs.tracks[0].bins[t] - b) <= 1);
    }
    CHECK(interior_qrf(reconstruct_mode(S, rs.tracks[0], 5), x) >= 25.0);
}

TEST_CASE("ridge steps obey the step limit") {
    const Signal x = gen_s2().composite;
    for (int step : {1, 3, 8}) {
        RidgeConfig r;
        r.max_step = step;
        const SstResult res = sst_decompose(x, SstConfig{}, r);
        for (const auto& tr : res.ridges.tracks) {
            for (std::size_t t = 1; t < tr.bins.size(); ++t) {
                if (tr.valid[t] && tr.valid[t - 1]) CHECK(std::abs(tr.bins[t] - tr.bins[t - 1]) <= step);
            }
        }
    }
}

TEST_CASE("invalid track reconstructs to zero") {
    const SstConfig cfg;
    const SqueezedTransform S = synchrosqueeze(cwt_morlet(tone(40.0), cfg), cfg);
    RidgeTrack empty;
    empty.bins.assign(1024, 10);
    empty.valid.assign(1024, false);
    CHECK_FALSE(empty.any_valid());
    CHECK(reconstruct_mode(S, empty, 5).samples().isZero(0.0));
}

TEST_CASE("too many ridges requested") {
    SstConfig cfg;
    cfg.K = 40;
    RidgeConfig r;
    r.start_band = 30;
    const SstResult res = sst_decompose(tone(40.0), cfg, r);
    CHECK(res.ridges.incomplete);
    CHECK(res.ridges.tracks.size() < 40);
    CHECK(res.decomposition.modes.size() == res.ridges.tracks.size());
    CHECK_FALSE(res.decomposition.warnings.empty());
}

TEST_CASE("sst decomposition is additive") {
    const Signal x = gen_s2().composite;
    const SstResult r = sst_decompose(x, SstConfig{}, RidgeConfig{});
    CHECK(r.decomposition.reconstruction_error(x) <= 1e-9 * l2_norm(x));
    CHECK_NOTHROW(r.decomposition.validate(x));
}

TEST_CASE("third ridge cannot bridge the gap in s1") {
    const auto s1 = gen_s1();
    const SstRecipe rc = s1_recipe();
    const Decomposition d = sst_decompose(s1.composite, rc.sst, rc.ridge).decomposition;
    const QrfReport rep = match_components(d.modes, s1.references);
    const double q3 = rep.qrf_for_reference(2).value_or(0.0);
    CHECK(q3 < rep.qrf_for_reference(0).value());
    CHECK(q3 < rep.qrf_for_reference(1).value());
}

TEST_CASE("a fourth ridge recovers the rest of the gapped component") {
    const auto s1 = gen_s1();
    SstRecipe rc = s1_recipe();
    const Decomposition d3 = sst_decompose(s1.composite, rc.sst, rc.ridge).decomposition;
    const double q3 = match_components(d3.modes, s1.references).qrf_for_reference(2).value_or(0.0);
    rc.sst.K = 4;
    const Decomposition d4 = sst_decompose(s1.composite, rc.sst, rc.ridge).decomposition;
    REQUIRE(d4.modes.size() == 4);
    const Signal united = d4.modes[2] + d4.modes[3];
    CHECK(qrf(united, s1.references[2]) >= q3 + 5.0);
}

TEST_CASE("sst beats emd and vmd on both s2 components") {
    const auto s2 = gen_s2();
    const auto run = [&](const std::string& m) {
        return match_components(run_method(default_recipe(m, "s2"), s2.composite).modes, s2.references);
    };
    const QrfReport sst = run("sst"), emd = run("emd"), vmd = run("vmd");
    for (std::size_t r = 0; r < 2; ++r) {
        const double q = sst.qrf_for_reference(r).value();
        CHECK(q > emd.qrf_for_reference(r).value_or(-1e9));
        CHECK(q > vmd.qrf_for_reference(r).value_or(-1e9));
    }
}

TEST_CASE("start band and step size barely matter on s2") {
    const auto s2 = gen_s2();
    for (const char* p : {"start_band", "max_step"}) {
        std::vector<double> totals;
        for (double v : {5.0, 10.0, 15.0, 20.0, 30.0}) {
            MethodConfig m = default_recipe("sst", "s2");
            apply_param(m, p, v);
            totals.push_back(match_components(run_method(m, s2.composite).modes, s2.references).total_qrf_db);
        }
        CHECK(*std::max_element(totals.begin(), totals.end()) - *std::min_element(totals.begin(), totals.end()) < 3.0);
    }
}

TEST_CASE("admissibility constant is positive") {
    CHECK(morlet_admissibility(6.0) > 0.0);
    CHECK(morlet_admissibility(10.0) > 0.0);
}
