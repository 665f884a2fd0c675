#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sdecomp/fft.hpp"
#include "sdecomp/spectral.hpp"
#include "sdecomp/synth.hpp"

using namespace sdecomp;

namespace {

constexpr double kPi = std::numbers::pi;

// local maxima of |X| above a fraction of the global maximum, in Hz
std::vector<double> spectral_peaks(const Signal& s, double rel = 0.1) {
    const Eigen::VectorXcd X = fft(s.samples());
    const Eigen::Index half = s.size() / 2;
    Eigen::VectorXd mag = X.head(half + 1).cwiseAbs();
    const double top = mag.maxCoeff();
    std::vector<double> peaks;
    for (Eigen::Index k = 1; k < half; ++k) {
        if (mag[k] > rel * top && mag[k] >= mag[k - 1] && mag[k] >= mag[k + 1])
            peaks.push_back(static_cast<double>(k) * s.sample_rate_hz() / s.size());
    }
    return peaks;
}

double max_abs_diff(const Signal& a, const Signal& b) { return (a.samples() - b.samples()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("s1 layout and composition") {
    const auto s = gen_s1();
    CHECK(s.composite.size() == 2560);
    CHECK(s.composite.sample_rate_hz() == 256.0);
    REQUIRE(s.references.size() == 3);
    CHECK(s.names == std::vector<std::string>{"s1", "s11", "s12", "s13"});
    const Signal sum = s.references[0] + s.references[1] + s.references[2];
    CHECK(max_abs_diff(s.composite, sum) < 1e-12);
}

TEST_CASE("s1 gap zeroes the third component only inside the interval") {
    const auto s = gen_s1(GapSpec{4.0, 5.0});
    const auto full = gen_s1(std::nullopt);
    const Signal& s13 = s.references[2];
    for (Eigen::Index i = 0; i < s13.size(); ++i) {
        const double t = i / 256.0;
        if (t >= 4.0 && t < 5.0) {
            CHECK(s13[i] == 0.0);
        } else {
            CHECK(s13[i] == full.references[2][i]);
        }
    }
    CHECK(max_abs_diff(s.references[0], full.references[0]) == 0.0);
}

TEST_CASE("s1 rejects a gap outside the support") {
    CHECK_THROWS_AS(gen_s1(GapSpec{-1.0, 2.0}), ContractViolation);
    CHECK_THROWS_AS(gen_s1(GapSpec{5.0, 5.0}), ContractViolation);
    CHECK_THROWS_AS(gen_s1(GapSpec{6.0, 4.0}), ContractViolation);
    CHECK_THROWS_AS(gen_s1(GapSpec{9.0, 10.5}), ContractViolation);
}

TEST_CASE("closed-form IF laws agree with the phase derivative") {
    // phase / (2 pi) written out independently; derivative by a 5-point stencil
    auto p11 = [](double t) { return 15.0 * (2.0 * t + 0.3 * std::cos(t)); };
    auto p12 = [](double t) { return 15.0 * (2.4 * t + 0.5 * std::pow(t, 1.2) + 0.3 * std::sin(t)); };
    auto p13 = [](double t) { return 15.0 * (5.3 * t + 0.2 * std::pow(t, 1.3)); };
    auto p21 = [](double t) {
        return 0.55 * (0.8 + 50.0 * t - 100.0 * t * t + 416.0 * t * t * t - 200.0 * t * t * t * t);
    };
    auto deriv = [](auto f, double t) {
        const double h = 1e-4;
        return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
    };
    for (double t : {0.3, 1.0, 2.5, 4.2, 7.7, 9.5}) {
        CHECK(s11_if_hz(t) == doctest::Approx(deriv(p11, t)).epsilon(1e-8));
        CHECK(s11_if_hz(t) == doctest::Approx(15.0 * (2.0 - 0.3 * std::sin(t))).epsilon(1e-14));
        CHECK(s12_if_hz(t) == doctest::Approx(deriv(p12, t)).epsilon(1e-8));
        CHECK(s13_if_hz(t) == doctest::Approx(deriv(p13, t)).epsilon(1e-8));
    }
    for (double t : {0.1, 0.4, 0.9}) CHECK(s21_if_hz(t) == doctest::Approx(deriv(p21, t)).epsilon(1e-8));
    CHECK(s21_if_hz(0.0) == doctest::Approx(27.5).epsilon(1e-14));
}

TEST_CASE("numerical IF of s11 and of the continuous s13 track the laws") {
    const auto s = gen_s1(std::nullopt);
    const ModeModel m11 = ia_if(s.references[0]);
    const ModeModel m13 = ia_if(s.references[2]);
    const Eigen::Index n = s.composite.size();
    double worst11 = 0.0, worst13 = 0.0;
    for (Eigen::Index i = n / 20; i < n - n / 20; ++i) {
        const double t = i / 256.0;
        worst11 = std::max(worst11, std::abs(m11.if_track_hz[i] / s11_if_hz(t) - 1.0));
        worst13 = std::max(worst13, std::abs(m13.if_track_hz[i] / s13_if_hz(t) - 1.0));
    }
    CHECK(worst11 < 0.02);
    CHECK(worst13 < 0.02);
}

TEST_CASE("s2 layout, determinism and seed dependence") {
    const auto a = gen_s2();
    CHECK(a.composite.size() == 512);
    CHECK(a.composite.sample_rate_hz() == 512.0);
    REQUIRE(a.references.size() == 2);
    CHECK(max_abs_diff(a.composite, a.references[0] + a.references[1]) < 1e-12);

    const auto b = gen_s2();
    CHECK(max_abs_diff(a.references[1], b.references[1]) == 0.0);

    S2Config other;
    other.rng_seed = 7;
    CHECK(max_abs_diff(a.references[1], gen_s2(other).references[1]) > 1e-3);
    CHECK(max_abs_diff(a.references[0], gen_s2(other).references[0]) == 0.0);
}

TEST_CASE("s22 is a positive envelope on the carrier") {
    const auto s = gen_s2();
    const Signal& s22 = s.references[1];
    // at carrier peaks the sample equals the envelope, which is clipped at 0.05
    for (Eigen::Index i = 0; i < s22.size(); ++i) {
        const double c = std::cos(2.0 * kPi * 180.0 * i / 512.0);
        if (std::abs(c) > 0.99) CHECK(s22[i] / c >= 0.05 - 1e-12);
    }
    CHECK(dominant_frequency_hz(s22.samples(), 512.0) == doctest::Approx(180.0).epsilon(0.01));
}

TEST_CASE("s2 config validation") {
    S2Config c;
    c.duration_s = 1.0001;
    CHECK_THROWS_AS(gen_s2(c), ContractViolation);
    c = {};
    c.smoothing_sigma_s = 0.0;
    CHECK_THROWS_AS(gen_s2(c), ContractViolation);
    c = {};
    c.carrier_hz = -1.0;
    CHECK_THROWS_AS(gen_s2(c), ContractViolation);
}

TEST_CASE("bivariate test signal spectra and table") {
    const auto mv = gen_mv_test(2.0, 200.0);
    REQUIRE(mv.signal.n_channels() == 2);
    CHECK(mv.signal.channel(0).size() == mv.signal.channel(1).size());
    CHECK(spectral_peaks(mv.signal.channel(0)) == std::vector<double>{2.0, 50.0});
    CHECK(spectral_peaks(mv.signal.channel(1)) == std::vector<double>{2.0, 20.0, 50.0});

    REQUIRE(mv.expected.size() == 3);
    CHECK(mv.expected[0][0] == 2.0);
    CHECK_FALSE(mv.expected[1][0].has_value());
    CHECK(mv.expected[1][1] == 20.0);
    CHECK(mv.expected[2][1] == 50.0);
    CHECK_FALSE(mv.references[1][0].has_value());

    CHECK_THROWS_AS(gen_mv_test(2.0, 100.0), ContractViolation);
    CHECK_THROWS_AS(gen_mv_test(0.0, 200.0), ContractViolation);
}

TEST_CASE("noise injection hits the requested SNR exactly") {
    const Signal x = gen_s1().composite;
    for (double snr : {24.0, 12.0, 3.0, -5.0}) {
        const Signal y = add_wgn(x, snr, 11);
        CHECK(y.size() == x.size());
        CHECK(y.sample_rate_hz() == x.sample_rate_hz());
        // independent SNR computation
        double ps = 0.0, pn = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            ps += x[i] * x[i];
            pn += (y[i] - x[i]) * (y[i] - x[i]);
        }
        CHECK(std::abs(10.0 * std::log10(ps / pn) - snr) < 1e-9);
        CHECK(std::abs(realized_snr_db(x, y) - snr) < 1e-9);
    }
}

TEST_CASE("noise is seed deterministic and zero mean") {
    const Signal x = gen_s1().composite;
    const Signal a = add_wgn(x, 10.0, 1);
    const Signal b = add_wgn(x, 10.0, 1);
    const Signal c = add_wgn(x, 10.0, 2);
    CHECK(max_abs_diff(a, b) == 0.0);
    CHECK(max_abs_diff(a, c) > 1e-3);

    const Eigen::VectorXd n = a.samples() - x.samples();
    const double n_size = static_cast<double>(n.size());
    const double mean = n.mean();
    const double sd = std::sqrt((n.array() - mean).square().sum() / (n_size - 1.0));
    CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(n_size));
}

TEST_CASE("noise injection errors") {
    const Signal x = gen_s1().composite;
    CHECK_THROWS_AS(add_wgn(Signal::zeros(64, 10.0), 10.0, 0), ContractViolation);
    CHECK_THROWS_AS(add_wgn(x, INFINITY, 0), ContractViolation);
    CHECK_THROWS_AS(add_wgn(x, std::nan(""), 0), ContractViolation);
}

TEST_CASE("multichannel noise uses independent per-channel draws") {
    const auto mv = gen_mv_test();
    const MultichannelSignal y = add_wgn(mv.signal, 20.0, 3);
    for (Eigen::Index c = 0; c < 2; ++c)
        CHECK(std::abs(realized_snr_db(mv.signal.channel(c), y.channel(c)) - 20.0) < 1e-9);
    const Eigen::VectorXd n0 = y.channel(0).samples() - mv.signal.channel(0).samples();
    const Eigen::VectorXd n1 = y.channel(1).samples() - mv.signal.channel(1).samples();
    CHECK(std::abs(n0.normalized().dot(n1.normalized())) < 0.2);
}

TEST_CASE("gaussian source moments") {
    GaussianSource g(42);
    const Eigen::VectorXd v = g.draw(200000);
    CHECK(std::abs(v.mean()) < 0.01);
    CHECK(std::abs(v.squaredNorm() / v.size() - 1.0) < 0.02);
    GaussianSource h(42);
    CHECK(h.draw(10) == v.head(10));
}
