#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sdecomp/signal.hpp"
#include "sdecomp/synth.hpp"

using namespace sdecomp;

namespace {

Signal tone(double f, double fs, Eigen::Index n, double phase = 0.0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = std::cos(2.0 * std::numbers::pi * f * i / fs + phase);
    return Signal(v, fs);
}

double naive_norm(const Signal& s) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) acc += s[i] * s[i];
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("signal rejects invalid construction") {
    CHECK_THROWS_AS(Signal(Eigen::VectorXd::Zero(1), 10.0), ContractViolation);
    CHECK_THROWS_AS(Signal(Eigen::VectorXd::Zero(4), 0.0), ContractViolation);
    CHECK_THROWS_AS(Signal(Eigen::VectorXd::Zero(4), -5.0), ContractViolation);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(4);
    bad[2] = std::nan("");
    CHECK_THROWS_AS(Signal(bad, 10.0), ContractViolation);
    bad[2] = INFINITY;
    CHECK_THROWS_AS(Signal(bad, 10.0), ContractViolation);
}

TEST_CASE("l2 norm examples") {
    CHECK(l2_norm(Signal::zeros(17, 3.0)) == 0.0);
    CHECK(l2_norm(Signal(Eigen::VectorXd::Constant(4, 3.0), 1.0)) == doctest::Approx(6.0).epsilon(1e-15));

    const Signal t = tone(50.0, 512.0, 512);
    const double expected = std::sqrt(512.0 / 2.0);
    CHECK(l2_norm(t) == doctest::Approx(naive_norm(t)).epsilon(1e-12));
    CHECK(std::abs(l2_norm(t) / expected - 1.0) < 0.01);
}

TEST_CASE("arithmetic examples") {
    const Signal s = tone(7.0, 100.0, 300, 0.3);
    const Signal z = add(s, scale(s, -1.0));
    CHECK(z.samples().cwiseAbs().maxCoeff() == 0.0);
    CHECK(scale(Signal::zeros(9, 2.0), 7.0).samples().isZero(0.0));
    CHECK(z.sample_rate_hz() == 100.0);

    const auto s1 = gen_s1();
    const Signal sum = add(s1.references[0], add(s1.references[1], s1.references[2]));
    CHECK((sum.samples() - s1.composite.samples()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("binary operations check compatibility") {
    const Signal a = Signal::zeros(10, 100.0);
    CHECK_THROWS_AS(add(a, Signal::zeros(11, 100.0)), ContractViolation);
    CHECK_THROWS_AS(subtract(a, Signal::zeros(10, 101.0)), ContractViolation);
    // rates within the relative tolerance count as equal
    CHECK_NOTHROW(add(a, Signal::zeros(10, 100.0 * (1.0 + 1e-12))));
}

TEST_CASE("norm scales with the absolute gain") {
    const Signal s = tone(3.0, 64.0, 200, 1.1);
    for (double g : {-3.5, -1.0, 0.25, 2.0, 1e6}) {
        CHECK(std::abs(l2_norm(scale(s, g)) - std::abs(g) * l2_norm(s)) <= 1e-12 * std::abs(g) * l2_norm(s));
    }
}

TEST_CASE("addition is commutative and associative") {
    const Signal a = tone(3.0, 64.0, 128, 0.1);
    const Signal b = tone(11.0, 64.0, 128, 2.0);
    const Signal c = scale(tone(0.5, 64.0, 128), 1e3);
    const double ref = l2_norm(a) + l2_norm(b) + l2_norm(c);
    CHECK(l2_norm(subtract(a + b, b + a)) <= 1e-12 * ref);
    CHECK(l2_norm(subtract((a + b) + c, a + (b + c))) <= 1e-12 * ref);
}

TEST_CASE("multichannel signal invariants") {
    const MultichannelSignal m({tone(1.0, 10.0, 20), tone(2.0, 10.0, 20)});
    CHECK(m.n_channels() == 2);
    CHECK(m.size() == 20);
    CHECK(m.channel(1).samples().isApprox(tone(2.0, 10.0, 20).samples()));
    CHECK_THROWS_AS(MultichannelSignal({tone(1.0, 10.0, 20), tone(1.0, 10.0, 21)}), ContractViolation);
    CHECK_THROWS_AS(MultichannelSignal(std::vector<Signal>{}), ContractViolation);
    CHECK_THROWS_AS(MultichannelSignal(Eigen::MatrixXd::Zero(0, 5), 10.0), ContractViolation);
}

TEST_CASE("decomposition reconstruction error and validation") {
    const Signal x = tone(5.0, 100.0, 100);
    Decomposition d(scale(x, 0.25));
    d.modes.push_back(scale(x, 0.75));
    CHECK(d.reconstruction_error(x) < 1e-14);
    CHECK(l2_norm(subtract(d.mode_sum(), scale(x, 0.75))) < 1e-14);
    CHECK_NOTHROW(d.validate(x));

    d.center_freqs_hz = std::vector<double>{5.0, 6.0};
    CHECK_THROWS_AS(d.validate(x), ContractViolation);
    d.center_freqs_hz = std::vector<double>{5.0};
    CHECK_NOTHROW(d.validate(x));

    d.modes.push_back(Signal::zeros(50, 100.0));
    CHECK_THROWS_AS(d.validate(x), ContractViolation);
}
