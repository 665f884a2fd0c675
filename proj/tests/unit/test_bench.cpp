#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdecomp/bench.hpp"

using namespace sdecomp;

namespace {

NoiseSuiteSpec small_spec(const std::string& method, const std::string& signal) {
    NoiseSuiteSpec s;
    s.method = default_recipe(method, signal);
    s.signal_id = signal;
    s.snr_grid_db = {20.0, 5.0};
    s.n_realizations = 3;
    s.base_seed = 40;
    return s;
}

}  // namespace

TEST_CASE("recipes exist for every method and signal") {
    for (const char* m : {"emd", "vmd", "vncmd", "sst", "ssa"}) {
        for (const char* s : {"s1", "s2"}) CHECK(method_name(default_recipe(m, s)) == m);
    }
    CHECK_THROWS_AS(default_recipe("wavelet", "s1"), ContractViolation);
    const auto vmd = std::get<VmdConfig>(default_recipe("vmd", "s1"));
    CHECK(vmd.tau == 0.5);
    CHECK(vmd.K == 3);
    CHECK(std::get<VncmdConfig>(default_recipe("vncmd", "s1")).init_if_hz == std::vector<double>{30.0, 50.0, 85.0});
}

TEST_CASE("test signals by id") {
    CHECK(test_signal("s1").references.size() == 3);
    CHECK(test_signal("s2").references.size() == 2);
    CHECK(test_signal("s1-continuous").references.size() == 3);
    CHECK(test_signal("ramp").references.size() == 1);
    CHECK_THROWS_AS(test_signal("s3"), ContractViolation);
}

TEST_CASE("named parameters reach the config") {
    MethodConfig m = default_recipe("vmd", "s1");
    apply_param(m, "alpha", 123.0);
    apply_param(m, "K", 4);
    CHECK(std::get<VmdConfig>(m).alpha == 123.0);
    CHECK(std::get<VmdConfig>(m).K == 4);
    CHECK_THROWS_AS(apply_param(m, "gamma", 0.1), ContractViolation);
    CHECK_THROWS_AS(apply_param(m, "K", 2.5), ContractViolation);

    MethodConfig s = default_recipe("sst", "s2");
    apply_param(s, "start_band", 12);
    apply_param(s, "max_step", 7);
    CHECK(std::get<SstRecipe>(s).ridge.start_band == 12);
    CHECK(std::get<SstRecipe>(s).ridge.max_step == 7);

    MethodConfig a = default_recipe("ssa", "s1");
    apply_param(a, "L", 104);
    CHECK(std::get<SsaConfig>(a).L == 104);
}

TEST_CASE("accuracy: vmd beats emd on s1 and sst beats vmd on s2") {
    const AccuracyResult vmd1 = run_accuracy(default_recipe("vmd", "s1"), "s1");
    const AccuracyResult emd1 = run_accuracy(default_recipe("emd", "s1"), "s1");
    CHECK_FALSE(vmd1.error);
    CHECK(vmd1.report.total_qrf_db > emd1.report.total_qrf_db);
    CHECK(vmd1.tf.energy.rows() == 256);
    CHECK(vmd1.tf.energy.cols() == 2560);
    CHECK(vmd1.wall_s > 0.0);

    const AccuracyResult sst2 = run_accuracy(default_recipe("sst", "s2"), "s2");
    const AccuracyResult vmd2 = run_accuracy(default_recipe("vmd", "s2"), "s2");
    CHECK(sst2.report.total_qrf_db > vmd2.report.total_qrf_db);
}

TEST_CASE("emd on a monotone ramp matches nothing") {
    const AccuracyResult r = run_accuracy(default_recipe("emd", "s1"), "ramp");
    CHECK_FALSE(r.error);
    CHECK(r.report.assignment.empty());
    CHECK(r.report.total_qrf_db == 0.0);
}

TEST_CASE("method errors are recorded, not thrown") {
    VncmdConfig bad;  // no initial IFs
    const AccuracyResult r = run_accuracy(bad, "s2");
    REQUIRE(r.error);
    CHECK(r.report.assignment.empty());
    CHECK(r.report.unmatched_ref.size() == 2);
}

TEST_CASE("noise suite is a pure function of its settings") {
    const NoiseSuiteSpec spec = small_spec("vmd", "s2");
    const SuiteResult a = run_noise_suite(spec);
    NoiseSuiteSpec threaded = spec;
    threaded.threads = 3;
    const SuiteResult b = run_noise_suite(threaded);
    REQUIRE(a.points.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(a.points[i].totals == b.points[i].totals);
        CHECK(a.points[i].mean_db == b.points[i].mean_db);
        CHECK(a.points[i].std_db == b.points[i].std_db);
        CHECK(a.points[i].snr_db == spec.snr_grid_db[i]);
    }
    CHECK(a.method == "vmd");
    CHECK(a.signal_id == "s2");
}

TEST_CASE("noise suite realization i uses seed base + i") {
    const NoiseSuiteSpec spec = small_spec("emd", "s2");
    const SuiteResult r = run_noise_suite(spec);
    const SyntheticSignal s2 = test_signal("s2");
    for (int i = 0; i < spec.n_realizations; ++i) {
        const Signal noisy = add_wgn(s2.composite, 20.0, spec.base_seed + static_cast<std::uint64_t>(i));
        const double expect = match_components(run_method(spec.method, noisy).modes, s2.references).total_qrf_db;
        CHECK(r.points[0].totals[static_cast<std::size_t>(i)] == expect);
    }
}

TEST_CASE("noise suite statistics") {
    const SuiteResult r = run_noise_suite(small_spec("vmd", "s2"));
    for (const SuitePoint& p : r.points) {
        REQUIRE(p.totals.size() == 3);
        double m = 0.0;
        for (double v : p.totals) m += v;
        m /= 3.0;
        double ss = 0.0;
        for (double v : p.totals) ss += (v - m) * (v - m);
        CHECK(p.mean_db == doctest::Approx(m).epsilon(1e-12));
        CHECK(p.std_db == doctest::Approx(std::sqrt(ss / 2.0)).epsilon(1e-12));
        CHECK(p.std_db >= 0.0);
        CHECK(p.failures == 0);
    }
}

TEST_CASE("failed runs are counted and excluded") {
    NoiseSuiteSpec spec = small_spec("vncmd", "s2");
    spec.method = VncmdConfig{};  // every run throws
    const SuiteResult r = run_noise_suite(spec);
    for (const SuitePoint& p : r.points) {
        CHECK(p.failures == 3);
        CHECK(p.totals.empty());
        CHECK(std::isnan(p.mean_db));
    }
}

TEST_CASE("noise suite settings validation") {
    NoiseSuiteSpec s = small_spec("vmd", "s1");
    s.n_realizations = 1;
    CHECK_THROWS_AS(run_noise_suite(s), ContractViolation);
    s = small_spec("vmd", "s1");
    s.snr_grid_db.clear();
    CHECK_THROWS_AS(run_noise_suite(s), ContractViolation);
    CHECK(NoiseSuiteSpec{}.snr_grid_db == std::vector<double>{24, 21, 18, 15, 12, 9, 6, 3});
    CHECK(NoiseSuiteSpec{}.n_realizations == 50);
}

TEST_CASE("parameter sweeps") {
    const auto rows = run_param_sweep(default_recipe("ssa", "s1"), "L", {104, 110, 116}, "s1");
    REQUIRE(rows.size() == 3);
    double lo = 1e9, hi = -1e9;
    for (const auto& row : rows) {
        REQUIRE(row.report);
        lo = std::min(lo, row.report->total_qrf_db);
        hi = std::max(hi, row.report->total_qrf_db);
    }
    CHECK(hi - lo > 3.0);
    CHECK(rows[1].value == 110.0);

    const auto sst = run_param_sweep(default_recipe("sst", "s2"), "start_band", {5, 15, 30}, "s2");
    lo = 1e9;
    hi = -1e9;
    for (const auto& row : sst) {
        REQUIRE(row.report);
        lo = std::min(lo, row.report->total_qrf_db);
        hi = std::max(hi, row.report->total_qrf_db);
    }
    CHECK(hi - lo < 3.0);

    CHECK_THROWS_AS(run_param_sweep(default_recipe("vmd", "s1"), "gamma", {1.0}, "s1"), ContractViolation);
    const auto bad = run_param_sweep(default_recipe("vmd", "s2"), "alpha", {-1.0, 500.0}, "s2");
    CHECK(bad[0].error);
    CHECK_FALSE(bad[0].report);
    CHECK(bad[1].report);
}

TEST_CASE("alignment method names") {
    CHECK(parse_alignment_method("vmd-channelwise") == AlignmentMethod::vmd_channelwise);
    CHECK(parse_alignment_method("memd") == AlignmentMethod::memd);
    CHECK(parse_alignment_method("mvmd") == AlignmentMethod::mvmd);
    CHECK_THROWS_AS(parse_alignment_method("mvemd"), ContractViolation);
}

TEST_CASE("alignment suite outcomes") {
    CHECK(run_alignment_suite(AlignmentMethod::mvmd, 40.0).score.pass);
    CHECK(run_alignment_suite(AlignmentMethod::mvmd, 10.0).score.pass);
    CHECK(run_alignment_suite(AlignmentMethod::memd, 40.0).score.pass);
    CHECK_FALSE(run_alignment_suite(AlignmentMethod::memd, 10.0).score.pass);
    CHECK_FALSE(run_alignment_suite(AlignmentMethod::vmd_channelwise, 40.0).score.pass);
}

TEST_CASE("mode selection keeps the strongest modes in frequency order") {
    const MultivariateTestSignal mv = gen_mv_test();
    AlignedDecomposition d;
    for (Eigen::Index c = 0; c < 2; ++c) {
        const Signal xc = mv.signal.channel(c);
        Decomposition dc(Signal::zeros(xc.size(), xc.sample_rate_hz()));
        dc.modes.push_back(*mv.references[2][static_cast<std::size_t>(c)]);
        dc.modes.push_back(scale(*mv.references[0][static_cast<std::size_t>(c)], 0.01));
        dc.modes.push_back(*mv.references[0][static_cast<std::size_t>(c)]);
        dc.residual = subtract(xc, dc.mode_sum());
        d.channels.push_back(dc);
    }
    const AlignedDecomposition s = select_modes(d, 2);
    REQUIRE(s.n_modes() == 2);
    for (Eigen::Index c = 0; c < 2; ++c) {
        const auto& ch = s.channels[static_cast<std::size_t>(c)];
        CHECK(ch.modes[0].samples() == mv.references[0][static_cast<std::size_t>(c)]->samples());
        CHECK(ch.modes[1].samples() == mv.references[2][static_cast<std::size_t>(c)]->samples());
        const Signal xc = mv.signal.channel(c);
        CHECK(ch.reconstruction_error(xc) < 1e-12 * l2_norm(xc));
    }
    CHECK(select_modes(d, 5).n_modes() == 3);
}

TEST_CASE("json and csv reports") {
    const SuiteResult r = run_noise_suite(small_spec("vmd", "s2"));
    const nlohmann::json j = to_json(r);
    CHECK(j["method"] == "vmd");
    CHECK(j["points"].size() == 2);
    CHECK(j["points"][0]["snr_db"] == 20.0);

    QrfReport q = match_components({test_signal("s2").references[1]}, test_signal("s2").references);
    const nlohmann::json jq = to_json(q);
    CHECK(jq["assignment"][0][0] == 0);
    CHECK(jq["assignment"][0][1] == 1);
    CHECK(jq["total_qrf_db"] == kQrfSaturationDb);
    CHECK(jq.contains("per_mode_qrf_db"));

    const auto path = std::filesystem::temp_directory_path() / "sdecomp_suite_test.csv";
    write_suite_csv(r, path.string());
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "snr_db,mean_db,std_db,failures");
    std::getline(in, line);
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    CHECK(std::stod(cell) == 20.0);
    std::getline(ss, cell, ',');
    CHECK(std::stod(cell) == r.points[0].mean_db);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(write_suite_csv(r, "/nonexistent/dir/x.csv"), IoError);
}
