#include "sdecomp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <thread>

#include "sdecomp/fft.hpp"

namespace sdecomp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int as_int(const std::string& name, double v) {
    require(std::isfinite(v) && v == std::floor(v), "parameter " + name + " must be an integer");
    return static_cast<int>(v);
}

[[noreturn]] void unknown_param(const std::string& method, const std::string& name) {
    throw ContractViolation("method " + method + " has no parameter '" + name + "'");
}

}  // namespace

std::string method_name(const MethodConfig& m) {
    return std::visit(overloaded{[](const EmdConfig&) { return std::string("emd"); },
                                 [](const VmdConfig&) { return std::string("vmd"); },
                                 [](const VncmdConfig&) { return std::string("vncmd"); },
                                 [](const SstRecipe&) { return std::string("sst"); },
                                 [](const SsaConfig&) { return std::string("ssa"); }},
                      m);
}

SyntheticSignal test_signal(const std::string& id) {
    if (id == "s1") return gen_s1();
    if (id == "s1-continuous") return gen_s1(std::nullopt);
    if (id == "s2") return gen_s2();
    if (id == "ramp") {
        const Eigen::Index n = 512;
        Signal ramp(Eigen::VectorXd::LinSpaced(n, 0.0, 1.0), 512.0);
        return {ramp, {ramp}, {"ramp", "ramp"}};
    }
    throw ContractViolation("unknown signal id '" + id + "'");
}

MethodConfig default_recipe(const std::string& method, const std::string& signal_id) {
    const bool wide = signal_id == "s2";
    const int K = wide ? 2 : 3;
    if (method == "emd") return EmdConfig{};
    if (method == "vmd") {
        VmdConfig c;
        c.K = K;
        c.alpha = 500.0;
        c.tau = 0.5;
        c.max_iters = 2000;
        return c;
    }
    if (method == "vncmd") {
        VncmdConfig c;
        c.init_if_hz = wide ? std::vector<double>{30.0, 180.0} : std::vector<double>{30.0, 50.0, 85.0};
        c.alpha = wide ? 5e-5 : 3e-4;
        return c;
    }
    if (method == "sst") {
        SstRecipe r;
        r.sst.K = K;
        r.sst.n_voices = 64;
        r.sst.omega0 = 10.0;
        r.ridge.start_band = 15;
        return r;
    }
    if (method == "ssa") {
        SsaConfig c;
        c.K = K;
        return c;
    }
    throw ContractViolation("unknown method '" + method + "'");
}

void apply_param(MethodConfig& m, const std::string& name, double value) {
    std::visit(overloaded{
                   [&](EmdConfig& c) {
                       if (name == "theta1") c.theta1 = value;
                       else if (name == "theta2") c.theta2 = value;
                       else if (name == "alpha_fraction") c.alpha_fraction = value;
                       else if (name == "max_sift_iters") c.max_sift_iters = as_int(name, value);
                       else if (name == "max_imfs") c.max_imfs = as_int(name, value);
                       else unknown_param("emd", name);
                   },
                   [&](VmdConfig& c) {
                       if (name == "K" || name == "k") c.K = as_int(name, value);
                       else if (name == "alpha") c.alpha = value;
                       else if (name == "tau") c.tau = value;
                       else if (name == "tol") c.tol = value;
                       else if (name == "max_iters") c.max_iters = as_int(name, value);
                       else unknown_param("vmd", name);
                   },
                   [&](VncmdConfig& c) {
                       if (name == "alpha") c.alpha = value;
                       else if (name == "mu") c.mu = value;
                       else if (name == "if_smoothing") c.if_smoothing = value;
                       else if (name == "tol") c.tol = value;
                       else if (name == "max_iters") c.max_iters = as_int(name, value);
                       else unknown_param("vncmd", name);
                   },
                   [&](SstRecipe& r) {
                       if (name == "n_voices") r.sst.n_voices = as_int(name, value);
                       else if (name == "omega0") r.sst.omega0 = value;
                       else if (name == "gamma") r.sst.gamma = value;
                       else if (name == "K" || name == "k") r.sst.K = as_int(name, value);
                       else if (name == "start_band") r.ridge.start_band = as_int(name, value);
                       else if (name == "max_step") r.ridge.max_step = as_int(name, value);
                       else if (name == "half_width") r.half_width = as_int(name, value);
                       else unknown_param("sst", name);
                   },
                   [&](SsaConfig& c) {
                       if (name == "L" || name == "l") c.L = as_int(name, value);
                       else if (name == "K" || name == "k") c.K = as_int(name, value);
                       else if (name == "epsilon") c.epsilon = value;
                       else if (name == "window_len") c.window_len = as_int(name, value);
                       else if (name == "hop") c.hop = as_int(name, value);
                       else unknown_param("ssa", name);
                   }},
               m);
}

Decomposition run_method(const MethodConfig& m, const Signal& x) {
    return std::visit(overloaded{[&](const EmdConfig& c) { return emd_decompose(x, c); },
                                 [&](const VmdConfig& c) { return vmd_decompose(x, c).decomposition; },
                                 [&](const VncmdConfig& c) { return vncmd_decompose(x, c).decomposition; },
                                 [&](const SstRecipe& r) {
                                     return sst_decompose(x, r.sst, r.ridge, r.half_width).decomposition;
                                 },
                                 [&](const SsaConfig& c) { return ssa_decompose(x, c); }},
                      m);
}

AccuracyResult run_accuracy(const MethodConfig& m, const SyntheticSignal& sig) {
    AccuracyResult out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Decomposition d = run_method(m, sig.composite);
        out.report = match_components(d.modes, sig.references);
        out.tf = hilbert_spectrum(d, 256, 0.5 * sig.composite.sample_rate_hz());
    } catch (const std::exception& e) {
        out.error = e.what();
        out.report = match_components({}, sig.references);
    }
    out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

AccuracyResult run_accuracy(const MethodConfig& m, const std::string& signal_id) {
    return run_accuracy(m, test_signal(signal_id));
}

void NoiseSuiteSpec::validate() const {
    require(n_realizations >= 2, "noise suite needs at least 2 realizations");
    require(!snr_grid_db.empty(), "noise suite needs a nonempty SNR grid");
    require(threads >= 0, "thread count must be non-negative");
}

SuiteResult run_noise_suite(const NoiseSuiteSpec& spec) {
    spec.validate();
    const SyntheticSignal sig = test_signal(spec.signal_id);
    SuiteResult result{method_name(spec.method), spec.signal_id, {}};

    const auto n = static_cast<std::size_t>(spec.n_realizations);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(n, spec.threads > 0 ? static_cast<std::size_t>(spec.threads) : hw);

    for (double snr : spec.snr_grid_db) {
        std::vector<std::optional<double>> totals(n);
        std::vector<double> wall(n, 0.0);
        auto work = [&](std::size_t first) {
            for (std::size_t i = first; i < n; i += workers) {
                const Signal noisy = add_wgn(sig.composite, snr, spec.base_seed + i);
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    const Decomposition d = run_method(spec.method, noisy);
                    totals[i] = match_components(d.modes, sig.references).total_qrf_db;
                } catch (const std::exception&) {
                    totals[i].reset();
                }
                wall[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
        work(0);
        for (auto& t : pool) t.join();

        SuitePoint p;
        p.snr_db = snr;
        for (std::size_t i = 0; i < n; ++i) {
            if (totals[i]) p.totals.push_back(*totals[i]);
            else ++p.failures;
        }
        if (!p.totals.empty()) {
            p.mean_db = std::accumulate(p.totals.begin(), p.totals.end(), 0.0) / static_cast<double>(p.totals.size());
            double ss = 0.0;
            for (double v : p.totals) ss += (v - p.mean_db) * (v - p.mean_db);
            p.std_db = p.totals.size() > 1 ? std::sqrt(ss / static_cast<double>(p.totals.size() - 1)) : 0.0;
        } else {
            p.mean_db = p.std_db = std::nan("");
        }
        p.mean_wall_s = std::accumulate(wall.begin(), wall.end(), 0.0) / static_cast<double>(n);
        result.points.push_back(std::move(p));
    }
    return result;
}

std::vector<SweepRow> run_param_sweep(const MethodConfig& base, const std::string& param,
                                      const std::vector<double>& values, const std::string& signal_id) {
    {
        MethodConfig probe = base;
        apply_param(probe, param, values.empty() ? 1.0 : values.front());
    }
    const SyntheticSignal sig = test_signal(signal_id);
    std::vector<SweepRow> rows;
    for (double v : values) {
        SweepRow row;
        row.value = v;
        try {
            MethodConfig m = base;
            apply_param(m, param, v);
            const Decomposition d = run_method(m, sig.composite);
            row.report = match_components(d.modes, sig.references);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

AlignmentMethod parse_alignment_method(const std::string& name) {
    if (name == "vmd-channelwise" || name == "vmd") return AlignmentMethod::vmd_channelwise;
    if (name == "memd") return AlignmentMethod::memd;
    if (name == "mvmd") return AlignmentMethod::mvmd;
    throw ContractViolation("unknown alignment method '" + name + "'");
}

AlignedDecomposition select_modes(const AlignedDecomposition& d, std::size_t n) {
    const std::size_t total = d.n_modes();
    n = std::min(n, total);
    std::vector<double> energy(total, 0.0), num(total, 0.0);
    for (std::size_t k = 0; k < total; ++k) {
        for (const auto& ch : d.channels) {
            const Signal& m = ch.modes[k];
            const double e = m.samples().squaredNorm();
            energy[k] += e;
            num[k] += e * dominant_frequency_hz(m.samples(), m.sample_rate_hz());
        }
    }
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return energy[a] > energy[b]; });
    idx.resize(n);
    auto freq = [&](std::size_t k) { return energy[k] > 0.0 ? num[k] / energy[k] : 0.0; };
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return freq(a) < freq(b); });

    AlignedDecomposition out;
    for (const auto& ch : d.channels) {
        // dropped modes move into the residual so the channel still reconstructs
        Eigen::VectorXd residual = ch.residual.samples();
        for (std::size_t k = 0; k < total; ++k) {
            if (std::find(idx.begin(), idx.end(), k) == idx.end()) residual += ch.modes[k].samples();
        }
        Decomposition r(ch.residual.with_samples(residual));
        for (auto k : idx) r.modes.push_back(ch.modes[k]);
        if (ch.center_freqs_hz) {
            std::vector<double> c;
            for (auto k : idx) c.push_back((*ch.center_freqs_hz)[k]);
            r.center_freqs_hz = c;
        }
        r.warnings = ch.warnings;
        out.channels.push_back(std::move(r));
    }
    if (d.center_freqs_hz) {
        std::vector<double> c;
        for (auto k : idx) c.push_back((*d.center_freqs_hz)[k]);
        out.center_freqs_hz = c;
    }
    return out;
}

AlignmentRun run_alignment_suite(AlignmentMethod method, double snr_db, const AlignmentOptions& opts) {
    const MultivariateTestSignal mv = gen_mv_test();
    const MultichannelSignal noisy = add_wgn(mv.signal, snr_db, opts.seed);
    AlignedDecomposition full;
    switch (method) {
        case AlignmentMethod::vmd_channelwise: full = vmd_channelwise(noisy, opts.vmd); break;
        case AlignmentMethod::memd: {
            MemdConfig cfg = opts.memd;
            cfg.emd.max_imfs = std::min<int>(cfg.emd.max_imfs, static_cast<int>(mv.expected.size()));
            full = memd_decompose(noisy, cfg);
            break;
        }
        case AlignmentMethod::mvmd: full = mvmd_decompose(noisy, opts.mvmd); break;
    }

    AlignmentRun run;
    for (std::size_t c = 0; c < full.n_channels(); ++c) {
        std::vector<Signal> refs;
        for (const auto& row : mv.references)
            if (row[c]) refs.push_back(*row[c]);
        run.total_qrf_db += match_components(full.channels[c].modes, refs).total_qrf_db;
    }
    run.decomposition = select_modes(full, mv.expected.size());
    if (run.decomposition.n_modes() == mv.expected.size()) {
        run.score = alignment_score(run.decomposition, mv.expected, opts.tol_hz);
    } else {
        run.score.tolerance_hz = opts.tol_hz;
        run.score.pass = false;
    }
    return run;
}

nlohmann::json to_json(const QrfReport& r) {
    nlohmann::json j;
    j["assignment"] = nlohmann::json::array();
    for (const auto& [e, ref] : r.assignment) j["assignment"].push_back({e, ref});
    j["per_mode_qrf_db"] = r.per_mode_qrf_db;
    j["total_qrf_db"] = r.total_qrf_db;
    j["unmatched_est"] = r.unmatched_est;
    j["unmatched_ref"] = r.unmatched_ref;
    return j;
}

nlohmann::json to_json(const SuiteResult& r) {
    nlohmann::json j;
    j["method"] = r.method;
    j["signal"] = r.signal_id;
    j["points"] = nlohmann::json::array();
    for (const auto& p : r.points) {
        j["points"].push_back({{"snr_db", p.snr_db},
                               {"mean_db", p.mean_db},
                               {"std_db", p.std_db},
                               {"failures", p.failures},
                               {"mean_wall_s", p.mean_wall_s},
                               {"totals", p.totals}});
    }
    return j;
}

nlohmann::json to_json(const AlignmentScore& s) {
    return {{"pass", s.pass},
            {"tolerance_hz", s.tolerance_hz},
            {"dominant_hz", s.dominant_hz},
            {"relative_energy", s.relative_energy},
            {"cell_pass", s.cell_pass}};
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r{{"value", row.value}};
        if (row.report) r["report"] = to_json(*row.report);
        if (row.error) r["error"] = *row.error;
        j.push_back(r);
    }
    return j;
}

void write_suite_csv(const SuiteResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "snr_db,mean_db,std_db,failures\n" << std::setprecision(17);
    for (const auto& p : r.points) out << p.snr_db << ',' << p.mean_db << ',' << p.std_db << ',' << p.failures << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace sdecomp
