#include "sdecomp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "sdecomp/bench.hpp"
#include "sdecomp/io.hpp"

namespace sdecomp {

namespace {

const std::vector<std::string> kUnivariate{"emd", "vmd", "vncmd", "sst", "ssa"};
const std::vector<std::string> kMultivariate{"memd", "mvmd", "vmd-channelwise"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

double number_for(const std::string& flag, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw UsageError(flag + ": expected a number, got '" + text + "'");
    }
    return v;
}

std::vector<double> number_list(const std::string& flag, const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(number_for(flag, item));
    if (out.empty()) throw UsageError(flag + ": expected a comma-separated list of numbers");
    return out;
}

std::string flag_of(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

// Turn unrecognized "--name value" / "--name=value" pairs into the params map.
std::map<std::string, std::string> collect_params(const std::vector<std::string>& extras) {
    std::map<std::string, std::string> params;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& a = extras[i];
        if (a.rfind("--", 0) != 0 || a.size() < 3) throw UsageError("unexpected argument '" + a + "'");
        std::string key = a.substr(2), value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= extras.size()) throw UsageError(a + ": missing value");
            value = extras[++i];
        }
        std::replace(key.begin(), key.end(), '-', '_');
        params[key] = value;
    }
    return params;
}

MethodConfig univariate_method(const std::string& method, const std::string& signal_hint,
                               const std::map<std::string, std::string>& params) {
    MethodConfig m = default_recipe(method, signal_hint);
    for (const auto& [key, value] : params) {
        const std::string flag = flag_of(key);
        if (key == "init_if") {
            auto* v = std::get_if<VncmdConfig>(&m);
            if (!v) throw UsageError(flag + ": only valid for --method vncmd");
            v->init_if_hz = number_list(flag, value);
            continue;
        }
        try {
            apply_param(m, key, number_for(flag, value));
        } catch (const ContractViolation& e) {
            throw UsageError(flag + ": " + e.what());
        }
    }
    return m;
}

MemdConfig memd_config(const std::map<std::string, std::string>& params) {
    MemdConfig c;
    for (const auto& [key, value] : params) {
        const std::string flag = flag_of(key);
        const double v = number_for(flag, value);
        if (key == "m" || key == "M") c.M = static_cast<int>(v);
        else if (key == "direction_seed") c.seed = static_cast<std::uint64_t>(v);
        else {
            MethodConfig e = c.emd;
            try {
                apply_param(e, key, v);
            } catch (const ContractViolation& ex) {
                throw UsageError(flag + ": " + ex.what());
            }
            c.emd = std::get<EmdConfig>(e);
        }
    }
    return c;
}

MvmdConfig mvmd_config(const std::map<std::string, std::string>& params) {
    MvmdConfig c;
    for (const auto& [key, value] : params) {
        const std::string flag = flag_of(key);
        const double v = number_for(flag, value);
        if (key == "k" || key == "K") c.K = static_cast<int>(v);
        else if (key == "alpha") c.alpha = v;
        else if (key == "tau") c.tau = v;
        else if (key == "tol") c.tol = v;
        else if (key == "max_iters") c.max_iters = static_cast<int>(v);
        else throw UsageError(flag + ": method mvmd has no such parameter");
    }
    return c;
}

VmdConfig channelwise_config(const std::map<std::string, std::string>& params) {
    MethodConfig m = AlignmentOptions::channelwise_defaults();
    for (const auto& [key, value] : params) {
        const std::string flag = flag_of(key);
        try {
            apply_param(m, key, number_for(flag, value));
        } catch (const ContractViolation& ex) {
            throw UsageError(flag + ": " + ex.what());
        }
    }
    return std::get<VmdConfig>(m);
}

AlignmentOptions alignment_options(const RunConfig& cfg) {
    AlignmentOptions o;
    o.seed = cfg.seed;
    if (cfg.method == "memd") o.memd = memd_config(cfg.params);
    else if (cfg.method == "mvmd") o.mvmd = mvmd_config(cfg.params);
    else o.vmd = channelwise_config(cfg.params);
    return o;
}

void validate_method_params(const RunConfig& cfg) {
    if (cfg.method == "memd") memd_config(cfg.params);
    else if (cfg.method == "mvmd") mvmd_config(cfg.params);
    else if (cfg.method == "vmd-channelwise") channelwise_config(cfg.params);
    else univariate_method(cfg.method, cfg.signal, cfg.params);
}

nlohmann::json params_json(const RunConfig& cfg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : cfg.params) j[k] = v;
    return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

std::string require_string(const std::optional<std::string>& v, const std::string& flag) {
    if (!v) throw UsageError(flag + " is required");
    return *v;
}

}  // namespace

RunConfig parse_cli(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Signal decomposition toolkit"};
    app.require_subcommand(1);

    std::string snr_list, values_list;
    auto common_io = [&](CLI::App* sub, bool input_required) {
        auto* in = sub->add_option("--input", cfg.input, "input CSV");
        if (input_required) in->required();
        sub->add_option("--fs", cfg.fs, "sample rate in Hz (overrides the CSV header)");
    };

    auto* synth = app.add_subcommand("synth", "write a test signal as CSV");
    synth->add_option("--signal", cfg.signal)->check(CLI::IsMember({"s1", "s1-continuous", "s2", "mv"}));
    synth->add_option("--output", cfg.output)->required();
    synth->add_option("--snr", cfg.snr_db, "add white Gaussian noise at this SNR (dB)");
    synth->add_option("--seed", cfg.seed);
    synth->add_option("--references", cfg.csv, "also write the reference components to this CSV");

    std::vector<std::string> all_methods = kUnivariate;
    all_methods.insert(all_methods.end(), kMultivariate.begin(), kMultivariate.end());

    auto* dec = app.add_subcommand("decompose", "decompose a CSV signal");
    dec->allow_extras();
    dec->add_option("--method", cfg.method)->required()->check(CLI::IsMember(all_methods));
    common_io(dec, true);
    dec->add_option("--output", cfg.output, "output directory");

    auto* tf = app.add_subcommand("tf", "Hilbert spectrum of a decomposition");
    tf->allow_extras();
    tf->add_option("--method", cfg.method)->required()->check(CLI::IsMember(kUnivariate));
    common_io(tf, true);
    tf->add_option("--output", cfg.output)->required();
    tf->add_option("--bins", cfg.bins)->check(CLI::PositiveNumber);
    tf->add_option("--fmax", cfg.fmax_hz);

    auto* bench = app.add_subcommand("bench", "accuracy, noise and parameter studies");
    bench->allow_extras();
    bench->add_option("--suite", cfg.suite)->required()->check(CLI::IsMember({"accuracy", "noise", "sweep"}));
    bench->add_option("--method", cfg.method)->required()->check(CLI::IsMember(kUnivariate));
    bench->add_option("--signal", cfg.signal)->check(CLI::IsMember({"s1", "s1-continuous", "s2", "ramp"}));
    bench->add_option("--n", cfg.n_realizations);
    bench->add_option("--seed", cfg.seed);
    bench->add_option("--snr", snr_list, "comma-separated SNR grid in dB");
    bench->add_option("--param", cfg.param);
    bench->add_option("--values", values_list);
    bench->add_option("--output", cfg.output, "JSON report path");
    bench->add_option("--csv", cfg.csv, "CSV summary path (noise suite)");

    auto* align = app.add_subcommand("align", "mode-alignment study on the bivariate test signal");
    align->allow_extras();
    align->add_option("--method", cfg.method)->required()->check(CLI::IsMember(kMultivariate));
    align->add_option("--snr", cfg.snr_db)->required();
    align->add_option("--seed", cfg.seed);
    align->add_option("--output", cfg.output, "JSON report path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    cfg.params = collect_params(chosen->remaining());

    if (cfg.subcommand == "decompose" || cfg.subcommand == "tf" || cfg.subcommand == "bench" ||
        cfg.subcommand == "align") {
        validate_method_params(cfg);
    }
    if (cfg.subcommand == "synth" && !cfg.params.empty()) throw UsageError("synth takes no method parameters");
    if (cfg.subcommand == "bench") {
        if (!snr_list.empty()) cfg.snr_grid_db = number_list("--snr", snr_list);
        if (!values_list.empty()) cfg.values = number_list("--values", values_list);
        if (cfg.suite == "sweep") {
            if (cfg.param.empty()) throw UsageError("--param is required for the sweep suite");
            if (cfg.values.empty()) throw UsageError("--values is required for the sweep suite");
            try {
                MethodConfig probe = default_recipe(cfg.method, cfg.signal);
                apply_param(probe, cfg.param, cfg.values.front());
            } catch (const ContractViolation& e) {
                throw UsageError(std::string("--param: ") + e.what());
            }
        }
        if (cfg.suite == "noise" && cfg.n_realizations < 2) throw UsageError("--n: need at least 2 realizations");
    }
    return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    (void)err;
    if (cfg.subcommand == "synth") {
        const std::string path = require_string(cfg.output, "--output");
        if (cfg.signal == "mv") {
            const MultivariateTestSignal mv = gen_mv_test();
            const MultichannelSignal x = cfg.snr_db ? add_wgn(mv.signal, *cfg.snr_db, cfg.seed) : mv.signal;
            write_csv(path, x);
        } else {
            const SyntheticSignal s = test_signal(cfg.signal);
            const Signal x = cfg.snr_db ? add_wgn(s.composite, *cfg.snr_db, cfg.seed) : s.composite;
            write_csv(path, x, cfg.signal);
            if (cfg.csv) {
                Eigen::MatrixXd refs(static_cast<Eigen::Index>(s.references.size()), x.size());
                for (std::size_t k = 0; k < s.references.size(); ++k)
                    refs.row(static_cast<Eigen::Index>(k)) = s.references[k].samples().transpose();
                write_csv(*cfg.csv, std::vector<std::string>(s.names.begin() + 1, s.names.end()), refs,
                          x.sample_rate_hz());
            }
        }
        out << "wrote " << path << '\n';
        return kExitOk;
    }

    if (cfg.subcommand == "decompose" || cfg.subcommand == "tf") {
        const auto input = read_csv_signal(*cfg.input, cfg.fs);
        nlohmann::json info{{"method", cfg.method}, {"config", params_json(cfg)}, {"input", *cfg.input}};
        if (contains(kMultivariate, cfg.method)) {
            const auto* x = std::get_if<MultichannelSignal>(&input);
            if (!x) throw UsageError("--method " + cfg.method + " needs a multi-column --input");
            AlignedDecomposition d;
            if (cfg.method == "memd") d = memd_decompose(*x, memd_config(cfg.params));
            else if (cfg.method == "mvmd") d = mvmd_decompose(*x, mvmd_config(cfg.params));
            else d = vmd_channelwise(*x, channelwise_config(cfg.params));
            if (cfg.output) write_decomposition(d, *cfg.output, info);
            out << cfg.method << ": " << d.n_modes() << " modes x " << d.n_channels() << " channels\n";
            return kExitOk;
        }
        const auto* x = std::get_if<Signal>(&input);
        if (!x) throw UsageError("--method " + cfg.method + " needs a single-column --input");
        const Decomposition d = run_method(univariate_method(cfg.method, "s1", cfg.params), *x);
        if (cfg.subcommand == "tf") {
            const double fmax = cfg.fmax_hz.value_or(0.5 * x->sample_rate_hz());
            if (!(fmax > 0.0 && fmax <= 0.5 * x->sample_rate_hz())) throw UsageError("--fmax: must lie in (0, fs/2]");
            write_tf_csv(*cfg.output, hilbert_spectrum(d, cfg.bins, fmax));
            out << "wrote " << *cfg.output << '\n';
            return kExitOk;
        }
        if (cfg.output) write_decomposition(d, *cfg.output, info, x);
        out << cfg.method << ": " << d.size() << " modes, reconstruction error " << d.reconstruction_error(*x) << '\n';
        for (const auto& w : d.warnings) out << "warning: " << w << '\n';
        return kExitOk;
    }

    if (cfg.subcommand == "bench") {
        const MethodConfig m = univariate_method(cfg.method, cfg.signal, cfg.params);
        nlohmann::json report;
        if (cfg.suite == "accuracy") {
            const AccuracyResult r = run_accuracy(m, cfg.signal);
            report = {{"method", cfg.method}, {"signal", cfg.signal}, {"report", to_json(r.report)}, {"wall_s", r.wall_s}};
            if (r.error) report["error"] = *r.error;
            out << cfg.method << " on " << cfg.signal << ": total QRF " << r.report.total_qrf_db << " dB\n";
        } else if (cfg.suite == "noise") {
            NoiseSuiteSpec spec{m, cfg.signal};
            if (!cfg.snr_grid_db.empty()) spec.snr_grid_db = cfg.snr_grid_db;
            spec.n_realizations = cfg.n_realizations;
            spec.base_seed = cfg.seed;
            const SuiteResult r = run_noise_suite(spec);
            report = to_json(r);
            for (const auto& p : r.points) {
                out << "snr " << p.snr_db << " dB: mean " << p.mean_db << " std " << p.std_db << " failures "
                    << p.failures << '\n';
            }
            if (cfg.csv) write_suite_csv(r, *cfg.csv);
        } else {
            const auto rows = run_param_sweep(m, cfg.param, cfg.values, cfg.signal);
            report = {{"method", cfg.method}, {"signal", cfg.signal}, {"param", cfg.param}, {"rows", to_json(rows)}};
            for (const auto& row : rows) {
                out << cfg.param << "=" << row.value << ": ";
                if (row.report) out << row.report->total_qrf_db << " dB\n";
                else out << "error " << row.error.value_or("") << '\n';
            }
        }
        if (cfg.output) write_json(*cfg.output, report);
        return kExitOk;
    }

    if (cfg.subcommand == "align") {
        const AlignmentRun r = run_alignment_suite(parse_alignment_method(cfg.method), *cfg.snr_db, alignment_options(cfg));
        out << cfg.method << " at " << *cfg.snr_db << " dB: alignment " << (r.score.pass ? "pass" : "fail")
            << ", matched QRF " << r.total_qrf_db << " dB\n";
        if (cfg.output) {
            write_json(*cfg.output, {{"method", cfg.method},
                                     {"snr_db", *cfg.snr_db},
                                     {"seed", cfg.seed},
                                     {"score", to_json(r.score)},
                                     {"total_qrf_db", r.total_qrf_db}});
        }
        return kExitOk;
    }
    throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return execute(parse_cli(args), out, err);
    } catch (const CLI::CallForHelp&) {
        out << "usage: sdbench {synth|decompose|tf|bench|align} [options]; use <subcommand> --help for details\n";
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractViolation& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NotEnoughExtrema& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace sdecomp
