#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "sdecomp/emd.hpp"
#include "sdecomp/metrics.hpp"
#include "sdecomp/multivariate.hpp"
#include "sdecomp/spectral.hpp"
#include "sdecomp/ssa.hpp"
#include "sdecomp/sst.hpp"
#include "sdecomp/synth.hpp"
#include "sdecomp/variational.hpp"

namespace sdecomp {

struct SstRecipe {
    SstConfig sst;
    RidgeConfig ridge;
    std::optional<int> half_width;
};

using MethodConfig = std::variant<EmdConfig, VmdConfig, VncmdConfig, SstRecipe, SsaConfig>;

/// "emd", "vmd", "vncmd", "sst" or "ssa".
std::string method_name(const MethodConfig& m);

/// Test signals by id: "s1", "s1-continuous", "s2", "ramp".
SyntheticSignal test_signal(const std::string& id);

/// The settings each method is run with on a given test signal.
MethodConfig default_recipe(const std::string& method, const std::string& signal_id);

/// Set one named parameter (e.g. "alpha", "L", "start_band"); unknown names throw.
void apply_param(MethodConfig& m, const std::string& name, double value);

Decomposition run_method(const MethodConfig& m, const Signal& x);

struct AccuracyResult {
    QrfReport report;
    TFGrid tf;
    double wall_s = 0.0;
    std::optional<std::string> error;
};

AccuracyResult run_accuracy(const MethodConfig& m, const SyntheticSignal& sig);
AccuracyResult run_accuracy(const MethodConfig& m, const std::string& signal_id);

struct NoiseSuiteSpec {
    MethodConfig method;
    std::string signal_id = "s1";
    std::vector<double> snr_grid_db{24, 21, 18, 15, 12, 9, 6, 3};
    int n_realizations = 50;
    std::uint64_t base_seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct SuitePoint {
    double snr_db = 0.0;
    double mean_db = 0.0;
    double std_db = 0.0;
    std::vector<double> totals;  // realization order, failures omitted
    int failures = 0;
    double mean_wall_s = 0.0;
};

struct SuiteResult {
    std::string method;
    std::string signal_id;
    std::vector<SuitePoint> points;
};

SuiteResult run_noise_suite(const NoiseSuiteSpec& spec);

struct SweepRow {
    double value = 0.0;
    std::optional<QrfReport> report;
    std::optional<std::string> error;
};

std::vector<SweepRow> run_param_sweep(const MethodConfig& base, const std::string& param,
                                      const std::vector<double>& values, const std::string& signal_id);

enum class AlignmentMethod { vmd_channelwise, memd, mvmd };

AlignmentMethod parse_alignment_method(const std::string& name);

struct AlignmentOptions {
    std::uint64_t seed = 0;
    double tol_hz = 1.0;
    MemdConfig memd;
    MvmdConfig mvmd;
    VmdConfig vmd = channelwise_defaults();

    static VmdConfig channelwise_defaults() {
        VmdConfig c;
        c.init_mode = VmdInit::zeros;
        return c;
    }
};

struct AlignmentRun {
    AlignmentScore score;
    AlignedDecomposition decomposition;  // reduced to the table's mode count
    double total_qrf_db = 0.0;          // matched per channel against the present references
};

/// Keep the n highest-energy aligned modes, then order them by ascending frequency.
/// MEMD runs in the alignment suite stop after as many IMFs as the table has modes.
AlignedDecomposition select_modes(const AlignedDecomposition& d, std::size_t n);

AlignmentRun run_alignment_suite(AlignmentMethod method, double snr_db, const AlignmentOptions& opts = {});

nlohmann::json to_json(const QrfReport& r);
nlohmann::json to_json(const SuiteResult& r);
nlohmann::json to_json(const AlignmentScore& s);
nlohmann::json to_json(const std::vector<SweepRow>& rows);

/// snr_db,mean_db,std_db,failures
void write_suite_csv(const SuiteResult& r, const std::string& path);

}  // namespace sdecomp
