#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "sdecomp/signal.hpp"
#include "sdecomp/spectral.hpp"

namespace sdecomp {

/// Parsed CSV: one column per channel. Layout on disk:
///   # sample_rate=<hz>
///   name1,name2,...
///   v11,v12,...
struct CsvTable {
    std::vector<std::string> names;
    Eigen::MatrixXd columns;  // channels x samples
    double sample_rate_hz = 0.0;
};

/// fs_override wins over the header; one of the two must be present.
CsvTable read_csv(const std::string& path, std::optional<double> fs_override = std::nullopt);

/// One column gives a Signal, several give a MultichannelSignal.
std::variant<Signal, MultichannelSignal> read_csv_signal(const std::string& path,
                                                         std::optional<double> fs_override = std::nullopt);

/// Values are written with 17 significant digits so doubles round-trip.
void write_csv(const std::string& path, const std::vector<std::string>& names, const Eigen::MatrixXd& columns,
               double sample_rate_hz);
void write_csv(const std::string& path, const Signal& x, const std::string& name = "x");
void write_csv(const std::string& path, const MultichannelSignal& x);

/// Writes mode_<k>.csv for each mode, residual.csv and manifest.json into `dir`
/// (created if missing). `info` is merged into the manifest (method, config, ...).
void write_decomposition(const Decomposition& d, const std::string& dir, const nlohmann::json& info = {},
                         const Signal* input = nullptr);
/// Multichannel variant: each mode file holds one column per channel.
void write_decomposition(const AlignedDecomposition& d, const std::string& dir, const nlohmann::json& info = {});

/// Reads back what write_decomposition(Decomposition) produced.
Decomposition read_decomposition(const std::string& dir);

/// First column freq_hz, then one column per time frame.
void write_tf_csv(const std::string& path, const TFGrid& grid);

}  // namespace sdecomp
