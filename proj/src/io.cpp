#include "sdecomp/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sdecomp {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << std::setprecision(17);
    return out;
}

}  // namespace

CsvTable read_csv(const std::string& path, std::optional<double> fs_override) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    CsvTable table;
    std::optional<double> header_fs;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            const auto pos = t.find("sample_rate=");
            if (pos != std::string::npos) {
                header_fs = parse_number(trim(t.substr(pos + 12)));
                if (!header_fs || *header_fs <= 0.0) throw IoError(path + ":" + std::to_string(line_no) + ": bad sample rate");
            }
            continue;
        }
        const auto cells = split(t);
        if (rows.empty() && table.names.empty() && !parse_number(cells.front())) {
            table.names = cells;
            continue;
        }
        std::vector<double> values;
        for (const auto& c : cells) {
            const auto v = parse_number(c);
            if (!v) throw IoError(path + ":" + std::to_string(line_no) + ": non-numeric cell '" + c + "'");
            values.push_back(*v);
        }
        if (!rows.empty() && values.size() != rows.front().size()) {
            throw IoError(path + ":" + std::to_string(line_no) + ": row has " + std::to_string(values.size()) +
                          " cells, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw IoError(path + ": no data rows");
    const std::size_t n_cols = rows.front().size();
    if (!table.names.empty() && table.names.size() != n_cols) throw IoError(path + ": header and data column counts differ");
    if (table.names.empty()) {
        for (std::size_t c = 0; c < n_cols; ++c) table.names.push_back("ch" + std::to_string(c + 1));
    }
    const std::optional<double> rate = fs_override ? fs_override : header_fs;
    if (!rate) throw IoError(path + ": missing sample rate (add '# sample_rate=<hz>' or pass --fs)");
    table.sample_rate_hz = *rate;
    table.columns.resize(static_cast<Eigen::Index>(n_cols), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < n_cols; ++c)
            table.columns(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = rows[r][c];
    return table;
}

std::variant<Signal, MultichannelSignal> read_csv_signal(const std::string& path, std::optional<double> fs_override) {
    CsvTable t = read_csv(path, fs_override);
    if (t.columns.cols() < 2) throw IoError(path + ": need at least 2 samples");
    if (t.columns.rows() == 1) return Signal(t.columns.row(0).transpose(), t.sample_rate_hz);
    return MultichannelSignal(t.columns, t.sample_rate_hz);
}

void write_csv(const std::string& path, const std::vector<std::string>& names, const Eigen::MatrixXd& columns,
               double sample_rate_hz) {
    require(static_cast<Eigen::Index>(names.size()) == columns.rows(), "one name per column required");
    std::ofstream out = open_out(path);
    out << "# sample_rate=" << sample_rate_hz << '\n';
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
    out << '\n';
    for (Eigen::Index r = 0; r < columns.cols(); ++r) {
        for (Eigen::Index c = 0; c < columns.rows(); ++c) out << (c ? "," : "") << columns(c, r);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_csv(const std::string& path, const Signal& x, const std::string& name) {
    write_csv(path, {name}, x.samples().transpose(), x.sample_rate_hz());
}

void write_csv(const std::string& path, const MultichannelSignal& x) {
    std::vector<std::string> names;
    for (Eigen::Index c = 0; c < x.n_channels(); ++c) names.push_back("ch" + std::to_string(c + 1));
    write_csv(path, names, x.data(), x.sample_rate_hz());
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir);
}

void write_manifest(const std::string& dir, nlohmann::json manifest) {
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw IoError("cannot write manifest in " + dir);
    out << manifest.dump(2) << '\n';
    if (!out) throw IoError("write failed: manifest in " + dir);
}

}  // namespace

void write_decomposition(const Decomposition& d, const std::string& dir, const nlohmann::json& info,
                         const Signal* input) {
    ensure_dir(dir);
    nlohmann::json manifest = info.is_object() ? info : nlohmann::json::object();
    std::vector<std::string> files;
    for (std::size_t k = 0; k < d.modes.size(); ++k) {
        const std::string name = "mode_" + std::to_string(k + 1) + ".csv";
        write_csv((fs::path(dir) / name).string(), d.modes[k], "mode_" + std::to_string(k + 1));
        files.push_back(name);
    }
    write_csv((fs::path(dir) / "residual.csv").string(), d.residual, "residual");
    manifest["mode_files"] = files;
    manifest["residual_file"] = "residual.csv";
    manifest["sample_rate_hz"] = d.residual.sample_rate_hz();
    manifest["n_modes"] = d.modes.size();
    manifest["center_freqs_hz"] = d.center_freqs_hz ? nlohmann::json(*d.center_freqs_hz) : nlohmann::json(nullptr);
    manifest["warnings"] = d.warnings;
    if (input) manifest["reconstruction_error"] = d.reconstruction_error(*input);
    write_manifest(dir, manifest);
}

void write_decomposition(const AlignedDecomposition& d, const std::string& dir, const nlohmann::json& info) {
    ensure_dir(dir);
    require(d.n_channels() > 0, "empty decomposition");
    nlohmann::json manifest = info.is_object() ? info : nlohmann::json::object();
    const double fs = d.channels.front().residual.sample_rate_hz();
    const Eigen::Index n = d.channels.front().residual.size();
    std::vector<std::string> names;
    for (std::size_t c = 0; c < d.n_channels(); ++c) names.push_back("ch" + std::to_string(c + 1));
    std::vector<std::string> files;
    auto gather = [&](auto pick) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(d.n_channels()), n);
        for (std::size_t c = 0; c < d.n_channels(); ++c) m.row(static_cast<Eigen::Index>(c)) = pick(d.channels[c]).transpose();
        return m;
    };
    for (std::size_t k = 0; k < d.n_modes(); ++k) {
        const std::string name = "mode_" + std::to_string(k + 1) + ".csv";
        write_csv((fs::path(dir) / name).string(), names,
                  gather([k](const Decomposition& ch) { return ch.modes[k].samples(); }), fs);
        files.push_back(name);
    }
    write_csv((fs::path(dir) / "residual.csv").string(), names,
              gather([](const Decomposition& ch) { return ch.residual.samples(); }), fs);
    manifest["mode_files"] = files;
    manifest["residual_file"] = "residual.csv";
    manifest["sample_rate_hz"] = fs;
    manifest["n_modes"] = d.n_modes();
    manifest["n_channels"] = d.n_channels();
    manifest["center_freqs_hz"] = d.center_freqs_hz ? nlohmann::json(*d.center_freqs_hz) : nlohmann::json(nullptr);
    write_manifest(dir, manifest);
}

Decomposition read_decomposition(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw IoError("no manifest in " + dir);
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad manifest: ") + e.what());
    }
    auto load = [&](const std::string& name) {
        const CsvTable t = read_csv((fs::path(dir) / name).string());
        if (t.columns.rows() != 1) throw IoError(name + ": expected one column");
        return Signal(t.columns.row(0).transpose(), t.sample_rate_hz);
    };
    Decomposition d(load(manifest.at("residual_file").get<std::string>()));
    for (const auto& f : manifest.at("mode_files")) d.modes.push_back(load(f.get<std::string>()));
    if (manifest.contains("center_freqs_hz") && manifest["center_freqs_hz"].is_array()) {
        d.center_freqs_hz = manifest["center_freqs_hz"].get<std::vector<double>>();
    }
    if (manifest.contains("warnings")) d.warnings = manifest["warnings"].get<std::vector<std::string>>();
    return d;
}

void write_tf_csv(const std::string& path, const TFGrid& grid) {
    std::ofstream out = open_out(path);
    out << "freq_hz";
    for (Eigen::Index t = 0; t < grid.times_s.size(); ++t) out << ",t=" << grid.times_s[t];
    out << '\n';
    for (Eigen::Index f = 0; f < grid.freqs_hz.size(); ++f) {
        out << grid.freqs_hz[f];
        for (Eigen::Index t = 0; t < grid.energy.cols(); ++t) out << ',' << grid.energy(f, t);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace sdecomp
