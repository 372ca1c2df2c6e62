#pragma once

// Run configuration (flat `key = value` text), trajectory CSV ingestion and
// the JSON / CSV writers. All number rendering uses %.17g so doubles
// survive a write/read cycle bit for bit.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "spectral.hpp"
#include "trajectory.hpp"
#include "units.hpp"

namespace bubblerad {

enum class Model { lorentzian, tabulated };

struct RunConfig {
    Model model = Model::lorentzian;
    std::optional<double> r0_um;
    std::optional<double> rmin_um;
    std::optional<double> gamma_ns;
    std::optional<double> period_us;
    std::optional<std::string> trajectory_csv;
    std::optional<double> baseline_r0_um;
    double alpha = PhysicalConstants::default_alpha;
    bool smoothing = false;
    std::size_t smoothing_window = 5;
    QuadratureSettings quadrature;

    friend bool operator==(const RunConfig& a, const RunConfig& b) {
        const auto& p = a.quadrature;
        const auto& q = b.quadrature;
        return a.model == b.model && a.r0_um == b.r0_um && a.rmin_um == b.rmin_um && a.gamma_ns == b.gamma_ns &&
               a.period_us == b.period_us && a.trajectory_csv == b.trajectory_csv &&
               a.baseline_r0_um == b.baseline_r0_um && a.alpha == b.alpha && a.smoothing == b.smoothing &&
               a.smoothing_window == b.smoothing_window && p.rel_tol == q.rel_tol && p.abs_tol == q.abs_tol &&
               p.max_panels == q.max_panels && p.oscillation_resolution == q.oscillation_resolution &&
               p.tail_rel_threshold == q.tail_rel_threshold && p.subtract_baseline == q.subtract_baseline &&
               p.aliasing_rel_threshold == q.aliasing_rel_threshold;
    }
};

/// Lossless decimal rendering (printf %.17g).
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Whole-string strict parse; no leading '+', no trailing junk.
inline bool parse_double(std::string_view s, double& out) {
    if (s.empty())
        return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_size(std::string_view s, std::size_t& out) {
    if (s.empty())
        return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
    std::size_t value_column = 0;
};

}  // namespace detail

/// Keys accepted by parse_config, in render order.
inline const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys{
        "model",          "r0_um",       "rmin_um",     "gamma_ns",    "period_us",  "trajectory_csv",
        "baseline_r0_um", "alpha",       "smoothing",   "smoothing_window",          "subtract_baseline",
        "rel_tol",        "abs_tol",     "max_panels",  "oscillation_resolution",    "tail_rel_threshold",
        "aliasing_rel_threshold"};
    return keys;
}

inline RunConfig parse_config(std::string_view text) {
    using kind = config_error::kind;
    std::map<std::string, detail::ConfigEntry, std::less<>> entries;
    const auto& known = config_keys();

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = raw;
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF")
            line.remove_prefix(3);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        if (detail::trim(line).empty())
            continue;

        const auto eq = line.find('=');
        const auto offset = static_cast<std::size_t>(line.data() - raw.data());
        if (eq == std::string_view::npos) {
            const auto first = line.find_first_not_of(" \t");
            throw config_error(kind::syntax, line_no, offset + first + 1, "expected 'key = value'");
        }
        const std::string_view key = detail::trim(line.substr(0, eq));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        const std::size_t key_col = offset + static_cast<std::size_t>(key.data() - line.data()) + 1;
        if (key.empty())
            throw config_error(kind::syntax, line_no, offset + eq + 1, "missing key before '='");
        for (char c : key) {
            if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
                throw config_error(kind::syntax, line_no, key_col, "invalid key '" + std::string(key) + "'");
        }
        const std::size_t value_col =
            value.empty() ? offset + eq + 2 : offset + static_cast<std::size_t>(value.data() - line.data()) + 1;
        if (value.empty())
            throw config_error(kind::syntax, line_no, value_col, "missing value for '" + std::string(key) + "'");
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw config_error(kind::unknown_key, line_no, key_col, "unknown key '" + std::string(key) + "'");
        if (const auto it = entries.find(key); it != entries.end())
            throw config_error(kind::conflicting_key, line_no, key_col,
                               "duplicate key '" + std::string(key) + "' (first set on line " +
                                   std::to_string(it->second.line) + ")");
        entries.emplace(std::string(key), detail::ConfigEntry{std::string(value), line_no, value_col});
    }

    auto number = [&](const std::string& key) -> std::optional<double> {
        const auto it = entries.find(key);
        if (it == entries.end())
            return std::nullopt;
        double v = 0.0;
        if (!detail::parse_double(it->second.value, v) || !std::isfinite(v))
            throw config_error(kind::syntax, it->second.line, it->second.value_column,
                               "'" + key + "' needs a finite number, got '" + it->second.value + "'");
        return v;
    };
    auto positive = [&](const std::string& key) -> std::optional<double> {
        const auto v = number(key);
        if (v && !(*v > 0.0)) {
            const auto& e = entries.at(key);
            throw config_error(kind::range, e.line, e.value_column, "'" + key + "' must be positive");
        }
        return v;
    };
    auto count = [&](const std::string& key) -> std::optional<std::size_t> {
        const auto it = entries.find(key);
        if (it == entries.end())
            return std::nullopt;
        std::size_t v = 0;
        if (!detail::parse_size(it->second.value, v))
            throw config_error(kind::syntax, it->second.line, it->second.value_column,
                               "'" + key + "' needs a non-negative integer, got '" + it->second.value + "'");
        return v;
    };
    auto flag = [&](const std::string& key) -> std::optional<bool> {
        const auto it = entries.find(key);
        if (it == entries.end())
            return std::nullopt;
        const auto& v = it->second.value;
        if (v == "true")
            return true;
        if (v == "false")
            return false;
        throw config_error(kind::syntax, it->second.line, it->second.value_column,
                           "'" + key + "' must be true or false, got '" + v + "'");
    };
    auto range_error = [&](const std::string& key, const std::string& msg) {
        const auto& e = entries.at(key);
        return config_error(kind::range, e.line, e.value_column, msg);
    };

    RunConfig cfg;
    const auto model_it = entries.find("model");
    if (model_it == entries.end())
        throw config_error(kind::missing_key, 0, 0, "missing required key 'model'");
    if (model_it->second.value == "lorentzian")
        cfg.model = Model::lorentzian;
    else if (model_it->second.value == "tabulated")
        cfg.model = Model::tabulated;
    else
        throw config_error(kind::range, model_it->second.line, model_it->second.value_column,
                           "model must be 'lorentzian' or 'tabulated', got '" + model_it->second.value + "'");

    const std::vector<std::string> lorentzian_keys{"r0_um", "rmin_um", "gamma_ns", "period_us"};
    const std::vector<std::string> tabulated_keys{"trajectory_csv", "baseline_r0_um", "smoothing", "smoothing_window"};
    const auto& required = cfg.model == Model::lorentzian ? lorentzian_keys : std::vector<std::string>{"trajectory_csv"};
    const auto& foreign = cfg.model == Model::lorentzian ? tabulated_keys : lorentzian_keys;
    const std::string model_name = model_it->second.value;
    for (const auto& k : foreign) {
        if (const auto it = entries.find(k); it != entries.end())
            throw config_error(kind::conflicting_key, it->second.line, 1,
                               "key '" + k + "' is not valid for model = " + model_name);
    }
    for (const auto& k : required) {
        if (!entries.contains(k))
            throw config_error(kind::missing_key, 0, 0, "model = " + model_name + " requires key '" + k + "'");
    }

    cfg.r0_um = positive("r0_um");
    cfg.rmin_um = positive("rmin_um");
    cfg.gamma_ns = positive("gamma_ns");
    cfg.period_us = positive("period_us");
    if (cfg.r0_um && cfg.rmin_um && !(*cfg.rmin_um < *cfg.r0_um))
        throw range_error("rmin_um", "rmin_um must be smaller than r0_um");
    if (const auto it = entries.find("trajectory_csv"); it != entries.end())
        cfg.trajectory_csv = it->second.value;
    cfg.baseline_r0_um = positive("baseline_r0_um");
    if (const auto a = positive("alpha"))
        cfg.alpha = *a;
    if (const auto s = flag("smoothing"))
        cfg.smoothing = *s;
    if (const auto w = count("smoothing_window")) {
        if (*w < 5 || *w > 11 || *w % 2 == 0)
            throw range_error("smoothing_window", "smoothing_window must be odd and between 5 and 11");
        cfg.smoothing_window = *w;
    }

    auto& q = cfg.quadrature;
    if (const auto s = flag("subtract_baseline"))
        q.subtract_baseline = *s;
    if (const auto v = positive("rel_tol"))
        q.rel_tol = *v;
    if (const auto v = positive("abs_tol"))
        q.abs_tol = *v;
    if (const auto v = positive("tail_rel_threshold"))
        q.tail_rel_threshold = *v;
    if (const auto v = positive("aliasing_rel_threshold"))
        q.aliasing_rel_threshold = *v;
    if (const auto v = count("max_panels")) {
        if (*v < 1)
            throw range_error("max_panels", "max_panels must be at least 1");
        q.max_panels = *v;
    }
    if (const auto v = count("oscillation_resolution")) {
        if (*v < 4 || *v > 1024)
            throw range_error("oscillation_resolution", "oscillation_resolution must be between 4 and 1024");
        q.oscillation_resolution = static_cast<unsigned>(*v);
    }
    return cfg;
}

/// Text that parse_config maps back to an equal RunConfig.
inline std::string render_config(const RunConfig& cfg) {
    std::string out;
    auto put = [&](std::string_view key, const std::string& value) {
        out.append(key).append(" = ").append(value).push_back('\n');
    };
    auto put_opt = [&](std::string_view key, const std::optional<double>& v) {
        if (v)
            put(key, format_double(*v));
    };
    put("model", cfg.model == Model::lorentzian ? "lorentzian" : "tabulated");
    put_opt("r0_um", cfg.r0_um);
    put_opt("rmin_um", cfg.rmin_um);
    put_opt("gamma_ns", cfg.gamma_ns);
    put_opt("period_us", cfg.period_us);
    if (cfg.model == Model::tabulated) {
        if (cfg.trajectory_csv)
            put("trajectory_csv", *cfg.trajectory_csv);
        put_opt("baseline_r0_um", cfg.baseline_r0_um);
        put("smoothing", cfg.smoothing ? "true" : "false");
        put("smoothing_window", std::to_string(cfg.smoothing_window));
    }
    put("alpha", format_double(cfg.alpha));
    const auto& q = cfg.quadrature;
    put("subtract_baseline", q.subtract_baseline ? "true" : "false");
    put("rel_tol", format_double(q.rel_tol));
    put("abs_tol", format_double(q.abs_tol));
    put("max_panels", std::to_string(q.max_panels));
    put("oscillation_resolution", std::to_string(q.oscillation_resolution));
    put("tail_rel_threshold", format_double(q.tail_rel_threshold));
    put("aliasing_rel_threshold", format_double(q.aliasing_rel_threshold));
    return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw io_error("error while reading '" + path.string() + "'");
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out)
        throw io_error("error while writing '" + path.string() + "'");
}

inline RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

/// Parses `t_s,R_m` CSV text. Rows are reported by 1-based line number.
inline std::vector<Sample> parse_trajectory_csv(std::string_view text) {
    using kind = csv_error::kind;
    std::vector<Sample> samples;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!header_seen) {
            if (line.substr(0, 3) == "\xEF\xBB\xBF")
                line.remove_prefix(3);
            if (line != "t_s,R_m")
                throw csv_error(kind::bad_header, line_no, "expected header 't_s,R_m', got '" + std::string(line) + "'");
            header_seen = true;
            continue;
        }
        if (detail::trim(line).empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            throw csv_error(kind::bad_field, line_no, "expected two comma-separated fields");
        Sample s;
        if (!detail::parse_double(detail::trim(line.substr(0, comma)), s.t) || !std::isfinite(s.t))
            throw csv_error(kind::bad_field, line_no, "time is not a finite number");
        if (!detail::parse_double(detail::trim(line.substr(comma + 1)), s.r) || !std::isfinite(s.r))
            throw csv_error(kind::bad_field, line_no, "radius is not a finite number");
        if (!(s.r > 0.0))
            throw csv_error(kind::nonpositive_radius, line_no, "radius must be positive");
        if (!samples.empty() && !(s.t > samples.back().t))
            throw csv_error(kind::nonmonotonic_time, line_no, "times must be strictly increasing");
        samples.push_back(s);
    }
    if (!header_seen)
        throw csv_error(kind::bad_header, 0, "empty trajectory file");
    if (samples.size() < TabulatedTrajectory::min_samples)
        throw csv_error(kind::too_few_rows, 0,
                        "need at least 8 data rows, got " + std::to_string(samples.size()));
    return samples;
}

inline TabulatedTrajectory load_trajectory_csv(const std::filesystem::path& path,
                                               std::optional<double> baseline_r0 = std::nullopt) {
    const auto text = read_text_file(path);
    try {
        return TabulatedTrajectory(parse_trajectory_csv(text), baseline_r0);
    } catch (const csv_error& e) {
        throw csv_error(e.error_kind(), e.row(), path.string() + ": " + std::string(e.what()));
    }
}

inline std::string trajectory_csv_text(const std::vector<Sample>& samples) {
    std::string out = "t_s,R_m\n";
    for (const auto& s : samples) out += format_double(s.t) + "," + format_double(s.r) + "\n";
    return out;
}

/// Builds the trajectory a config describes. Relative CSV paths are taken
/// relative to `base_dir`.
inline Trajectory make_trajectory(const RunConfig& cfg, const std::filesystem::path& base_dir = {}) {
    if (cfg.model == Model::lorentzian) {
        return LorentzianPulse(*cfg.r0_um * 1e-6, *cfg.rmin_um * 1e-6, *cfg.gamma_ns * 1e-9, *cfg.period_us * 1e-6);
    }
    std::filesystem::path p(*cfg.trajectory_csv);
    if (p.is_relative() && !base_dir.empty())
        p = base_dir / p;
    std::optional<double> baseline;
    if (cfg.baseline_r0_um)
        baseline = *cfg.baseline_r0_um * 1e-6;
    auto tab = load_trajectory_csv(p, baseline);
    if (cfg.smoothing)
        tab = tab.smoothed(cfg.smoothing_window);
    return tab;
}

inline PhysicalConstants make_constants(const RunConfig& cfg) {
    PhysicalConstants k;
    k.alpha = cfg.alpha;
    k.validate();
    return k;
}

namespace detail {

inline std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

}  // namespace detail

inline std::string result_json(const YieldResult& r) {
    std::string out = "{\n";
    out += "  \"photon_number\": " + detail::json_number(r.photon_number) + ",\n";
    out += "  \"radiated_energy_J\": " + detail::json_number(r.radiated_energy) + ",\n";
    out += "  \"v_max_m_s\": " + detail::json_number(r.v_max) + ",\n";
    out += "  \"beta\": " + detail::json_number(r.beta_effective) + ",\n";
    out += "  \"bound_value\": " + detail::json_number(r.bound_value) + ",\n";
    out += std::string("  \"supraluminal\": ") + (r.supraluminal ? "true" : "false") + ",\n";
    out += "  \"error_estimate\": " + detail::json_number(r.quadrature_error_estimate) + "\n";
    out += "}\n";
    return out;
}

inline void write_result_json(const YieldResult& r, const std::filesystem::path& path) {
    write_text_file(path, result_json(r));
}

inline std::string spectrum_csv(const Spectrum& s) {
    std::string out = "omega_rad_s,dN_dOmega_s\n";
    for (std::size_t i = 0; i < s.omegas.size(); ++i)
        out += format_double(s.omegas[i]) + "," + format_double(s.densities[i]) + "\n";
    return out;
}

inline void write_spectrum_csv(const Spectrum& s, const std::filesystem::path& path) { write_text_file(path, spectrum_csv(s)); }

struct SweepRow {
    double parameter = 0.0;
    double photon_number = std::nan("");
    double v_max = std::nan("");
    double bound_value = std::nan("");
    double ratio = std::nan("");
    std::string status = "ok";  // "ok" or a short failure class
};

inline std::string sweep_csv(std::string_view parameter, const std::vector<SweepRow>& rows) {
    std::string out(parameter);
    out += ",photon_number,v_max_m_s,bound_value,ratio,status\n";
    for (const auto& r : rows) {
        out += format_double(r.parameter) + "," + format_double(r.photon_number) + "," + format_double(r.v_max) + "," +
               format_double(r.bound_value) + "," + format_double(r.ratio) + "," + r.status + "\n";
    }
    return out;
}

inline void write_sweep_csv(std::string_view parameter, const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    write_text_file(path, sweep_csv(parameter, rows));
}

}  // namespace bubblerad
