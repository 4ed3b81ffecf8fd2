#include "vsim/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace vsim::io {

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    return doc;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

/// alpha_i(t) as a polynomial with ascending coefficients.
BoundaryFn make_poly(std::vector<double> coeffs) {
    return [c = std::move(coeffs)](double t) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i > 0; --i) acc = acc * t + c[i - 1];
        return acc;
    };
}

/// Bilinear interpolation over a rectangular (t, tau) table, clamped at the
/// edges.
struct BilinearTable {
    std::vector<double> t_axis;
    std::vector<double> tau_axis;
    std::vector<std::vector<double>> values; // values[it][itau]

    double operator()(double t, double tau) const {
        const auto locate = [](const std::vector<double>& axis, double v) {
            if (v <= axis.front()) return std::pair<std::size_t, double>{0, 0.0};
            if (v >= axis.back()) return std::pair<std::size_t, double>{axis.size() - 2, 1.0};
            const auto it = std::upper_bound(axis.begin(), axis.end(), v);
            const std::size_t i = static_cast<std::size_t>(it - axis.begin()) - 1;
            return std::pair<std::size_t, double>{i, (v - axis[i]) / (axis[i + 1] - axis[i])};
        };
        const auto [i, u] = locate(t_axis, t);
        const auto [j, w] = locate(tau_axis, tau);
        return (1 - u) * ((1 - w) * values[i][j] + w * values[i][j + 1]) +
               u * ((1 - w) * values[i + 1][j] + w * values[i + 1][j + 1]);
    }
};

FactorFn parse_factor(const json& spec, const std::string& where) {
    reject_unknown_keys(spec, {"const", "table"}, where);
    if (spec.contains("const")) {
        const double v = spec.at("const").get<double>();
        return [v](double, double) { return v; };
    }
    if (spec.contains("table")) {
        const json& t = spec.at("table");
        reject_unknown_keys(t, {"t", "tau", "values"}, where + ".table");
        BilinearTable table;
        table.t_axis = t.at("t").get<std::vector<double>>();
        table.tau_axis = t.at("tau").get<std::vector<double>>();
        table.values = t.at("values").get<std::vector<std::vector<double>>>();
        if (table.t_axis.size() < 2 || table.tau_axis.size() < 2) {
            throw ConfigError(where + ": table axes need at least 2 points");
        }
        if (table.values.size() != table.t_axis.size()) {
            throw ConfigError(where + ": table has " + std::to_string(table.values.size()) +
                              " rows, expected " + std::to_string(table.t_axis.size()));
        }
        for (const auto& row : table.values) {
            if (row.size() != table.tau_axis.size()) {
                throw ConfigError(where + ": ragged table row");
            }
        }
        return [tab = std::move(table)](double t_, double tau_) { return tab(t_, tau_); };
    }
    throw ConfigError(where + ": factor needs 'const' or 'table'");
}

} // namespace

MicrogridConfig load_microgrid_config(const std::string& path) {
    const json doc = load_json_file(path);
    reject_unknown_keys(doc,
                        {"pv_rating_kw", "inverter_solar_kw", "inverter_batt_kw", "diesel_units",
                         "diesel_unit_kw", "battery", "diesel_on_soc_frac", "diesel_off_soc_frac",
                         "model", "volterra_window", "alpha"},
                        path);

    MicrogridConfig cfg;
    cfg.pv_rating_kw = doc.value("pv_rating_kw", cfg.pv_rating_kw);
    cfg.inverter_solar_kw = doc.value("inverter_solar_kw", cfg.inverter_solar_kw);
    cfg.inverter_batt_kw = doc.value("inverter_batt_kw", cfg.inverter_batt_kw);
    cfg.diesel_units = doc.value("diesel_units", cfg.diesel_units);
    cfg.diesel_unit_kw = doc.value("diesel_unit_kw", cfg.diesel_unit_kw);
    cfg.diesel_on_soc_frac = doc.value("diesel_on_soc_frac", cfg.diesel_on_soc_frac);
    cfg.diesel_off_soc_frac = doc.value("diesel_off_soc_frac", cfg.diesel_off_soc_frac);
    cfg.volterra_window = doc.value("volterra_window", cfg.volterra_window);
    cfg.alpha = doc.value("alpha", cfg.alpha);

    if (doc.contains("model")) {
        const std::string m = doc.at("model").get<std::string>();
        if (m == "linear") {
            cfg.model_kind = ModelKind::linear;
        } else if (m == "volterra") {
            cfg.model_kind = ModelKind::volterra;
        } else {
            throw ConfigError(path + ": model must be 'linear' or 'volterra', got '" + m + "'");
        }
    }

    if (doc.contains("battery")) {
        const json& b = doc.at("battery");
        reject_unknown_keys(b,
                            {"capacity_kwh", "soc_min_frac", "soc_max_frac", "v_max_kw", "eta",
                             "r_bs", "rated_cycles", "initial_soc_frac"},
                            path + ".battery");
        auto& bat = cfg.battery;
        bat.capacity_kwh = b.value("capacity_kwh", bat.capacity_kwh);
        bat.soc_min_frac = b.value("soc_min_frac", bat.soc_min_frac);
        bat.soc_max_frac = b.value("soc_max_frac", bat.soc_max_frac);
        bat.v_max_kw = b.value("v_max_kw", bat.v_max_kw);
        bat.eta = b.value("eta", bat.eta);
        if (b.contains("r_bs")) bat.r_bs = b.at("r_bs").get<double>();
        if (b.contains("rated_cycles")) bat.rated_cycles = b.at("rated_cycles").get<double>();
        bat.initial_soc_frac = b.value("initial_soc_frac", bat.initial_soc_frac);
    }

    cfg.validate();
    return cfg;
}

PiecewiseKernel parse_kernel_spec(const std::string& spec) {
    constexpr std::string_view prefix = "const:";
    if (spec.rfind(prefix, 0) == 0) {
        const std::string value = spec.substr(prefix.size());
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            return PiecewiseKernel::constant(v);
        } catch (const std::exception&) {
            throw ConfigError("invalid constant kernel '" + spec + "'");
        }
    }

    const json doc = load_json_file(spec);
    reject_unknown_keys(doc, {"segments"}, spec);
    if (!doc.contains("segments") || !doc.at("segments").is_array() ||
        doc.at("segments").empty()) {
        throw ConfigError(spec + ": kernel file needs a nonempty 'segments' array");
    }

    std::vector<KernelSegment> segments;
    BoundaryFn prev_upper = [](double) { return 0.0; };
    const auto& arr = doc.at("segments");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& s = arr[i];
        const std::string where = spec + ".segments[" + std::to_string(i) + "]";
        reject_unknown_keys(s, {"upper_boundary_poly", "factor", "lipschitz_q"}, where);

        KernelSegment seg;
        seg.lower = prev_upper;
        const bool last = i + 1 == arr.size();
        if (s.contains("upper_boundary_poly")) {
            if (last) {
                throw ConfigError(where + ": the last segment's upper boundary is always t");
            }
            auto coeffs = s.at("upper_boundary_poly").get<std::vector<double>>();
            if (!coeffs.empty() && coeffs.front() != 0.0) {
                throw ConfigError(where + ": boundary polynomial must vanish at t = 0");
            }
            seg.upper = make_poly(std::move(coeffs));
        } else if (last) {
            seg.upper = [](double t) { return t; };
        } else {
            throw ConfigError(where + ": interior segments need 'upper_boundary_poly'");
        }
        prev_upper = seg.upper;

        if (!s.contains("factor")) throw ConfigError(where + ": missing 'factor'");
        seg.factor = parse_factor(s.at("factor"), where + ".factor");
        seg.lipschitz_q = s.value("lipschitz_q", 1.0);
        segments.push_back(std::move(seg));
    }
    return PiecewiseKernel(std::move(segments));
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open");
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

} // namespace vsim::io
