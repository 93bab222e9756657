#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <thermolen/eos.hpp>
#include <thermolen/errors.hpp>
#include <thermolen/metric.hpp>
#include <thermolen/quad.hpp>
#include <thermolen/response.hpp>

namespace thermolen::cli {

using json = nlohmann::ordered_json;

/// Everything a subcommand needs, parsed from one config file.
struct LoadedConfig {
    VirialEos<double> eos{8.314, {}};
    CvModel<double> cv = CvModel<double>::constant(1.5 * 8.314);
    QuadratureConfig<double> quad{};
    MetricTolerances<double> metric_tol{};
};

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

inline double get_number(const json& j, const char* key, const char* where) {
    const auto& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(std::string(key) + " in " + where + " must be a number");
    return v.get<double>();
}

inline std::vector<double> get_number_array(const json& j, const char* key,
                                            const char* where) {
    const auto& v = j.at(key);
    if (!v.is_array())
        throw ConfigError(std::string(key) + " in " + where + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number())
            throw ConfigError(std::string(key) + " in " + where +
                              " must contain numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace detail

inline CvModel<double> parse_cv_model(const json& j, double gas_constant) {
    if (!j.is_object()) throw ConfigError("cv_model must be an object");
    detail::check_keys(j, {"kind", "parameters"}, "cv_model");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ConfigError("cv_model needs a string \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.contains("parameters") ? j.at("parameters") : json::object();
    if (!params.is_object()) throw ConfigError("cv_model.parameters must be an object");
    if (kind == "constant") {
        detail::check_keys(params, {"value"}, "cv_model.parameters");
        const double value = params.contains("value")
                                 ? detail::get_number(params, "value", "cv_model.parameters")
                                 : 1.5 * gas_constant;
        return CvModel<double>::constant(value);
    }
    if (kind == "linear_in_T") {
        detail::check_keys(params, {"offset", "slope"}, "cv_model.parameters");
        if (!params.contains("offset") || !params.contains("slope"))
            throw ConfigError("cv_model kind linear_in_T needs offset and slope");
        return CvModel<double>::linear_in_T(
            detail::get_number(params, "offset", "cv_model.parameters"),
            detail::get_number(params, "slope", "cv_model.parameters"));
    }
    throw ConfigError("cv_model.kind must be \"constant\" or \"linear_in_T\"");
}

inline LoadedConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    detail::check_keys(j,
                       {"gas_constant", "model", "coefficients", "excluded_volume",
                        "cv_model", "coeff_dT", "coeff_d2T", "tolerances"},
                       "config");
    if (!j.contains("model") || !j.at("model").is_string())
        throw ConfigError("config needs a string \"model\" (\"virial\" or \"quasi_ideal\")");
    const std::string model = j.at("model").get<std::string>();
    const double R =
        j.contains("gas_constant") ? detail::get_number(j, "gas_constant", "config") : 8.314;

    LoadedConfig out;
    if (model == "quasi_ideal") {
        for (const char* k : {"coefficients", "coeff_dT", "coeff_d2T"})
            if (j.contains(k))
                throw ConfigError(std::string("the excluded-volume model takes no \"") + k +
                                  "\"");
        if (!j.contains("excluded_volume"))
            throw ConfigError("model quasi_ideal needs excluded_volume");
        out.eos = VirialEos<double>::quasi_ideal(
            R, detail::get_number(j, "excluded_volume", "config"));
    } else if (model == "virial") {
        if (j.contains("excluded_volume"))
            throw ConfigError("excluded_volume applies to model quasi_ideal only");
        std::vector<double> coeffs;
        if (j.contains("coefficients"))
            coeffs = detail::get_number_array(j, "coefficients", "config");
        out.eos = VirialEos<double>(R, coeffs);
        if (j.contains("coeff_d2T") && !j.contains("coeff_dT"))
            throw ConfigError("coeff_d2T requires coeff_dT");
        if (j.contains("coeff_dT")) {
            const auto d1 = detail::get_number_array(j, "coeff_dT", "config");
            if (j.contains("coeff_d2T"))
                out.eos = out.eos.with_coefficient_derivatives(
                    d1, detail::get_number_array(j, "coeff_d2T", "config"));
            else
                out.eos = out.eos.with_coefficient_derivatives(d1);
        }
    } else {
        throw ConfigError("model must be \"virial\" or \"quasi_ideal\"");
    }

    out.cv = j.contains("cv_model") ? parse_cv_model(j.at("cv_model"), R)
                                    : CvModel<double>::constant(1.5 * R);

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("tolerances must be an object");
        detail::check_keys(
            t, {"rel_tol", "abs_tol", "max_depth", "degeneracy", "null", "diagonal"},
            "tolerances");
        if (t.contains("rel_tol"))
            out.quad.rel_tol = detail::get_number(t, "rel_tol", "tolerances");
        if (t.contains("abs_tol"))
            out.quad.abs_tol = detail::get_number(t, "abs_tol", "tolerances");
        if (t.contains("max_depth")) {
            if (!t.at("max_depth").is_number_integer())
                throw ConfigError("tolerances.max_depth must be an integer");
            out.quad.max_depth = t.at("max_depth").get<int>();
        }
        if (t.contains("degeneracy"))
            out.metric_tol.degeneracy = detail::get_number(t, "degeneracy", "tolerances");
        if (t.contains("null"))
            out.metric_tol.null = detail::get_number(t, "null", "tolerances");
        if (t.contains("diagonal"))
            out.metric_tol.diagonal = detail::get_number(t, "diagonal", "tolerances");
    }
    return out;
}

inline LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse failure in " + path + ": " + e.what());
    }
    return parse_config(j);
}

/// Verification grid: temperatures crossed with ascending volume intervals.
struct VerifyGrid {
    std::vector<double> Ts{100.0, 300.0, 1000.0};
    std::vector<std::pair<double, double>> intervals{
        {0.012, 0.018}, {0.012, 0.024}, {0.012, 0.12}};
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_number(const std::string& s, const char* where) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("");
        return x;
    } catch (...) {
        throw ConfigError("bad number \"" + s + "\" in " + where);
    }
}

} // namespace detail

/// Grid override syntax: "T=100,300;v=0.012:0.018,0.012:0.12".
inline VerifyGrid parse_grid(const std::string& spec) {
    VerifyGrid g;
    g.Ts.clear();
    g.intervals.clear();
    for (const std::string& part : detail::split(spec, ';')) {
        if (part.rfind("T=", 0) == 0) {
            for (const std::string& t : detail::split(part.substr(2), ','))
                g.Ts.push_back(detail::parse_number(t, "--grid temperatures"));
        } else if (part.rfind("v=", 0) == 0) {
            for (const std::string& iv : detail::split(part.substr(2), ',')) {
                const auto ends = detail::split(iv, ':');
                if (ends.size() != 2)
                    throw ConfigError("--grid intervals must look like v1:v2");
                g.intervals.emplace_back(detail::parse_number(ends[0], "--grid intervals"),
                                         detail::parse_number(ends[1], "--grid intervals"));
            }
        } else {
            throw ConfigError("--grid parts must start with T= or v=; got \"" + part + "\"");
        }
    }
    if (g.Ts.empty() || g.intervals.empty())
        throw ConfigError("--grid needs both a T= list and a v= interval list");
    return g;
}

} // namespace thermolen::cli
