/// @file config.cpp
/// @brief Strict JSON config parsing with line-anchored rejection.

#include "hrns/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hrns {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t pos) {
    int line = 1;
    for (std::size_t k = 0; k < pos && k < text.size(); ++k)
        if (text[k] == '\n') ++line;
    return line;
}

int line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

json parse_object(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what(),
                          line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!obj.is_object()) throw ConfigError("config root must be a JSON object", 1);
    return obj;
}

void reject_unknown_keys(const std::string& text, const json& obj,
                         const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "'", line_of_key(text, item.key()));
}

double require_number(const std::string& text, const json& obj, const std::string& key,
                      double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("missing required key '" + key + "'", 1);
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError("key '" + key + "' must be a number", line_of_key(text, key));
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError("key '" + key + "' must be finite", line_of_key(text, key));
    return x;
}

long long require_integer(const std::string& text, const json& obj, const std::string& key,
                          long long fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("missing required key '" + key + "'", 1);
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError("key '" + key + "' must be an integer", line_of_key(text, key));
    return v.get<long long>();
}

std::string require_string(const std::string& text, const json& obj, const std::string& key,
                           const std::string& fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("missing required key '" + key + "'", 1);
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_string())
        throw ConfigError("key '" + key + "' must be a string", line_of_key(text, key));
    return v.get<std::string>();
}

bool require_bool(const std::string& text, const json& obj, const std::string& key,
                  bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        throw ConfigError("key '" + key + "' must be true or false", line_of_key(text, key));
    return v.get<bool>();
}

std::vector<double> require_number_array(const std::string& text, const json& obj,
                                         const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("missing required key '" + key + "'", 1);
    const json& v = obj.at(key);
    if (!v.is_array())
        throw ConfigError("key '" + key + "' must be an array of numbers", line_of_key(text, key));
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number() || !std::isfinite(x.get<double>()))
            throw ConfigError("key '" + key + "' must contain finite numbers",
                              line_of_key(text, key));
        out.push_back(x.get<double>());
    }
    return out;
}

DataSpec parse_data_spec(const std::string& text, const json& obj, const std::string& key,
                         const std::set<std::string>& kinds, bool allow_negative_amplitude) {
    DataSpec spec;
    if (!obj.contains(key)) return spec;
    const json& v = obj.at(key);
    if (!v.is_object())
        throw ConfigError("key '" + key + "' must be an object {kind, amplitude}",
                          line_of_key(text, key));
    reject_unknown_keys(text, v, {"kind", "amplitude"});
    spec.kind = require_string(text, v, "kind", "zero");
    if (!kinds.count(spec.kind))
        throw ConfigError("'" + key + ".kind' must be one of the supported generators, got '" +
                              spec.kind + "'",
                          line_of_key(text, "kind"));
    spec.amplitude = require_number(text, v, "amplitude", 0.0);
    if (!allow_negative_amplitude && spec.amplitude < 0.0)
        throw ConfigError("'" + key + ".amplitude' must be nonnegative",
                          line_of_key(text, "amplitude"));
    return spec;
}

std::uint64_t read_seed(const std::string& text, const json& obj,
                        std::optional<std::uint64_t> seed_override) {
    if (seed_override) return *seed_override;
    if (!obj.contains("seed")) return 1;
    const json& v = obj.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ConfigError("key 'seed' must be a nonnegative integer", line_of_key(text, "seed"));
    if (v.is_number_integer() && v.get<long long>() < 0)
        throw ConfigError("key 'seed' must be a nonnegative integer", line_of_key(text, "seed"));
    return v.get<std::uint64_t>();
}

void stamp_from(const json& obj, std::optional<std::uint64_t> seed_override, ConfigStamp* stamp) {
    if (!stamp) return;
    json canon = obj;
    if (seed_override) canon["seed"] = *seed_override;
    stamp->canonical = canon.dump();
    stamp->hash = fnv1a64(stamp->canonical);
}

const std::set<std::string> k2dKinds = {"zero", "vortex", "eigenmode", "random_smooth", "bump"};
const std::set<std::string> kBurgersKinds = {"zero", "blowup", "bump"};

} // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[std::size_t(k)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig parse_run_config(const std::string& text, std::optional<std::uint64_t> seed_override,
                           ConfigStamp* stamp) {
    const json obj = parse_object(text);
    reject_unknown_keys(text, obj,
                        {"model", "n", "eps", "alpha_pen", "horizon", "dt_rule", "seed", "initial",
                         "forcing", "sample_stride", "u0prime_kind", "u0prime_amplitude",
                         "linearized", "store_fields", "window_pad", "cone_radius", "cone_speed"});

    RunConfig cfg;
    cfg.model = require_string(text, obj, "model", "", true);
    const bool burgers = cfg.model == "burgers";
    if (cfg.model != "hyperbolic" && cfg.model != "limit" && cfg.model != "jeffrey" &&
        cfg.model != "penalized" && !burgers)
        throw ConfigError("key 'model' must be one of hyperbolic, limit, jeffrey, penalized, "
                          "burgers",
                          line_of_key(text, "model"));

    cfg.n = int(require_integer(text, obj, "n", 0, true));
    if (cfg.n < 8) throw ConfigError("key 'n' must be >= 8", line_of_key(text, "n"));
    if (!burgers && cfg.n % 2 != 0)
        throw ConfigError("key 'n' must be even for 2D models", line_of_key(text, "n"));

    cfg.eps = require_number(text, obj, "eps", 1.0, cfg.model != "limit");
    if (cfg.model != "limit" && !(cfg.eps > 0.0))
        throw ConfigError("key 'eps' must be positive", line_of_key(text, "eps"));

    if (obj.contains("alpha_pen")) {
        if (cfg.model != "penalized")
            throw ConfigError("key 'alpha_pen' is only valid for the penalized model",
                              line_of_key(text, "alpha_pen"));
        const double a = require_number(text, obj, "alpha_pen", 0.0);
        if (!(a > 0.0))
            throw ConfigError("key 'alpha_pen' must be positive", line_of_key(text, "alpha_pen"));
        cfg.alpha_pen = a;
    } else if (cfg.model == "penalized") {
        throw ConfigError("missing required key 'alpha_pen' (penalized model)", 1);
    }

    cfg.horizon = require_number(text, obj, "horizon", 0.0, true);
    if (!(cfg.horizon >= 0.0))
        throw ConfigError("key 'horizon' must be nonnegative", line_of_key(text, "horizon"));

    cfg.dt_rule = require_string(text, obj, "dt_rule", "cfl:0.4");
    try {
        parse_dt_rule(cfg.dt_rule);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), line_of_key(text, "dt_rule"));
    }

    cfg.seed = read_seed(text, obj, seed_override);
    cfg.initial =
        parse_data_spec(text, obj, "initial", burgers ? kBurgersKinds : k2dKinds, burgers);
    cfg.forcing = parse_data_spec(text, obj, "forcing", burgers ? kBurgersKinds : k2dKinds, false);
    if (burgers && cfg.forcing.kind != "zero")
        throw ConfigError("burgers runs take no forcing (forcing.kind must be 'zero')",
                          line_of_key(text, "forcing"));

    cfg.sample_stride = int(require_integer(text, obj, "sample_stride", 8));
    if (cfg.sample_stride < 1)
        throw ConfigError("key 'sample_stride' must be >= 1", line_of_key(text, "sample_stride"));

    cfg.u0prime_kind = require_string(text, obj, "u0prime_kind", "well_prepared");
    if (cfg.u0prime_kind != "well_prepared" && cfg.u0prime_kind != "zero" &&
        cfg.u0prime_kind != "perturbed")
        throw ConfigError("key 'u0prime_kind' must be well_prepared, zero or perturbed",
                          line_of_key(text, "u0prime_kind"));
    cfg.u0prime_amplitude = require_number(text, obj, "u0prime_amplitude", 0.0);
    cfg.linearized = require_bool(text, obj, "linearized", false);
    cfg.store_fields = require_bool(text, obj, "store_fields", false);

    cfg.window_pad = require_number(text, obj, "window_pad", 8.0);
    if (!(cfg.window_pad > 0.0))
        throw ConfigError("key 'window_pad' must be positive", line_of_key(text, "window_pad"));
    cfg.cone_radius = require_number(text, obj, "cone_radius", 0.0);
    cfg.cone_speed = require_number(text, obj, "cone_speed", 0.0);
    if (cfg.cone_radius < 0.0 || cfg.cone_speed < 0.0)
        throw ConfigError("cone parameters must be nonnegative",
                          line_of_key(text, cfg.cone_radius < 0.0 ? "cone_radius" : "cone_speed"));

    stamp_from(obj, seed_override, stamp);
    return cfg;
}

LimitStudyConfig parse_limit_study_config(const std::string& text,
                                          std::optional<std::uint64_t> seed_override,
                                          ConfigStamp* stamp) {
    const json obj = parse_object(text);
    reject_unknown_keys(text, obj,
                        {"model", "n", "eps_list", "t_star", "dt", "seed", "initial", "forcing",
                         "u0prime_kind", "u0prime_amplitude"});

    const std::string model = require_string(text, obj, "model", "hyperbolic");
    if (model != "hyperbolic")
        throw ConfigError("limit studies run the hyperbolic model ('model' must be omitted or "
                          "'hyperbolic')",
                          line_of_key(text, "model"));

    LimitStudyConfig cfg;
    cfg.n = int(require_integer(text, obj, "n", cfg.n));
    if (cfg.n < 8 || cfg.n % 2 != 0)
        throw ConfigError("key 'n' must be an even integer >= 8", line_of_key(text, "n"));

    if (obj.contains("eps_list")) {
        cfg.eps_list = require_number_array(text, obj, "eps_list");
        if (cfg.eps_list.size() < 3)
            throw ConfigError("need >= 3 eps values", line_of_key(text, "eps_list"));
        for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
            if (!(cfg.eps_list[k] > 0.0))
                throw ConfigError("eps values must be positive", line_of_key(text, "eps_list"));
            if (k > 0 && !(cfg.eps_list[k] < cfg.eps_list[k - 1]))
                throw ConfigError("eps_list must be strictly decreasing",
                                  line_of_key(text, "eps_list"));
        }
    }
    cfg.t_star = require_number(text, obj, "t_star", cfg.t_star);
    if (!(cfg.t_star > 0.0))
        throw ConfigError("key 't_star' must be positive", line_of_key(text, "t_star"));
    cfg.dt = require_number(text, obj, "dt", cfg.dt);
    if (!(cfg.dt > 0.0)) throw ConfigError("key 'dt' must be positive", line_of_key(text, "dt"));
    cfg.seed = read_seed(text, obj, seed_override);
    if (obj.contains("initial")) cfg.initial = parse_data_spec(text, obj, "initial", k2dKinds, false);
    if (obj.contains("forcing")) cfg.forcing = parse_data_spec(text, obj, "forcing", k2dKinds, false);
    cfg.u0prime_kind = require_string(text, obj, "u0prime_kind", cfg.u0prime_kind);
    if (cfg.u0prime_kind != "well_prepared" && cfg.u0prime_kind != "zero" &&
        cfg.u0prime_kind != "perturbed")
        throw ConfigError("key 'u0prime_kind' must be well_prepared, zero or perturbed",
                          line_of_key(text, "u0prime_kind"));
    cfg.u0prime_amplitude = require_number(text, obj, "u0prime_amplitude", cfg.u0prime_amplitude);

    stamp_from(obj, seed_override, stamp);
    return cfg;
}

StabilityConfig parse_stability_config(const std::string& text,
                                       std::optional<std::uint64_t> seed_override,
                                       ConfigStamp* stamp) {
    const json obj = parse_object(text);
    reject_unknown_keys(text, obj,
                        {"model", "n", "eps_list", "amplitude_list", "horizon", "dt_rule", "seed",
                         "initial", "forcing", "sample_stride"});

    StabilityConfig cfg;
    cfg.model = require_string(text, obj, "model", "hyperbolic");
    if (cfg.model != "hyperbolic" && cfg.model != "burgers")
        throw ConfigError("stability maps support models hyperbolic and burgers",
                          line_of_key(text, "model"));
    cfg.n = int(require_integer(text, obj, "n", cfg.n));
    if (cfg.n < 8) throw ConfigError("key 'n' must be >= 8", line_of_key(text, "n"));
    if (cfg.model == "hyperbolic" && cfg.n % 2 != 0)
        throw ConfigError("key 'n' must be even for 2D models", line_of_key(text, "n"));

    cfg.eps_list = require_number_array(text, obj, "eps_list");
    cfg.amplitude_list = require_number_array(text, obj, "amplitude_list");
    if (cfg.eps_list.empty() || cfg.amplitude_list.empty())
        throw ConfigError("stability grid must be nonempty",
                          line_of_key(text, cfg.eps_list.empty() ? "eps_list" : "amplitude_list"));
    for (double e : cfg.eps_list)
        if (!(e > 0.0))
            throw ConfigError("eps values must be positive", line_of_key(text, "eps_list"));

    cfg.horizon = require_number(text, obj, "horizon", cfg.horizon);
    if (!(cfg.horizon > 0.0))
        throw ConfigError("key 'horizon' must be positive", line_of_key(text, "horizon"));
    cfg.dt_rule = require_string(text, obj, "dt_rule", cfg.dt_rule);
    try {
        parse_dt_rule(cfg.dt_rule);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), line_of_key(text, "dt_rule"));
    }
    cfg.seed = read_seed(text, obj, seed_override);

    if (obj.contains("initial")) {
        const json& v = obj.at("initial");
        if (!v.is_object())
            throw ConfigError("key 'initial' must be an object {kind}", line_of_key(text, "initial"));
        reject_unknown_keys(text, v, {"kind"});
        cfg.initial_kind = require_string(text, v, "kind", cfg.initial_kind);
        const auto& kinds = cfg.model == "burgers" ? kBurgersKinds : k2dKinds;
        if (!kinds.count(cfg.initial_kind))
            throw ConfigError("'initial.kind' must be one of the supported generators, got '" +
                                  cfg.initial_kind + "'",
                              line_of_key(text, "kind"));
    } else if (cfg.model == "burgers") {
        cfg.initial_kind = "blowup";
    }
    if (obj.contains("forcing"))
        cfg.forcing = parse_data_spec(text, obj, "forcing", k2dKinds, false);
    cfg.sample_stride = int(require_integer(text, obj, "sample_stride", cfg.sample_stride));
    if (cfg.sample_stride < 1)
        throw ConfigError("key 'sample_stride' must be >= 1", line_of_key(text, "sample_stride"));

    stamp_from(obj, seed_override, stamp);
    return cfg;
}

} // namespace hrns
