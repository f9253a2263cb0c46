#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridq/model.hpp"
#include "hybridq/sim.hpp"
#include "hybridq/sweep.hpp"

namespace hybridq {

class ScenarioParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// `key = value` lines; '#' starts a comment; duplicate keys rejected.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioParseError("line " + std::to_string(lineno) +
                                     ": expected `key = value`, got `" + line + "`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ScenarioParseError("line " + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw ScenarioParseError("line " + std::to_string(lineno) + ": duplicate key `" +
                                     key + "`");
    }
    return kv;
}

inline double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioParseError("key `" + key + "`: not a number: `" + value + "`");
    }
}

inline long long to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioParseError("key `" + key + "`: not an integer: `" + value + "`");
    }
}

inline std::uint64_t to_seed(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioParseError("key `" + key + "`: not a seed: `" + value + "`");
    }
}

inline std::vector<double> to_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ScenarioParseError("key `" + key + "`: empty list");
    return out;
}

class KeyValueReader {
public:
    explicit KeyValueReader(std::istream& in) : kv_(parse_key_values(in)) {}

    std::optional<std::string> get(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        seen_.insert(key);
        return it->second;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : kv_)
            if (!seen_.count(key)) throw ScenarioParseError("unknown key `" + key + "`");
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> seen_;
};

inline void apply_run_keys(KeyValueReader& reader, RunConfig& run) {
    if (auto v = reader.get("requests")) run.num_requests = to_int("requests", *v);
    if (auto v = reader.get("warmup"))
        run.warmup_requests = to_int("warmup", *v);
    else
        run.warmup_requests = run.num_requests / 10;
    if (auto v = reader.get("replications"))
        run.replications = static_cast<int>(to_int("replications", *v));
    if (auto v = reader.get("seed")) run.master_seed = to_seed("seed", *v);
}

}  // namespace detail

struct Scenario {
    SystemParams params;
    RunConfig run;
    std::optional<double> alpha;
};

// Flat key-value scenario: the five system parameters, optional run keys
// (requests, warmup, replications, seed) and optional alpha. Unknown keys are
// an error; missing run keys take the sim defaults.
inline Scenario load_scenario(std::istream& in) {
    detail::KeyValueReader reader(in);
    auto require = [&](const char* key) {
        auto v = reader.get(key);
        if (!v) throw ScenarioParseError(std::string("missing required key `") + key + "`");
        return *v;
    };
    const double lambda = detail::to_double("lambda", require("lambda"));
    const double mu = detail::to_double("mu", require("mu"));
    const double b1 = detail::to_double("b1", require("b1"));
    const double b2 = detail::to_double("b2", require("b2"));
    const int n = static_cast<int>(detail::to_int("n", require("n")));

    Scenario sc{validate_params(lambda, mu, b1, b2, n), RunConfig{}, std::nullopt};
    detail::apply_run_keys(reader, sc.run);
    if (auto v = reader.get("alpha")) sc.alpha = detail::to_double("alpha", *v);
    reader.reject_unknown();
    validate_run_config(sc.run);
    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError("cannot open scenario file: " + path);
    return load_scenario(in);
}

struct SweepFileSpec {
    SweepMetric metric = SweepMetric::ApproxPenaltyPercent;
    BaseScenario base;
    std::vector<SweepParam> varied;  // sweeps to run; defaults to all four
    std::map<SweepParam, std::vector<double>> grids;
    std::vector<int> n_values;
    RunConfig run;
};

// Sweep spec file: metric, optional base overrides (lambda/mu/b1/b2), run
// keys, optional grids (lambda_values, ..., n_values) and `varied` listing
// which sweeps to run.
inline SweepFileSpec load_sweep_spec(std::istream& in) {
    detail::KeyValueReader reader(in);
    SweepFileSpec spec;
    if (auto v = reader.get("metric")) {
        if (*v == "penalty")
            spec.metric = SweepMetric::ApproxPenaltyPercent;
        else if (*v == "ratio")
            spec.metric = SweepMetric::AggOverNonAggRatio;
        else
            throw ScenarioParseError("key `metric`: expected `penalty` or `ratio`, got `" + *v +
                                     "`");
    }
    if (auto v = reader.get("lambda")) spec.base.lambda = detail::to_double("lambda", *v);
    if (auto v = reader.get("mu")) spec.base.mu = detail::to_double("mu", *v);
    if (auto v = reader.get("b1")) spec.base.b1 = detail::to_double("b1", *v);
    if (auto v = reader.get("b2")) spec.base.b2 = detail::to_double("b2", *v);
    detail::apply_run_keys(reader, spec.run);

    auto param_of = [](const std::string& name) {
        if (name == "lambda") return SweepParam::Lambda;
        if (name == "mu") return SweepParam::Mu;
        if (name == "b1") return SweepParam::B1;
        if (name == "b2") return SweepParam::B2;
        throw ScenarioParseError("unknown sweep parameter `" + name + "`");
    };
    if (auto v = reader.get("varied")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) spec.varied.push_back(param_of(detail::trim(item)));
    } else {
        spec.varied = {SweepParam::Lambda, SweepParam::Mu, SweepParam::B1, SweepParam::B2};
    }
    for (SweepParam p : {SweepParam::Lambda, SweepParam::Mu, SweepParam::B1, SweepParam::B2}) {
        if (auto v = reader.get(std::string(param_name(p)) + "_values"))
            spec.grids[p] = detail::to_double_list(param_name(p), *v);
    }
    if (auto v = reader.get("n_values")) {
        for (double x : detail::to_double_list("n_values", *v))
            spec.n_values.push_back(static_cast<int>(x));
    }
    reader.reject_unknown();
    validate_run_config(spec.run);
    return spec;
}

inline SweepFileSpec load_sweep_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError("cannot open sweep spec file: " + path);
    return load_sweep_spec(in);
}

}  // namespace hybridq
