#include "qherm/config.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace qherm {

const char* command_name(Command c) {
    switch (c) {
        case Command::spectrum: return "spectrum";
        case Command::metric: return "metric";
        case Command::scan: return "scan";
        case Command::boundary: return "boundary";
        case Command::secular: return "secular";
        case Command::critical_beta: return "critical-beta";
    }
    return "unknown";
}

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

class KeyTable {
  public:
    void insert(const std::string& key, KeyValue kv) {
        if (entries_.count(key)) {
            throw ConfigError(kv.line, "duplicate key '" + key + "'");
        }
        entries_[key] = std::move(kv);
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::optional<std::string> get(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    double get_number(const std::string& key) {
        KeyValue& kv = locate(key);
        return parse_number(kv.value, kv.line, key);
    }

    std::optional<double> get_optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return get_number(key);
    }

    int get_int(const std::string& key) {
        KeyValue& kv = locate(key);
        const double v = parse_number(kv.value, kv.line, key);
        if (v != std::floor(v)) {
            throw ConfigError(kv.line, "key '" + key + "' must be an integer");
        }
        return static_cast<int>(v);
    }

    std::vector<double> get_list(const std::string& key) {
        KeyValue& kv = locate(key);
        std::vector<double> values;
        std::stringstream stream(kv.value);
        std::string item;
        while (std::getline(stream, item, ',')) {
            values.push_back(parse_number(trim(item), kv.line, key));
        }
        if (values.empty()) {
            throw ConfigError(kv.line, "key '" + key + "' is empty");
        }
        return values;
    }

    AxisRange get_range(const std::string& key) {
        const int line = locate(key).line;
        const auto values = get_list(key);
        if (values.size() != 2) {
            throw ConfigError(line, "key '" + key + "' must be 'lo,hi'");
        }
        return AxisRange{values[0], values[1]};
    }

    void require(const std::vector<std::string>& keys) const {
        std::string missing;
        for (const auto& key : keys) {
            if (!entries_.count(key)) {
                if (!missing.empty()) missing += ", ";
                missing += key;
            }
        }
        if (!missing.empty()) {
            throw ConfigError(0, "missing required keys: " + missing);
        }
    }

    void reject_unused() const {
        for (const auto& [key, kv] : entries_) {
            if (!kv.used) {
                throw ConfigError(kv.line, "unknown key '" + key + "'");
            }
        }
    }

  private:
    KeyValue& locate(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw ConfigError(0, "missing required keys: " + key);
        }
        it->second.used = true;
        return it->second;
    }

    static double parse_number(const std::string& text, int line,
                               const std::string& key) {
        try {
            size_t consumed = 0;
            const double v = std::stod(text, &consumed);
            if (consumed != text.size()) {
                throw std::invalid_argument("trailing characters");
            }
            return v;
        } catch (const std::exception&) {
            throw ConfigError(line, "malformed number '" + text +
                                        "' for key '" + key + "'");
        }
    }

    std::map<std::string, KeyValue> entries_;
};

ModelSpec parse_model(KeyTable& keys) {
    keys.require({"family"});
    const std::string name = *keys.get("family");
    const auto family = family_from_name(name);
    if (!family) {
        throw ConfigError(0, "unknown family '" + name + "'");
    }
    switch (*family) {
        case Family::two_level:
            keys.require({"lambda"});
            return ModelSpec{TwoLevelParams::make(keys.get_number("lambda"))};
        case Family::three_level:
            keys.require({"z", "g"});
            return ModelSpec{ThreeLevelParams::make(keys.get_number("z"),
                                                    keys.get_number("g"))};
        case Family::chain:
            keys.require({"n", "t", "g_list"});
            return ModelSpec{ChainParams::make(keys.get_int("n"),
                                               keys.get_number("t"),
                                               keys.get_list("g_list"))};
        case Family::nine_level:
            if (keys.has("t") || keys.has("beta_env")) {
                keys.require({"t", "beta_env"});
                return ModelSpec{NineLevelParams::family(
                    keys.get_number("t"), keys.get_number("beta_env"))};
            }
            keys.require({"b", "c", "d", "a_c"});
            return ModelSpec{NineLevelParams::raw(
                keys.get_number("b"), keys.get_number("c"),
                keys.get_number("d"), keys.get_number("a_c"))};
        case Family::robin_lattice:
            keys.require({"n", "lambda"});
            return ModelSpec{RobinLatticeParams::make(
                keys.get_int("n"), keys.get_number("lambda"),
                keys.get_optional_number("mu"))};
        case Family::second_observable:
            keys.require({"x", "y"});
            return ModelSpec{SecondObservableParams::make(
                keys.get_number("x"), keys.get_number("y"))};
    }
    throw ConfigError(0, "unreachable family");
}

void parse_metric_keys(KeyTable& keys, RunConfig& config) {
    if (auto rule = keys.get("metric_rule")) {
        if (*rule == "closed_form") {
            config.metric_rule = MetricRule::closed_form;
        } else if (*rule == "fixed_weights") {
            config.metric_rule = MetricRule::fixed_weights;
        } else {
            throw ConfigError(
                0, "metric_rule must be closed_form or fixed_weights");
        }
    }
    if (keys.has("kappa")) config.kappa = keys.get_list("kappa");
    if (keys.has("beta_m")) config.beta_m = keys.get_number("beta_m");
    if (keys.has("s")) config.s = keys.get_number("s");
    if (keys.has("a")) config.theta_a = keys.get_number("a");
    if (keys.has("f")) config.theta_f = keys.get_number("f");
    if (keys.has("m")) config.theta_m = keys.get_number("m");

    if (config.metric_rule == MetricRule::closed_form && config.model) {
        const Family family = config.model->family();
        if (family != Family::two_level && family != Family::three_level) {
            throw ConfigError(0,
                              std::string("no closed-form metric for family ") +
                                  family_name(family) +
                                  "; use metric_rule = fixed_weights");
        }
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    KeyTable keys;
    std::stringstream stream(text);
    std::string raw_line;
    int line_number = 0;
    while (std::getline(stream, raw_line)) {
        ++line_number;
        std::string line = raw_line;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line_number,
                              "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(line_number, "empty key or value");
        }
        keys.insert(key, KeyValue{value, line_number, false});
    }

    RunConfig config;
    config.beta_m = M_PI / 2.0;
    keys.require({"command"});
    const std::string command = *keys.get("command");
    if (command == "spectrum") {
        config.command = Command::spectrum;
    } else if (command == "metric") {
        config.command = Command::metric;
    } else if (command == "scan") {
        config.command = Command::scan;
    } else if (command == "boundary") {
        config.command = Command::boundary;
    } else if (command == "secular") {
        config.command = Command::secular;
    } else if (command == "critical-beta") {
        config.command = Command::critical_beta;
    } else {
        throw ConfigError(0, "unknown command '" + command + "'");
    }

    if (keys.has("resolution")) config.resolution = keys.get_int("resolution");
    if (config.resolution < 1) {
        throw ConfigError(0, "resolution must be >= 1");
    }
    if (auto path = keys.get("output_path")) config.output_path = *path;
    if (config.output_path.empty()) {
        config.output_path = std::string(command_name(config.command)) + ".csv";
    }

    switch (config.command) {
        case Command::spectrum:
            config.model = parse_model(keys);
            break;
        case Command::metric:
            config.model = parse_model(keys);
            parse_metric_keys(keys, config);
            break;
        case Command::scan: {
            config.model = parse_model(keys);
            keys.require({"axis1", "axis1_range", "axis2", "axis2_range"});
            config.axis1.param = *keys.get("axis1");
            config.axis1.range = keys.get_range("axis1_range");
            config.axis2.param = *keys.get("axis2");
            config.axis2.range = keys.get_range("axis2_range");
            config.axis1.resolution = config.resolution;
            config.axis2.resolution = config.resolution;
            parse_metric_keys(keys, config);
            break;
        }
        case Command::boundary: {
            if (auto field = keys.get("field")) {
                if (*field == "G") {
                    config.truncated = false;
                } else if (*field == "G0") {
                    config.truncated = true;
                } else {
                    throw ConfigError(0, "field must be G or G0");
                }
            }
            if (keys.has("axis1_range")) {
                config.window1 = keys.get_range("axis1_range");
            }
            if (keys.has("axis2_range")) {
                config.window2 = keys.get_range("axis2_range");
            }
            break;
        }
        case Command::secular:
            if (keys.has("t_range")) config.t_range = keys.get_range("t_range");
            break;
        case Command::critical_beta:
            keys.require({"bracket"});
            config.bracket = keys.get_range("bracket");
            break;
    }

    keys.reject_unused();
    return config;
}

}  // namespace qherm
