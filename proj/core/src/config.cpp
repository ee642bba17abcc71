#include "wvlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wvlab {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("field " + key + ": cannot parse '" + value + "' as a number");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("field " + key + ": cannot parse '" + value + "' as an integer");
    return out;
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    bool scenario_seen = false;

    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError("field " + key + ": empty value");

        if (key == "scenario") {
            if (value == "fock_coupling") cfg.scenario = ScenarioKind::fock_coupling;
            else if (value == "gaussian_pair") cfg.scenario = ScenarioKind::gaussian_pair;
            else throw ConfigError("field scenario: unknown scenario '" + value + "'");
            scenario_seen = true;
        } else if (key == "lambda") {
            cfg.lambda = parse_double(key, value);
        } else if (key == "x0") {
            cfg.x0 = parse_double(key, value);
        } else if (key == "cutoff") {
            cfg.cutoff = parse_int(key, value);
        } else if (key == "period_count") {
            cfg.period_count = parse_int(key, value);
        } else if (key == "steps_per_period") {
            cfg.steps_per_period = parse_int(key, value);
        } else if (key == "kick_center") {
            cfg.kick_center = parse_double(key, value);
        } else if (key == "kick_width") {
            cfg.kick_width = parse_double(key, value);
        } else if (key == "interaction") {
            if (value == "xx") cfg.interaction = InteractionKind::xx;
            else if (value == "pp") cfg.interaction = InteractionKind::pp;
            else throw ConfigError("field interaction: expected 'xx' or 'pp', got '" + value + "'");
            cfg.interaction_set = true;
        } else if (key == "sweep") {
            cfg.sweep.clear();
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (!item.empty()) cfg.sweep.push_back(parse_double("sweep", item));
            }
            if (cfg.sweep.empty()) throw ConfigError("field sweep: empty list");
        } else {
            throw ConfigError("field " + key + ": unknown key");
        }
    }
    if (!scenario_seen) throw ConfigError("field scenario: missing (required)");
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace wvlab
