#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "telecom/errors.hpp"

namespace telecom::cli {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    std::string origin;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_space_inline() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
    }
};

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string parse_ident(Cursor& cur) {
    cur.skip_space_inline();
    std::size_t start = cur.pos;
    while (!cur.done() && is_ident_char(cur.peek())) ++cur.pos;
    if (cur.pos == start) cur.fail("expected an identifier");
    return cur.text.substr(start, cur.pos - start);
}

ConfigValue parse_value(Cursor& cur);

ConfigValue parse_scalar(Cursor& cur) {
    ConfigValue v;
    cur.skip_space_inline();
    if (cur.done()) cur.fail("expected a value");
    const char c = cur.peek();
    if (c == '"') {
        ++cur.pos;
        std::size_t start = cur.pos;
        while (!cur.done() && cur.peek() != '"') ++cur.pos;
        if (cur.done()) cur.fail("unterminated string");
        v.kind = ConfigValue::Kind::string;
        v.str = cur.text.substr(start, cur.pos - start);
        ++cur.pos;
        return v;
    }
    std::size_t start = cur.pos;
    while (!cur.done() && (is_ident_char(cur.peek()) || cur.peek() == '+')) ++cur.pos;
    const std::string token = cur.text.substr(start, cur.pos - start);
    if (token.empty()) cur.fail("expected a value");
    if (token == "true" || token == "false") {
        v.kind = ConfigValue::Kind::boolean;
        v.boolean = token == "true";
        return v;
    }
    try {
        std::size_t used = 0;
        v.num = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        v.kind = ConfigValue::Kind::number;
        return v;
    } catch (const std::exception&) {
        cur.fail("cannot parse value '" + token + "'");
    }
}

ConfigValue parse_value(Cursor& cur) {
    cur.skip_space_inline();
    if (cur.done()) cur.fail("expected a value");
    ConfigValue v;
    if (cur.peek() == '{') {
        ++cur.pos;
        v.kind = ConfigValue::Kind::record;
        for (;;) {
            cur.skip_space_inline();
            if (!cur.done() && cur.peek() == '}') {
                ++cur.pos;
                break;
            }
            std::string key = parse_ident(cur);
            cur.skip_space_inline();
            if (cur.done() || cur.peek() != '=') cur.fail("expected '=' in record");
            ++cur.pos;
            v.record[key] = parse_value(cur);
            cur.skip_space_inline();
            if (!cur.done() && cur.peek() == ',') {
                ++cur.pos;
                continue;
            }
        }
        return v;
    }
    if (cur.peek() == '[') {
        ++cur.pos;
        v.kind = ConfigValue::Kind::array;
        for (;;) {
            cur.skip_space_inline();
            if (!cur.done() && cur.peek() == ']') {
                ++cur.pos;
                break;
            }
            v.array.push_back(parse_value(cur));
            cur.skip_space_inline();
            if (!cur.done() && cur.peek() == ',') {
                ++cur.pos;
                continue;
            }
        }
        return v;
    }
    return parse_scalar(cur);
}

}  // namespace

Config Config::parse_text(const std::string& text, const std::string& origin) {
    Config cfg;
    Cursor cur{text, 0, origin};
    while (!cur.done()) {
        cur.skip_space_inline();
        if (cur.done()) break;
        const char c = cur.peek();
        if (c == '\n' || c == '\r') {
            ++cur.pos;
            continue;
        }
        if (c == '#') {
            while (!cur.done() && cur.peek() != '\n') ++cur.pos;
            continue;
        }
        std::string key = parse_ident(cur);
        cur.skip_space_inline();
        if (cur.done() || cur.peek() != '=') cur.fail("expected '=' after key '" + key + "'");
        ++cur.pos;
        cfg.entries_[key] = parse_value(cur);
        cur.skip_space_inline();
        if (!cur.done() && cur.peek() == '#') {
            while (!cur.done() && cur.peek() != '\n') ++cur.pos;
        }
        if (!cur.done() && cur.peek() != '\n' && cur.peek() != '\r') {
            cur.fail("trailing characters after value for key '" + key + "'");
        }
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream input(path);
    if (!input) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << input.rdbuf();
    return parse_text(buffer.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

const ConfigValue& Config::at(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

double Config::number(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (v.kind != ConfigValue::Kind::number) throw ConfigError(key + " must be a number");
    return v.num;
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long long Config::integer_or(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    return static_cast<long long>(number(key));
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const ConfigValue& v = at(key);
    if (v.kind != ConfigValue::Kind::string) throw ConfigError(key + " must be a string");
    return v.str;
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const ConfigValue& v = at(key);
    if (v.kind != ConfigValue::Kind::boolean) throw ConfigError(key + " must be a boolean");
    return v.boolean;
}

std::vector<double> Config::number_array(const std::string& key) const {
    const ConfigValue& v = at(key);
    std::vector<double> out;
    if (v.kind == ConfigValue::Kind::number) {
        out.push_back(v.num);
        return out;
    }
    if (v.kind != ConfigValue::Kind::array) throw ConfigError(key + " must be an array");
    for (const auto& e : v.array) {
        if (e.kind != ConfigValue::Kind::number) {
            throw ConfigError(key + " must contain numbers");
        }
        out.push_back(e.num);
    }
    return out;
}

std::vector<std::string> Config::string_array_or(const std::string& key,
                                                 std::vector<std::string> fallback) const {
    if (!has(key)) return fallback;
    const ConfigValue& v = at(key);
    std::vector<std::string> out;
    if (v.kind == ConfigValue::Kind::string) {
        out.push_back(v.str);
        return out;
    }
    if (v.kind != ConfigValue::Kind::array) throw ConfigError(key + " must be an array");
    for (const auto& e : v.array) {
        if (e.kind != ConfigValue::Kind::string) {
            throw ConfigError(key + " must contain strings");
        }
        out.push_back(e.str);
    }
    return out;
}

namespace {
double record_number(const ConfigValue& rec, const std::string& key,
                     const std::string& where) {
    auto it = rec.record.find(key);
    if (it == rec.record.end() || it->second.kind != ConfigValue::Kind::number) {
        throw ConfigError(where + " needs numeric field '" + key + "'");
    }
    return it->second.num;
}
}  // namespace

RewardLaw Config::reward_law(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (v.kind != ConfigValue::Kind::record) {
        throw ConfigError(key + " must be a record like { kind = \"uniform\", b = 1.0 }");
    }
    auto kind_it = v.record.find("kind");
    if (kind_it == v.record.end() || kind_it->second.kind != ConfigValue::Kind::string) {
        throw ConfigError(key + " needs a string field 'kind'");
    }
    const std::string kind = kind_it->second.str;
    if (kind == "degenerate") return RewardLaw::degenerate(record_number(v, "c", key));
    if (kind == "uniform") return RewardLaw::uniform(record_number(v, "b", key));
    if (kind == "pareto") {
        return RewardLaw::pareto(record_number(v, "m", key), record_number(v, "x_min", key));
    }
    if (kind == "truncated_pareto") {
        return RewardLaw::truncated_pareto(record_number(v, "m", key),
                                           record_number(v, "x_min", key),
                                           record_number(v, "x_max", key));
    }
    if (kind == "discrete") {
        auto points = v.record.find("points");
        auto weights = v.record.find("weights");
        if (points == v.record.end() || weights == v.record.end()) {
            throw ConfigError(key + " discrete law needs 'points' and 'weights' arrays");
        }
        std::vector<double> p, w;
        for (const auto& e : points->second.array) p.push_back(e.num);
        for (const auto& e : weights->second.array) w.push_back(e.num);
        return RewardLaw::discrete(p, w);
    }
    throw ConfigError(key + ": unknown law kind '" + kind + "'");
}

DurationLaw Config::duration_law(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (v.kind != ConfigValue::Kind::record) {
        throw ConfigError(key + " must be a record like { kind = \"pareto\", gamma = 1.5, "
                                "u_min = 1.0 }");
    }
    auto kind_it = v.record.find("kind");
    if (kind_it != v.record.end() && kind_it->second.str != "pareto") {
        throw ConfigError(key + ": only the pareto duration law is supported");
    }
    return DurationLaw::pareto(record_number(v, "gamma", key),
                               record_number(v, "u_min", key));
}

void Config::set_number(const std::string& key, double v) {
    ConfigValue cv;
    cv.kind = ConfigValue::Kind::number;
    cv.num = v;
    entries_[key] = cv;
}

void Config::set_string(const std::string& key, const std::string& v) {
    ConfigValue cv;
    cv.kind = ConfigValue::Kind::string;
    cv.str = v;
    entries_[key] = cv;
}

}  // namespace telecom::cli
