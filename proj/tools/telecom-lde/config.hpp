#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "telecom/laws.hpp"

namespace telecom::cli {

// Plain-text key-value configuration:
//   key = value            numbers, "strings", booleans
//   key = { k = v, ... }   inline record (law descriptions)
//   key = [v1, v2, ...]    arrays
//   # comment
class ConfigValue {
public:
    enum class Kind { number, string, boolean, record, array };

    Kind kind = Kind::number;
    double num = 0.0;
    bool boolean = false;
    std::string str;
    std::map<std::string, ConfigValue> record;
    std::vector<ConfigValue> array;
};

class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long long integer_or(const std::string& key, long long fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    std::vector<double> number_array(const std::string& key) const;
    std::vector<std::string> string_array_or(const std::string& key,
                                             std::vector<std::string> fallback) const;
    const ConfigValue& at(const std::string& key) const;

    // Tagged law records, e.g. reward = { kind = "uniform", b = 1.0 }.
    RewardLaw reward_law(const std::string& key) const;
    DurationLaw duration_law(const std::string& key) const;

    void set_number(const std::string& key, double v);
    void set_string(const std::string& key, const std::string& v);

    const std::map<std::string, ConfigValue>& entries() const { return entries_; }

private:
    std::map<std::string, ConfigValue> entries_;
};

}  // namespace telecom::cli
