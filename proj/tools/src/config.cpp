#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace adagrow::cli {

namespace {

const std::set<std::string> kKnownSections = {"bound", "sweep", "simulate",
                                              "validate"};

// Every manifest key; each is also a command-line flag of the same name.
const std::set<std::string> kKnownKeys = {
    "method",      "alpha",          "beta-prime",  "n",
    "n0",          "growth-ratio",   "b",           "k",
    "seed",        "out",            "svg",         "restarts",
    "rho",         "axis",           "sigma",       "clipped",
    "trials",      "analyst",        "domain-size", "weights",
    "final-fraction", "filter-rho",  "queries",     "transcript-out",
    "bound",
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail_at(const std::string& origin, int line,
                          const std::string& what) {
    throw CliError(2, origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(3, "cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw CliError(3, "error while reading '" + path + "'");
    return parse_text(text.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text,
                                  const std::string& origin) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string raw_line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw_line)) {
        ++lineno;
        std::string line = raw_line;
        if (std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail_at(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!kKnownSections.count(section))
                fail_at(origin, lineno, "unknown section '" + section + "'");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_at(origin, lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_at(origin, lineno, "empty key");
        if (value.empty()) fail_at(origin, lineno, "empty value for '" + key + "'");
        if (!kKnownKeys.count(key))
            fail_at(origin, lineno, "unknown key '" + key + "'");
        auto& scope = section.empty() ? cfg.top_ : cfg.sections_[section];
        if (!scope.emplace(key, value).second)
            fail_at(origin, lineno, "duplicate key '" + key + "'");
    }
    return cfg;
}

std::optional<std::string> ConfigFile::top(const std::string& key) const {
    auto it = top_.find(key);
    if (it == top_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> ConfigFile::section(const std::string& name,
                                               const std::string& key) const {
    auto sec = sections_.find(name);
    if (sec == sections_.end()) return std::nullopt;
    auto it = sec->second.find(key);
    if (it == sec->second.end()) return std::nullopt;
    return it->second;
}

std::set<std::string> ConfigFile::keys_for(const std::string& command) const {
    std::set<std::string> keys;
    for (const auto& [k, v] : top_) keys.insert(k);
    if (auto sec = sections_.find(command); sec != sections_.end())
        for (const auto& [k, v] : sec->second) keys.insert(k);
    return keys;
}

void OptionSource::set_flag(const std::string& key, const std::string& value) {
    flags_[key] = value;
}

std::optional<std::string> OptionSource::raw(const std::string& key) {
    used_.insert(key);
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    if (auto v = config_.section(command_, key)) return v;
    return config_.top(key);
}

int OptionSource::rank(const std::string& key) const {
    if (flags_.count(key)) return 3;
    if (config_.section(command_, key)) return 2;
    if (config_.top(key)) return 1;
    return 0;
}

std::vector<std::string> OptionSource::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& key : config_.keys_for(command_))
        if (!used_.count(key)) out.push_back(key);
    return out;
}

double OptionSource::f64(const std::string& key, double fallback) {
    auto v = raw(key);
    return v ? parse_f64(key, *v) : fallback;
}

std::optional<double> OptionSource::f64_opt(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return parse_f64(key, *v);
}

count_t OptionSource::count(const std::string& key, count_t fallback) {
    auto v = raw(key);
    return v ? parse_count(key, *v) : fallback;
}

std::optional<count_t> OptionSource::count_opt(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return parse_count(key, *v);
}

std::vector<count_t> OptionSource::count_list(const std::string& key) {
    auto v = raw(key);
    std::vector<count_t> out;
    if (!v) return out;
    for (const auto& item : split_list(key, *v))
        out.push_back(parse_count(key, item));
    return out;
}

std::vector<double> OptionSource::f64_list(const std::string& key) {
    auto v = raw(key);
    std::vector<double> out;
    if (!v) return out;
    for (const auto& item : split_list(key, *v))
        out.push_back(parse_f64(key, item));
    return out;
}

std::uint64_t OptionSource::u64(const std::string& key, std::uint64_t fallback) {
    auto v = raw(key);
    return v ? parse_u64(key, *v) : fallback;
}

bool OptionSource::boolean(const std::string& key, bool fallback) {
    auto v = raw(key);
    return v ? parse_bool(key, *v) : fallback;
}

std::string OptionSource::str(const std::string& key,
                              const std::string& fallback) {
    auto v = raw(key);
    return v ? *v : fallback;
}

std::vector<std::string> OptionSource::str_list(const std::string& key) {
    auto v = raw(key);
    if (!v) return {};
    return split_list(key, *v);
}

std::vector<std::string> split_list(const std::string& key,
                                    const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw CliError(2, key + ": empty item in list '" + value + "'");
        out.push_back(item.substr(a, b - a + 1));
    }
    if (out.empty())
        throw CliError(2, key + ": empty list");
    return out;
}

double parse_f64(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw CliError(2, key + ": not a number: '" + value + "'");
    return v;
}

count_t parse_count(const std::string& key, const std::string& value) {
    double v = parse_f64(key, value);
    if (!std::isfinite(v) || v < 0.0 || v > 9.0e15)
        throw CliError(2, key + ": out of range: '" + value + "'");
    auto ll = static_cast<count_t>(std::llround(v));
    if (std::fabs(v - static_cast<double>(ll)) >
        1e-9 * std::max(1.0, std::fabs(v)))
        throw CliError(2, key + ": must be an integer: '" + value + "'");
    return ll;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 0);
    if (end == s || *end != '\0' || value.front() == '-')
        throw CliError(2, key + ": not an unsigned integer: '" + value + "'");
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw CliError(2, key + ": not a boolean: '" + value + "'");
}

}  // namespace adagrow::cli
