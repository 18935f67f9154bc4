#pragma once

// Plain-text experiment manifests.  Grammar:
//
//   # comment (anywhere on a line)
//   key = value              top-level entry, applies to every subcommand
//   [subcommand]             section header: bound | sweep | simulate | validate
//   key = value              applies only when that subcommand runs
//
// List values are comma-separated.  Every key is mirrored by a command-line
// flag of the same name; precedence is flag > [subcommand] entry > top-level
// entry > built-in default.  Unknown keys and sections are config errors;
// keys that the executed subcommand never reads are reported as warnings.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adagrow/schedule.hpp"

#include "textio.hpp"

namespace adagrow::cli {

class ConfigFile {
  public:
    ConfigFile() = default;

    // Throws CliError(3) when the file cannot be read, CliError(2) on a
    // malformed line, an unknown key, or an unknown section.
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text,
                                 const std::string& origin);

    std::optional<std::string> top(const std::string& key) const;
    std::optional<std::string> section(const std::string& name,
                                       const std::string& key) const;
    // Keys present anywhere in the file (top level or inside `command`).
    std::set<std::string> keys_for(const std::string& command) const;

  private:
    std::map<std::string, std::string> top_;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Merges command-line flags with a parsed manifest and hands out typed
// values.  Every lookup records the key so unused manifest entries can be
// reported afterwards.
class OptionSource {
  public:
    OptionSource(ConfigFile config, std::string command)
        : config_(std::move(config)), command_(std::move(command)) {}

    void set_flag(const std::string& key, const std::string& value);

    // Raw value at the highest precedence level that defines the key.
    std::optional<std::string> raw(const std::string& key);
    // 0 = nowhere, 1 = top level, 2 = [command] section, 3 = flag.
    int rank(const std::string& key) const;

    // Manifest keys never consumed by raw(); flags are always consumed.
    std::vector<std::string> unused_keys() const;

    // Typed accessors; all throw CliError(2) naming the key on bad input.
    double f64(const std::string& key, double fallback);
    std::optional<double> f64_opt(const std::string& key);
    count_t count(const std::string& key, count_t fallback);
    std::optional<count_t> count_opt(const std::string& key);
    std::vector<count_t> count_list(const std::string& key);  // empty if unset
    std::vector<double> f64_list(const std::string& key);     // empty if unset
    std::uint64_t u64(const std::string& key, std::uint64_t fallback);
    bool boolean(const std::string& key, bool fallback);
    std::string str(const std::string& key, const std::string& fallback);
    std::vector<std::string> str_list(const std::string& key);

  private:
    ConfigFile config_;
    std::string command_;
    std::map<std::string, std::string> flags_;
    std::set<std::string> used_;
};

// Splits on commas and trims; rejects empty items.
std::vector<std::string> split_list(const std::string& key,
                                    const std::string& value);

double parse_f64(const std::string& key, const std::string& value);
// Accepts scientific notation (3e5) but requires an integral value.
count_t parse_count(const std::string& key, const std::string& value);
std::uint64_t parse_u64(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

}  // namespace adagrow::cli
