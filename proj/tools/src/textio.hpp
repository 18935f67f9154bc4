#pragma once

// Shared CLI plumbing: the exit-code-carrying error type and the text
// serialization helpers every command uses.  Exit codes: 0 success,
// 1 validation failure, 2 config error, 3 I/O error.

#include <ostream>
#include <stdexcept>
#include <string>

namespace adagrow::cli {

class CliError : public std::runtime_error {
  public:
    CliError(int exit_code, const std::string& message)
        : std::runtime_error(message), exit_code_(exit_code) {}

    int exit_code() const { return exit_code_; }

  private:
    int exit_code_;
};

// 17 significant digits: doubles round-trip exactly through the CSV.
std::string fmt17(double v);

// Compact display form for tables and summaries.
std::string fmt6(double v);

// Writes the whole file or throws CliError(3).
void write_text_file(const std::string& path, const std::string& text);

}  // namespace adagrow::cli
