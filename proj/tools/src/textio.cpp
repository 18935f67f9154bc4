#include "textio.hpp"

#include <cstdio>
#include <fstream>

namespace adagrow::cli {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(3, "cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw CliError(3, "error while writing '" + path + "'");
}

}  // namespace adagrow::cli
