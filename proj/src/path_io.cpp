#include "mixou/path_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mixou/errors.hpp"

namespace mixou {

std::string path_to_csv(const SamplePath& path) {
    std::string out = "t,value\n";
    char buf[64];
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.grid.at(i), path.values[i]);
        out += buf;
    }
    return out;
}

void write_path_csv(const SamplePath& path, const std::string& file) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw ArgumentError("cannot open '" + file + "' for writing");
    os << path_to_csv(path);
    if (!os) throw ArgumentError("failed writing '" + file + "'");
}

SamplePath path_from_csv(const std::string& text, PathKind label) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ArgumentError("empty path CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,value") throw ArgumentError("path CSV must start with header 't,value'");

    std::vector<double> times, values;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ArgumentError("malformed path CSV row '" + line + "'");
        char* end = nullptr;
        const double t = std::strtod(line.c_str(), &end);
        if (end != line.c_str() + comma) throw ArgumentError("bad time value in row '" + line + "'");
        const char* vstart = line.c_str() + comma + 1;
        const double v = std::strtod(vstart, &end);
        if (end == vstart) throw ArgumentError("bad value in row '" + line + "'");
        times.push_back(t);
        values.push_back(v);
    }
    if (values.size() < 2) throw ArgumentError("path CSV needs at least two rows");
    if (times.front() != 0.0) throw ArgumentError("path CSV must start at t = 0");

    const std::size_t n = values.size() - 1;
    const double delta = times.back() / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i)
        if (std::abs(times[i] - static_cast<double>(i) * delta) > 1e-9 * std::max(1.0, times.back()))
            throw ArgumentError("path CSV grid is not uniform at row " + std::to_string(i + 1));
    return {TimeGrid(n, delta), std::move(values), label, 0};
}

SamplePath read_path_csv(const std::string& file, PathKind label) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw ArgumentError("cannot open '" + file + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return path_from_csv(ss.str(), label);
}

}  // namespace mixou
