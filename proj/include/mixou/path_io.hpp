#pragma once

#include <iosfwd>
#include <string>

#include "mixou/gaussgen.hpp"

namespace mixou {

/// Header `t,value`, one row per grid point, 17 significant digits.
std::string path_to_csv(const SamplePath& path);
void write_path_csv(const SamplePath& path, const std::string& file);

/// Reads a `t,value` CSV; the grid is recovered from the time column and must be uniform from t = 0.
SamplePath path_from_csv(const std::string& text, PathKind label = PathKind::MOU);
SamplePath read_path_csv(const std::string& file, PathKind label = PathKind::MOU);

}  // namespace mixou
