#pragma once

#include <string>
#include <vector>

namespace gmax::detail {

struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a comma-separated file whose first non-comment line is a header and
/// whose remaining lines are numeric. Lines starting with '#' are skipped.
NumericTable read_numeric_csv(const std::string& path);

}  // namespace gmax::detail
