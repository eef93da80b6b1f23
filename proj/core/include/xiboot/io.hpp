#pragma once

#include <string>
#include <vector>

namespace xiboot {

struct XyData {
  std::vector<double> x, y;
};

// Two numeric columns, comma / tab / whitespace separated, '.' decimal
// separator, UTF-8.  A non-numeric first row is treated as a header.  Throws
// io_error with the line number on malformed rows and parameter_error when
// fewer than two data rows remain.
XyData read_xy_file(const std::string& path);

}  // namespace xiboot
