#include "xiboot/io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <string>

#include "xiboot/errors.hpp"

namespace xiboot {

namespace {

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + token.size();
}

std::vector<std::string> split_fields(const std::string& line) {
  char sep = '\0';
  if (line.find(',') != std::string::npos) sep = ',';
  else if (line.find('\t') != std::string::npos) sep = '\t';

  std::vector<std::string> fields;
  std::string current;
  const auto flush = [&] {
    // trim surrounding spaces
    std::size_t a = 0, b = current.size();
    while (a < b && std::isspace(static_cast<unsigned char>(current[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(current[b - 1]))) --b;
    fields.push_back(current.substr(a, b - a));
    current.clear();
  };
  if (sep != '\0') {
    for (char c : line) {
      if (c == sep) flush();
      else current.push_back(c);
    }
    flush();
  } else {
    // whitespace-separated
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!current.empty()) flush();
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty()) flush();
  }
  return fields;
}

}  // namespace

XyData read_xy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");

  XyData data;
  std::string line;
  std::int64_t line_no = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    }
    if (blank) continue;

    const std::vector<std::string> fields = split_fields(line);
    double x = 0.0, y = 0.0;
    const bool ok =
        fields.size() == 2 && parse_double(fields[0], x) && parse_double(fields[1], y);
    if (!ok) {
      if (first_content_row) {  // header row
        first_content_row = false;
        continue;
      }
      throw io_error("line " + std::to_string(line_no) + ": malformed row in '" + path + "'");
    }
    first_content_row = false;
    data.x.push_back(x);
    data.y.push_back(y);
  }
  if (data.x.size() < 2) {
    throw parameter_error("'" + path + "': need at least 2 data rows");
  }
  return data;
}

}  // namespace xiboot
