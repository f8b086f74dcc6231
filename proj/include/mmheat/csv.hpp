#pragma once

#include <istream>
#include <string>
#include <vector>

namespace mmheat::csv {

// Fixed-format rendering so that reports are byte-identical across runs.
std::string fmt(double v);
// Round-trip precision, for data files that are read back.
std::string fmt_exact(double v);
std::string fmt_bool(bool v);

std::vector<std::string> split_line(const std::string& line);
// Reads all non-empty lines; the first row is returned as the header.
std::vector<std::vector<std::string>> read_rows(std::istream& in);
double to_double(const std::string& field);

}  // namespace mmheat::csv
