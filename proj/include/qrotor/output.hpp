#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qrotor {

/// Scientific notation, 9 significant digits ("%.8e").
std::string format_double(double x);

using Cell = std::variant<double, long long, std::string>;

/// Comma-separated rows with a header line; floats through format_double.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Insertion-ordered JSON tree; serialized by write_json.
using Json = nlohmann::ordered_json;

/// Two-space indented JSON with floats through format_double and a trailing newline.
void write_json(std::ostream& out, const Json& value);

}  // namespace qrotor
