#include "qrotor/output.hpp"

#include <cmath>
#include <cstdio>

#include "qrotor/errors.hpp"

namespace qrotor {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw InvalidInput("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) out_ << format_double(v);
          else out_ << v;
        },
        cells[i]);
  }
  out_ << '\n';
}

namespace {

void emit(std::ostream& out, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        out << (first ? "" : ",\n") << pad << Json(key).dump() << ": ";
        emit(out, item, depth + 1);
        first = false;
      }
      out << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out << (i ? ",\n" : "") << pad;
        emit(out, v[i], depth + 1);
      }
      out << '\n' << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      // JSON has no inf/nan.
      if (std::isfinite(x)) out << format_double(x);
      else out << "null";
      return;
    }
    default:
      out << v.dump();
  }
}

}  // namespace

void write_json(std::ostream& out, const Json& value) {
  emit(out, value, 0);
  out << '\n';
}

}  // namespace qrotor
