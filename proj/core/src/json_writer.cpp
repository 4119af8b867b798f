#include "internal/json_writer.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "tadpole/errors.hpp"

namespace tadpole::detail {

namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        emit(it.value(), indent, depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], indent, depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  return fmt::format("{:.17g}", x);
}

std::string dump_stable(const Json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += "\n";
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw NumericalError("failed writing '" + path + "'");
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns,
               const std::vector<std::string>& text_column) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  out += '\n';
  const std::size_t rows = columns.empty() ? text_column.size() : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += fmt::format("{:.17g}", columns[c][r]);
    }
    if (!text_column.empty()) {
      if (!columns.empty()) out += ',';
      out += text_column[r];
    }
    out += '\n';
  }
  write_text(path, out);
}

Json to_json_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(x);
  return a;
}

}  // namespace tadpole::detail
