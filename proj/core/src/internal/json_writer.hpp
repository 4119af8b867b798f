#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace tadpole::detail {

using Json = nlohmann::ordered_json;

/// Serialize with insertion-ordered keys and doubles at 17 significant
/// digits; non-finite numbers become null.
std::string dump_stable(const Json& j, int indent = 2);

std::string format_double(double x);

void write_text(const std::string& path, const std::string& text);

/// CSV with a header row, comma separated, LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns,
               const std::vector<std::string>& text_column = {});

Json to_json_array(const std::vector<double>& xs);

}  // namespace tadpole::detail
