#include "frh/table.hpp"

#include <cmath>
#include <cstdio>

namespace frh::table {

void Table::add_row(std::vector<nlohmann::json> row) {
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

void emit_csv(const Table& t, std::ostream& os) {
  if (!t.meta.empty()) {
    os << "#";
    for (auto it = t.meta.begin(); it != t.meta.end(); ++it)
      os << " " << it.key() << "=" << csv_cell(it.value());
    os << "\n";
  }
  for (size_t i = 0; i < t.columns.size(); ++i)
    os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "");
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      os << csv_cell(row[i]) << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
}

void emit_json(const Table& t, std::ostream& os) {
  nlohmann::json out;
  out["meta"] = t.meta;
  out["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
      r[t.columns[i]] = row[i];
    out["rows"].push_back(std::move(r));
  }
  os << out.dump(2) << "\n";
}

}  // namespace frh::table
