#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace frh::table {

// Column-ordered table with a configuration echo, emitted as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  nlohmann::json meta = nlohmann::json::object();

  void add_row(std::vector<nlohmann::json> row);
};

// 12 significant digits, '.' decimal point, LF line endings; the meta block
// rides in a single leading comment line so the header row stays first-class.
void emit_csv(const Table& t, std::ostream& os);

// {"meta": {...}, "rows": [{col: value, ...}, ...]} with shortest
// round-trip number formatting.
void emit_json(const Table& t, std::ostream& os);

std::string format_number(double v);  // the CSV cell format

}  // namespace frh::table
