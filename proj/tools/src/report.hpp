#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "spacelike/solver.hpp"

namespace spacelike::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Doubles print as %.17g; NaN and infinities print as the token "nan".
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t, const nlohmann::json& meta);
void write_table(std::ostream& os, const Table& t, Format f, const nlohmann::json& meta);

/// One record per lattice node with a value: node, x1..xm, role, value.
Table field_table(const GridField& field);
nlohmann::json lattice_json(const Lattice& lat);

/// Reads a field written with JSON output (meta.lattice plus records).
GridField read_field_json(const nlohmann::json& doc);

}  // namespace spacelike::cli
