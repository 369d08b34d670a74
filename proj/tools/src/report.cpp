#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace spacelike::cli {

namespace {

using nlohmann::json;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json("nan");
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return json(*i);
  return json(std::get<std::string>(c));
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&row[i])) os << format_number(*d);
      else if (const std::int64_t* k = std::get_if<std::int64_t>(&row[i])) os << *k;
      else os << csv_escape(std::get<std::string>(row[i]));
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t, const json& meta) {
  json doc;
  doc["meta"] = meta;
  json records = json::array();
  for (const auto& row : t.rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = cell_json(row[i]);
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  os << doc.dump(1) << '\n';
}

void write_table(std::ostream& os, const Table& t, Format f, const json& meta) {
  if (f == Format::Csv) write_csv(os, t);
  else write_json(os, t, meta);
}

json lattice_json(const Lattice& lat) {
  json j;
  std::vector<double> lo, hi, sp;
  for (int d = 0; d < lat.dim(); ++d) {
    lo.push_back(lat.lower(d));
    hi.push_back(lat.upper(d));
    sp.push_back(lat.spacing(d));
  }
  j["lower"] = lo;
  j["upper"] = hi;
  j["spacing"] = sp;
  if (lat.mask()) j["mask"] = {{"center", lat.mask()->center}, {"inner", lat.mask()->inner}, {"outer", lat.mask()->outer}};
  return j;
}

Table field_table(const GridField& field) {
  const Lattice& lat = field.lattice;
  Table t;
  t.columns.push_back("node");
  for (int d = 0; d < lat.dim(); ++d) t.columns.push_back("x" + std::to_string(d + 1));
  t.columns.push_back("role");
  t.columns.push_back("value");
  for (std::size_t node = 0; node < lat.size(); ++node) {
    if (field.roles[node] == NodeRole::Outside) continue;
    std::vector<Cell> row{static_cast<std::int64_t>(node)};
    for (double x : lat.position(node)) row.emplace_back(x);
    row.emplace_back(std::string(to_string(field.roles[node])));
    row.emplace_back(field.values[node]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

GridField read_field_json(const json& doc) {
  const json& lj = doc.at("meta").at("lattice");
  Lattice lat(lj.at("lower").get<std::vector<double>>(), lj.at("upper").get<std::vector<double>>(),
              lj.at("spacing").get<std::vector<double>>());
  if (lj.contains("mask")) {
    const json& mk = lj["mask"];
    lat = lat.with_mask(Shell{mk.at("center").get<std::vector<double>>(), mk.at("inner").get<double>(),
                              mk.at("outer").get<double>()});
  }
  GridField f;
  f.lattice = lat;
  f.roles.assign(lat.size(), NodeRole::Outside);
  f.values.assign(lat.size(), std::numeric_limits<double>::quiet_NaN());
  for (const json& rec : doc.at("records")) {
    const auto node = rec.at("node").get<std::size_t>();
    if (node >= lat.size()) throw std::runtime_error("field record node index out of range");
    const std::string role = rec.at("role").get<std::string>();
    f.roles[node] = role == "active" ? NodeRole::Active : role == "dirichlet" ? NodeRole::Dirichlet : NodeRole::Outside;
    const json& v = rec.at("value");
    f.values[node] = v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

}  // namespace spacelike::cli
