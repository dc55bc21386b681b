#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hybell/errors.hpp"
#include "hybell/format.hpp"

// Result records: every run is a small table of doubles plus a metadata
// block holding the resolved parameters and the seed, serialized as CSV or
// JSON.  Doubles are written with full round-trip precision so that files
// re-read bit-exactly; CSV and JSON carry the same values.

namespace hybell {

struct Report {
  std::map<std::string, std::string> meta;  // resolved parameters, seed, command
  std::string label_column;                 // optional leading text column name
  std::vector<std::string> columns;         // numeric column names
  std::vector<std::string> labels;          // one per row when label_column set
  std::vector<std::vector<double>> rows;

  void set_meta(const std::string& key, double value);
  void set_meta(const std::string& key, const std::string& value) {
    meta[key] = value;
  }
};

inline void Report::set_meta(const std::string& key, double value) {
  meta[key] = format_g17(value);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw numerical_error("records: cannot parse number '" + s + "'");
  return v;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_csv(std::ostream& os, const Report& r) {
  for (const auto& [k, v] : r.meta) os << "# " << k << " = " << v << "\n";
  bool first = true;
  if (!r.label_column.empty()) {
    os << r.label_column;
    first = false;
  }
  for (const auto& c : r.columns) {
    if (!first) os << ",";
    os << c;
    first = false;
  }
  os << "\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    bool f = true;
    if (!r.label_column.empty()) {
      os << r.labels.at(i);
      f = false;
    }
    for (double v : r.rows[i]) {
      if (!f) os << ",";
      os << format_g17(v);
      f = false;
    }
    os << "\n";
  }
}

namespace record_detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline bool parses_as_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace record_detail

inline Report read_csv(std::istream& is) {
  Report r;
  std::string line;
  bool have_header = false;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const std::string kv = line.substr(2);
      const auto sep = kv.find(" = ");
      if (sep == std::string::npos)
        throw numerical_error("records: malformed CSV meta line '" + line + "'");
      r.meta[kv.substr(0, sep)] = kv.substr(sep + 3);
      continue;
    }
    const auto cells = record_detail::split_csv_line(line);
    if (!have_header) {
      header = cells;
      have_header = true;
      continue;
    }
    std::size_t start = 0;
    if (!cells.empty() && !record_detail::parses_as_double(cells[0])) {
      if (r.label_column.empty() && r.rows.empty() && !header.empty()) {
        r.label_column = header[0];
        r.columns.assign(header.begin() + 1, header.end());
      }
      r.labels.push_back(cells[0]);
      start = 1;
    } else if (r.columns.empty() && r.rows.empty() && r.labels.empty()) {
      r.columns = header;
    }
    std::vector<double> row;
    for (std::size_t i = start; i < cells.size(); ++i)
      row.push_back(parse_double(cells[i]));
    r.rows.push_back(std::move(row));
  }
  if (!have_header) throw numerical_error("records: CSV has no header row");
  if (r.columns.empty()) r.columns = header;
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline void write_json(std::ostream& os, const Report& r) {
  nlohmann::json j;
  j["meta"] = r.meta;
  j["columns"] = r.columns;
  if (!r.label_column.empty()) {
    j["label_column"] = r.label_column;
    j["labels"] = r.labels;
  }
  j["rows"] = r.rows;
  os << j.dump(2) << "\n";
}

inline Report read_json(std::istream& is) {
  nlohmann::json j;
  is >> j;
  Report r;
  for (const auto& [k, v] : j.at("meta").items())
    r.meta[k] = v.get<std::string>();
  r.columns = j.at("columns").get<std::vector<std::string>>();
  if (j.contains("label_column")) {
    r.label_column = j.at("label_column").get<std::string>();
    r.labels = j.at("labels").get<std::vector<std::string>>();
  }
  r.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  return r;
}

// ---------------------------------------------------------------------------
// Dispatch

inline void write_report(std::ostream& os, const Report& r,
                         const std::string& format) {
  if (format == "csv")
    write_csv(os, r);
  else if (format == "json")
    write_json(os, r);
  else
    throw domain_error("records: unknown format '" + format + "'");
}

inline Report read_report(std::istream& is, const std::string& format) {
  if (format == "csv") return read_csv(is);
  if (format == "json") return read_json(is);
  throw domain_error("records: unknown format '" + format + "'");
}

}  // namespace hybell
