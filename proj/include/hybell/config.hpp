#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "hybell/errors.hpp"
#include "hybell/records.hpp"
#include "hybell/rows.hpp"

// Row configuration files: flat INI-style key/value records, one section per
// named cavity row.  Unknown or missing keys are hard errors — a typo in a
// rate must never silently fall back to a default.
//
//   [my-row]
//   g_MHz = 34
//   kappa_b_MHz = 1.171
//   kappa_c_MHz = 1.171
//   kappa_L_MHz = 1.757
//   Gamma_MHz = 2.6
//   gOverDelta = 0.1       (optional, default 0.1)
//   rBS2 = 0.001           (optional, default 0.001)
//   alpha_target = 2.1     (optional, default 2.1)

namespace hybell {

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace config_detail

inline std::vector<RowSpec> parse_rows(std::istream& is) {
  using config_detail::trim;
  static const std::set<std::string> required = {
      "g_MHz", "kappa_b_MHz", "kappa_c_MHz", "kappa_L_MHz", "Gamma_MHz"};
  static const std::set<std::string> optional = {"gOverDelta", "rBS2",
                                                 "alpha_target"};

  std::vector<RowSpec> rows;
  std::set<std::string> seen_names;
  RowSpec cur;
  std::set<std::string> seen_keys;
  bool in_section = false;
  int lineno = 0;

  auto flush = [&]() {
    if (!in_section) return;
    for (const auto& k : required)
      if (!seen_keys.count(k))
        throw domain_error("config: row '" + cur.name + "' is missing key '" +
                           k + "'");
    cur.validate();
    rows.push_back(cur);
  };

  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw domain_error("config line " + std::to_string(lineno) +
                           ": malformed section header '" + t + "'");
      flush();
      cur = RowSpec{};
      cur.name = trim(t.substr(1, t.size() - 2));
      if (cur.name.empty())
        throw domain_error("config line " + std::to_string(lineno) +
                           ": empty row name");
      if (!seen_names.insert(cur.name).second)
        throw domain_error("config: duplicate row '" + cur.name + "'");
      seen_keys.clear();
      in_section = true;
      continue;
    }
    if (!in_section)
      throw domain_error("config line " + std::to_string(lineno) +
                         ": key/value outside any [row] section");
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw domain_error("config line " + std::to_string(lineno) +
                         ": expected 'key = value', got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (!required.count(key) && !optional.count(key))
      throw domain_error("config: unknown key '" + key + "' in row '" +
                         cur.name + "'");
    if (!seen_keys.insert(key).second)
      throw domain_error("config: duplicate key '" + key + "' in row '" +
                         cur.name + "'");
    const double x = parse_double(val);
    if (key == "g_MHz") cur.g_MHz = x;
    else if (key == "kappa_b_MHz") cur.kappa_b_MHz = x;
    else if (key == "kappa_c_MHz") cur.kappa_c_MHz = x;
    else if (key == "kappa_L_MHz") cur.kappa_L_MHz = x;
    else if (key == "Gamma_MHz") cur.Gamma_MHz = x;
    else if (key == "gOverDelta") cur.gOverDelta = x;
    else if (key == "rBS2") cur.rBS2 = x;
    else if (key == "alpha_target") cur.alpha_target = x;
  }
  flush();
  if (rows.empty()) throw domain_error("config: no rows defined");
  return rows;
}

inline void write_rows(std::ostream& os, const std::vector<RowSpec>& rows) {
  for (const auto& r : rows) {
    os << "[" << r.name << "]\n";
    os << "g_MHz = " << format_g17(r.g_MHz) << "\n";
    os << "kappa_b_MHz = " << format_g17(r.kappa_b_MHz) << "\n";
    os << "kappa_c_MHz = " << format_g17(r.kappa_c_MHz) << "\n";
    os << "kappa_L_MHz = " << format_g17(r.kappa_L_MHz) << "\n";
    os << "Gamma_MHz = " << format_g17(r.Gamma_MHz) << "\n";
    os << "gOverDelta = " << format_g17(r.gOverDelta) << "\n";
    os << "rBS2 = " << format_g17(r.rBS2) << "\n";
    os << "alpha_target = " << format_g17(r.alpha_target) << "\n\n";
  }
}

inline std::vector<RowSpec> load_rows_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw domain_error("config: cannot open '" + path + "'");
  return parse_rows(f);
}

}  // namespace hybell
