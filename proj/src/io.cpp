#include "swpk/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "swpk/error.hpp"

namespace swpk {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "not a number: '" + s + "'");
  }
  if (trim(s.substr(used)) != "") throw Error(Errc::ParseError, "trailing characters in number: '" + s + "'");
  return v;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_double(trim(cell)));
  return out;
}

RadialGrid grid_from_nodes(const std::vector<double>& nodes) {
  if (nodes.size() < 2) throw Error(Errc::ParseError, "profile needs at least two radial nodes");
  RadialGrid g;
  try {
    g = make_log_grid(nodes.front(), nodes.back(), static_cast<int>(nodes.size()));
  } catch (const Error&) {
    throw Error(Errc::ParseError, "radial nodes are not increasing and positive");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - g.nodes[i]) > 1e-12 * g.nodes[i])
      throw Error(Errc::ParseError, "radial nodes are not geometric");
  return g;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::ParseError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(Errc::ParseError, "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string boundary_csv(const BoundaryProfile& f) {
  std::string s = "# kind=boundary n=" + std::to_string(f.n) + "\nr,value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) s += num(f.grid.nodes[i]) + "," + num(f.values[i]) + "\n";
  return s;
}

std::string halfspace_csv(const HalfSpaceProfile& g) {
  std::string s = "# kind=halfspace n=" + std::to_string(g.n) + "\nrho,t,value\n";
  const std::size_t nt = g.t_grid.size();
  for (std::size_t j = 0; j < g.rho_grid.size(); ++j)
    for (std::size_t k = 0; k < nt; ++k)
      s += num(g.rho_grid.nodes[j]) + "," + num(g.t_grid.nodes[k]) + "," + num(g.values[j * nt + k]) + "\n";
  return s;
}

AnyProfile parse_profile_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw Error(Errc::ParseError, "empty profile file");
  std::string kind;
  int n = 0;
  {
    std::stringstream hs(trim(line));
    std::string tok;
    hs >> tok;
    if (tok != "#") throw Error(Errc::ParseError, "missing '# kind=... n=...' header");
    while (hs >> tok) {
      if (tok.rfind("kind=", 0) == 0) kind = tok.substr(5);
      else if (tok.rfind("n=", 0) == 0) n = static_cast<int>(parse_double(tok.substr(2)));
    }
  }
  if ((kind != "boundary" && kind != "halfspace") || n < 3) throw Error(Errc::ParseError, "bad profile header");
  const std::size_t cols = kind == "boundary" ? 2 : 3;
  std::vector<std::vector<double>> rows;
  bool header_row = false;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header_row && (line == "r,value" || line == "rho,t,value")) {
      header_row = true;
      continue;
    }
    rows.push_back(split_numbers(line));
    if (rows.back().size() != cols) throw Error(Errc::ParseError, "wrong column count: " + line);
  }
  if (kind == "boundary") {
    std::vector<double> r, v;
    for (const auto& row : rows) {
      r.push_back(row[0]);
      v.push_back(row[1]);
    }
    BoundaryProfile f;
    f.grid = grid_from_nodes(r);
    f.values = v;
    f.n = n;
    return f;
  }
  std::vector<double> rho, t;
  for (const auto& row : rows) {
    if (rho.empty() || row[0] != rho.back()) rho.push_back(row[0]);
    if (rho.size() == 1) t.push_back(row[1]);
  }
  if (rows.size() != rho.size() * t.size()) throw Error(Errc::ParseError, "halfspace rows are not a full tensor grid");
  HalfSpaceProfile g;
  g.rho_grid = grid_from_nodes(rho);
  g.t_grid = grid_from_nodes(t);
  g.n = n;
  g.values.resize(rows.size());
  for (std::size_t j = 0; j < rho.size(); ++j)
    for (std::size_t k = 0; k < t.size(); ++k) {
      const auto& row = rows[j * t.size() + k];
      if (row[0] != rho[j] || row[1] != t[k]) throw Error(Errc::ParseError, "halfspace rows out of order");
      g.values[j * t.size() + k] = row[2];
    }
  return g;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw Error(Errc::ParseError, "config line " + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace swpk
