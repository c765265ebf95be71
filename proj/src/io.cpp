#include "horizon/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace horizon {

namespace {

std::string csv_num(double v) { return format_sig(v); }

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string report_json(const VerificationReport& rep, const AdjointSolution* adj) {
  nlohmann::json j;
  j["scenario"] = rep.scenario;
  j["conditions"] = nlohmann::json::array();
  for (const auto& e : rep.entries) {
    nlohmann::json c;
    c["name"] = e.name;
    c["residual"] = round_sig(e.residual);
    c["tolerance"] = round_sig(e.tolerance);
    c["pass"] = e.pass;
    if (!e.note.empty()) c["note"] = e.note;
    j["conditions"].push_back(c);
  }
  j["flags"] = nlohmann::json::object();
  for (const auto& [k, v] : rep.flags) j["flags"][k] = v;
  if (const auto* w = rep.worst()) {
    j["worst"]["t"] = round_sig(w->worst_t);
    j["worst"]["condition"] = w->name;
  } else {
    j["worst"] = nullptr;
  }
  j["pass"] = rep.all_pass();
  if (adj) {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : adj->measures) {
      nlohmann::json one;
      one["atoms"] = nlohmann::json::array();
      for (const auto& [t, b] : m.atoms)
        one["atoms"].push_back({round_sig(t), round_sig(b)});
      one["atom_at_infinity"] = round_sig(m.atom_at_infinity);
      one["total_mass"] = round_sig(m.total_mass());
      ms.push_back(one);
    }
    j["measures"] = ms;
    j["lambda0"] = round_sig(adj->lambda0);
  }
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const Process& proc, const SemiInfiniteGrid& grid) {
  const int n = proc.x.dim();
  const int m = proc.u_nodes.empty() ? 0 : static_cast<int>(proc.u_nodes.front().size());
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int i = 1; i <= m; ++i) out << ",u_" << i;
  out << "\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double t = grid.node(k);
    out << csv_num(t);
    Vec x = proc.state(t);
    for (int i = 0; i < n; ++i) out << "," << csv_num(x[i]);
    Vec u = proc.control_at_node(k);
    for (int i = 0; i < m; ++i) out << "," << csv_num(u[i]);
    out << "\n";
  }
  if (grid.includes_infinity()) {
    out << "inf";
    for (int i = 0; i < n; ++i) out << "," << csv_num(proc.x.limit()[i]);
    Vec u = proc.u_nodes.back();
    for (int i = 0; i < m; ++i) out << "," << csv_num(u[i]);
    out << "\n";
  }
  return out.str();
}

std::string adjoint_csv(const AdjointSolution& adj, const SemiInfiniteGrid& grid) {
  const int n = adj.p.dim();
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",p_" << i;
  out << "\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double t = grid.node(k);
    Vec p = adj.value(t);
    out << csv_num(t);
    for (int i = 0; i < n; ++i) out << "," << csv_num(p[i]);
    out << "\n";
  }
  if (grid.includes_infinity()) {
    Vec p = adj.p_limit.size() ? adj.p_limit : adj.p.limit();
    out << "inf";
    for (int i = 0; i < n; ++i) out << "," << csv_num(p[i]);
    out << "\n";
  }
  return out.str();
}

std::string jump_table_csv(const AdjointSolution& adj) {
  std::ostringstream out;
  out << "s_n,j,beta_jn\n";
  for (std::size_t j = 0; j < adj.measures.size(); ++j)
    for (const auto& [s, b] : adj.measures[j].atoms)
      out << csv_num(s) << "," << j << "," << csv_num(b) << "\n";
  return out.str();
}

std::string pathology_csv(const PathologyTable& table) {
  std::ostringstream out;
  out << "T,tau,J_T,J_infinite_of_T_process,J_limit_process\n";
  for (const auto& r : table.rows)
    out << csv_num(r.T) << "," << csv_num(r.tau) << "," << csv_num(r.J_T) << ","
        << csv_num(r.J_infinite_of_T) << "," << csv_num(r.J_limit_process) << "\n";
  return out.str();
}

std::string plot_csv(const std::string& value_header, const std::vector<double>& t,
                     const std::vector<std::vector<double>>& columns) {
  std::ostringstream out;
  out << "t," << value_header << "\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    out << csv_num(t[k]);
    for (const auto& col : columns) out << "," << csv_num(col.at(k));
    out << "\n";
  }
  return out.str();
}

TrajectoryData parse_trajectory_csv(const std::string& content, int state_dim, int control_dim) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line) || trim(line).empty())
    throw Error(ErrorCode::schema_mismatch, "empty trajectory file");

  auto header = split_line(line);
  std::vector<std::string> expected;
  expected.push_back("t");
  for (int i = 1; i <= state_dim; ++i) expected.push_back("x_" + std::to_string(i));
  for (int i = 1; i <= control_dim; ++i) expected.push_back("u_" + std::to_string(i));
  if (header.size() != expected.size())
    throw Error(ErrorCode::schema_mismatch,
                "expected " + std::to_string(expected.size()) + " columns, found " +
                    std::to_string(header.size()));
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (trim(header[i]) != expected[i])
      throw Error(ErrorCode::schema_mismatch,
                  "column " + std::to_string(i + 1) + " must be '" + expected[i] + "', found '" +
                      trim(header[i]) + "'");

  TrajectoryData data;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != expected.size())
      throw Error(ErrorCode::schema_mismatch,
                  "row " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(expected.size()));
    bool is_inf = trim(cells[0]) == "inf";
    std::vector<double> vals(cells.size());
    for (std::size_t i = is_inf ? 1 : 0; i < cells.size(); ++i) {
      try {
        vals[i] = std::stod(trim(cells[i]));
      } catch (const std::exception&) {
        throw Error(ErrorCode::schema_mismatch,
                    "row " + std::to_string(lineno) + ", column '" + expected[i] +
                        "' is not a number: '" + trim(cells[i]) + "'");
      }
    }
    Vec x(state_dim), u(control_dim);
    for (int i = 0; i < state_dim; ++i) x[i] = vals[1 + i];
    for (int i = 0; i < control_dim; ++i) u[i] = vals[1 + state_dim + i];
    if (is_inf) {
      data.x_limit = x;
      break;
    }
    data.times.push_back(vals[0]);
    data.x.push_back(x);
    data.u.push_back(u);
  }
  if (data.times.empty())
    throw Error(ErrorCode::schema_mismatch, "trajectory file carries no finite-time rows");
  for (std::size_t k = 0; k + 1 < data.times.size(); ++k)
    if (!(data.times[k] < data.times[k + 1]))
      throw Error(ErrorCode::schema_mismatch, "column 't' must be strictly increasing");
  return data;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace horizon
