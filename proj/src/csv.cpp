#include "warpflow/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace warpflow {

std::string format_g17(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& rows) {
  std::ofstream out = open_out(path);
  out << "t,area,volume,sup_grad,osc,holder_half,max_z\n";
  for (const auto& r : rows) {
    out << format_g17(r.t) << ',' << format_g17(r.area) << ','
        << format_g17(r.volume) << ',' << format_g17(r.sup_grad) << ','
        << format_g17(r.osc) << ',' << format_g17(r.holder_half) << ',';
    if (r.max_z) out << format_g17(*r.max_z);
    out << '\n';
  }
}

void write_snapshots_csv(const std::string& path,
                         const std::vector<Snapshot>& snapshots) {
  if (snapshots.empty())
    throw ContractError("write_snapshots_csv: no snapshots");
  const Profile& first = snapshots.front().profile;
  for (const auto& s : snapshots)
    if (s.profile.values.size() != first.values.size())
      throw ContractError("write_snapshots_csv: snapshot grids differ");
  std::ofstream out = open_out(path);
  out << "theta";
  for (const auto& s : snapshots) out << ",t=" << format_g17(s.t);
  out << '\n';
  for (std::size_t j = 0; j < first.values.size(); ++j) {
    out << format_g17(first.theta(j));
    for (const auto& s : snapshots) out << ',' << format_g17(s.profile.values[j]);
    out << '\n';
  }
}

void write_modulus_csv(const std::string& path,
                       const std::vector<double>& omega, double h) {
  std::ofstream out = open_out(path);
  out << "lag,omega\n";
  for (std::size_t l = 0; l < omega.size(); ++l)
    out << format_g17(static_cast<double>(l) * h) << ','
        << format_g17(omega[l]) << '\n';
}

std::vector<std::vector<double>> read_csv_columns(
    const std::string& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ContractError("empty CSV file: " + path);
  std::vector<std::string> names;
  {
    std::istringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) names.push_back(tok);
  }
  if (header) *header = names;
  std::vector<std::vector<double>> cols(names.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::size_t c = 0;
    while (std::getline(ls, tok, ',')) {
      if (c >= cols.size())
        throw ContractError("row wider than header in: " + path);
      cols[c].push_back(tok.empty() ? std::nan("") : std::strtod(tok.c_str(), nullptr));
      ++c;
    }
    // A row ending in ',' has an empty trailing field getline drops.
    if (c == cols.size() - 1 && !line.empty() && line.back() == ',') {
      cols[c].push_back(std::nan(""));
      ++c;
    }
    if (c != cols.size())
      throw ContractError("row narrower than header in: " + path);
  }
  return cols;
}

}  // namespace warpflow
