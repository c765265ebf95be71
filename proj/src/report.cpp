#include "horizon/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace horizon {

bool VerificationReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

const ConditionEntry* VerificationReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

ConditionEntry& VerificationReport::add(ConditionEntry e) {
  entries.push_back(std::move(e));
  return entries.back();
}

const ConditionEntry* VerificationReport::worst() const {
  const ConditionEntry* w = nullptr;
  double score = -1.0;
  for (const auto& e : entries) {
    double s = e.tolerance > 0.0 ? e.residual / e.tolerance : e.residual;
    if (s > score) {
      score = s;
      w = &e;
    }
  }
  return w;
}

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double round_sig(double v) { return std::strtod(format_sig(v).c_str(), nullptr); }

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_failure, "cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw Error(ErrorCode::io_failure, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::io_failure, "rename failed for " + path + ": " + ec.message());
}

}  // namespace horizon
