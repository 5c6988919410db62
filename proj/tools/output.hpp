#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace tdho::cli {

using json = nlohmann::json;

std::string fmt(double x);

// Comma-separated table with a mandatory header; doubles use 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(const std::string& s);
  void end_row();

 private:
  void sep();
  std::FILE* f_ = nullptr;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
};

// Manifest with invariant checks; no timestamps or machine details so reruns compare equal.
class Manifest {
 public:
  Manifest(std::string command, const json& scenario, double tol);
  void check(const std::string& name, double value, double threshold, bool pass);
  void check(const std::string& name, double value, double threshold) {
    check(name, value, threshold, value <= threshold);
  }
  json& info() { return info_; }
  bool all_passed() const { return passed_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  json scenario_;
  double tol_;
  json checks_ = json::object();
  json info_ = json::object();
  bool passed_ = true;
};

}  // namespace tdho::cli
