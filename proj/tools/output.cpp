#include "output.hpp"

#include <boost/version.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace tdho::cli {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : columns_(header.size()) {
  f_ = std::fopen(path.string().c_str(), "w");
  if (!f_) throw std::runtime_error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < header.size(); ++i)
    std::fprintf(f_, "%s%s", i ? "," : "", header[i].c_str());
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::sep() {
  if (in_row_++) std::fputc(',', f_);
}

CsvWriter& CsvWriter::cell(double x) {
  sep();
  std::fputs(fmt(x).c_str(), f_);
  return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
  sep();
  std::fprintf(f_, "%lld", x);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  sep();
  std::fputs(s.c_str(), f_);
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("csv row width does not match the header");
  std::fputc('\n', f_);
  in_row_ = 0;
}

Manifest::Manifest(std::string command, const json& scenario, double tol)
    : command_(std::move(command)), scenario_(scenario), tol_(tol) {}

void Manifest::check(const std::string& name, double value, double threshold, bool pass) {
  checks_[name] = {{"value", value}, {"threshold", threshold}, {"pass", pass}};
  passed_ = passed_ && pass;
}

void Manifest::write(const std::filesystem::path& path) const {
  json j;
  j["command"] = command_;
  j["versions"] = {{"tdho", "0.1.0"},
                   {"boost", BOOST_LIB_VERSION},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  j["tolerances"] = {{"integrator", tol_}};
  j["scenario"] = scenario_;
  j["checks"] = checks_;
  j["all_checks_passed"] = passed_;
  j["results"] = info_;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace tdho::cli
