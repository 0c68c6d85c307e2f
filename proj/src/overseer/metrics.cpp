#include "humanoid/overseer/metrics.hpp"

#include <charconv>
#include <fstream>

#include "humanoid/error.hpp"

namespace humanoid::overseer {

nlohmann::json SessionMetrics::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < kFeatureCount; ++i) j[std::string(kFeatureNames[i])] = counts_[i];
  return j;
}

std::size_t export_metrics(const SessionMetrics& metrics, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoFailure, "cannot write metrics " + path.string());
  out << "feature,count\n";
  for (std::size_t i = 0; i < kFeatureCount; ++i) out << kFeatureNames[i] << ',' << metrics.counts()[i] << '\n';
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
  return kFeatureCount;
}

SessionMetrics read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open metrics " + path.string());
  auto corrupt = [&](const std::string& what) { return Error(Errc::CorruptFile, path.string() + ": " + what); };
  std::string line;
  if (!std::getline(in, line) || line != "feature,count") throw corrupt("missing header");
  SessionMetrics m;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::getline(in, line)) throw corrupt("expected " + std::to_string(kFeatureCount) + " rows");
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.substr(0, comma) != kFeatureNames[i]) {
      throw corrupt("row " + std::to_string(i + 1) + " should be " + std::string(kFeatureNames[i]));
    }
    const char* first = line.data() + comma + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, m.counts_[i]);
    if (ec != std::errc() || ptr != last) throw corrupt("bad count in '" + line + "'");
  }
  if (std::getline(in, line) && !line.empty()) throw corrupt("trailing rows");
  return m;
}

ErrorLog::ErrorLog(const std::filesystem::path& path) : path_(path) {
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot write error log " + path_.string());
}

void ErrorLog::append(const event::ErrorReport& report) {
  reports_.push_back(report);
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(Errc::IoFailure, "cannot append to " + path_.string());
  out << nlohmann::json{{"segment", report.segment}, {"reason", report.reason}, {"time", report.time}}.dump()
      << '\n';
}

}  // namespace humanoid::overseer
