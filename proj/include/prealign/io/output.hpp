#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "prealign/stats.hpp"

namespace prealign::io {

/// Shortest round-trip decimal form; independent of the C++ locale.
std::string format_double(double v);

/// Small CSV builder. The header row carries units, e.g. "v_z[m/s]".
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Bin edges, centre, mass and density of a histogram. With an overlay the
/// reference density at each bin centre becomes an extra column.
std::string histogram_csv(const Histogram& h, const std::string& value_column,
                          const std::function<double(double)>& overlay = {},
                          const std::string& overlay_column = "reference_density");

nlohmann::json summary_json(const Summary& s);

/// Output files of one run. Nothing touches the disk until commit(), so a
/// failed run leaves no partial results behind.
class OutputSet {
 public:
  void add(std::string name, std::string content);
  void add_json(std::string name, const nlohmann::json& j);

  /// Writes every file into dir (created if needed), then the run manifest
  /// `<command>.manifest.json` listing them.
  void commit(const std::string& dir, const std::string& command, nlohmann::json manifest) const;

  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace prealign::io
