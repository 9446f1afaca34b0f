#include "prealign/io/output.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>

#include "prealign/errors.hpp"

namespace prealign::io {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf.data(), end);
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw Error("CSV row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string histogram_csv(const Histogram& h, const std::string& value_column,
                          const std::function<double(double)>& overlay, const std::string& overlay_column) {
  std::vector<std::string> header{value_column + "_lo", value_column + "_hi", value_column + "_center", "mass",
                                  "density"};
  if (overlay) header.push_back(overlay_column);
  CsvTable t(header);
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double lo = h.left_edge(i);
    const double hi = i + 1 == h.bins() ? h.hi : h.left_edge(i + 1);
    std::vector<double> row{lo, hi, h.center(i), h.mass[i], h.density(i)};
    if (overlay) row.push_back(overlay(h.center(i)));
    t.add_row(row);
  }
  return t.str();
}

nlohmann::json summary_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean},     {"std", s.stddev}, {"min", s.min},
          {"q05", s.q05},     {"q25", s.q25},       {"median", s.median}, {"q75", s.q75},
          {"q95", s.q95},     {"max", s.max}};
}

void OutputSet::add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

void OutputSet::add_json(std::string name, const nlohmann::json& j) { add(std::move(name), j.dump(2) + "\n"); }

void OutputSet::commit(const std::string& dir, const std::string& command, nlohmann::json manifest) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << content;
    if (!out) throw Error("cannot write " + (fs::path(dir) / name).string());
  };
  nlohmann::json names = nlohmann::json::array();
  for (const auto& [name, content] : files_) {
    write(name, content);
    names.push_back(name);
  }
  manifest["outputs"] = names;
  write(command + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace prealign::io
