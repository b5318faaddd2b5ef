//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_IO_HPP
#define EGD_IO_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "egd/error.hpp"
#include "egd/evolution.hpp"

namespace egd {

/// Shortest round-trip decimal form; keeps CSV output byte-stable.
inline std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

inline void write_text_file(const std::string &path,
                            const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
}

inline std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Long-format experiment metrics: experiment, seed, generation, metric,
/// value. Header emitted once.
inline std::string metrics_csv_header() {
  return "experiment,seed,generation,metric,value\n";
}

inline void append_metrics_csv(std::string &csv, const std::string &experiment,
                               std::uint64_t seed,
                               const std::vector<MetricRow> &rows) {
  for (const auto &row : rows) {
    csv += experiment;
    csv += ',';
    csv += std::to_string(seed);
    csv += ',';
    csv += std::to_string(row.generation);
    csv += ',';
    csv += row.metric;
    csv += ',';
    csv += format_double(row.value);
    csv += '\n';
  }
}

/// Per-individual fitness rows: generation, index, objectives..., cv,
/// scalar_fitness, spea2_fitness, feasible.
inline std::string individuals_csv(
    const std::vector<std::pair<int, const Population *>> &generations,
    std::size_t objective_count) {
  std::string csv = "generation,index";
  for (std::size_t k = 0; k < objective_count; ++k) {
    csv += ",objective_" + std::to_string(k);
  }
  csv += ",cv,scalar_fitness,spea2_fitness,feasible\n";
  for (const auto &[generation, population] : generations) {
    for (std::size_t i = 0; i < population->size(); ++i) {
      const FitnessRecord &rec = (*population)[i].fitness;
      csv += std::to_string(generation);
      csv += ',';
      csv += std::to_string(i);
      for (double v : rec.objectives) {
        csv += ',';
        csv += format_double(v);
      }
      csv += ',';
      csv += format_double(rec.cv);
      csv += ',';
      csv += format_double(rec.scalar_fitness);
      csv += ',';
      csv += format_double(rec.spea2_fitness);
      csv += ',';
      csv += rec.feasible ? "1" : "0";
      csv += '\n';
    }
  }
  return csv;
}

/// Final Pareto front points (multi mode).
inline std::string front_csv(const std::vector<FitnessRecord> &front,
                             const std::vector<std::string> &names) {
  std::string csv;
  for (std::size_t k = 0; k < names.size(); ++k) {
    csv += k == 0 ? "" : ",";
    csv += names[k];
  }
  csv += ",feasible\n";
  for (const auto &rec : front) {
    for (std::size_t k = 0; k < rec.objectives.size(); ++k) {
      if (k) csv += ',';
      csv += format_double(rec.objectives[k]);
    }
    csv += ',';
    csv += rec.feasible ? "1" : "0";
    csv += '\n';
  }
  return csv;
}

}  // namespace egd

#endif  // EGD_IO_HPP
