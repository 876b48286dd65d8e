#pragma once

// Batch driver: load, medial axes, ray generation, reduction, exports.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "axialgen/io.hpp"

namespace axialgen {

struct PipelineConfig {
  std::string input_path;
  std::optional<double> cell_size;  // unset = auto
  RidgeConfig ridge;
  ReduceConfig reduce;
  std::optional<Segment> seed;  // line_seeded only
  std::set<Output> outputs{Output::Axial, Output::Stats};
  std::string out_dir = ".";

  // ValidationError: line_seeded without a seed, cell size <= 0, bad ridge
  // or reduce settings.
  void validate() const;
};

struct RunReport {
  std::size_t boundary_samples = 0;
  std::size_t medial_vertices = 0;
  std::size_t rays_generated = 0;
  std::size_t lines_selected = 0;
  double cell_size = 0.0;
  double coverage_fraction = 0.0;
  std::vector<std::pair<std::string, double>> stage_seconds;
  PipelineConfig config;
  std::vector<std::string> files;
};

// Stage failures keep their code and get the stage name prepended.
RunReport run_pipeline(const PipelineConfig& cfg);

// Machine-readable report. Timings are left out unless asked for, so the
// file is identical across runs.
std::string report_json(const RunReport& report, bool with_timings = false);

}  // namespace axialgen
