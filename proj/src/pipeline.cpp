#include "axialgen/pipeline.hpp"

#include <chrono>
#include <filesystem>

#include "geojson.hpp"

namespace axialgen {

using json = nlohmann::json;

void PipelineConfig::validate() const {
  try {
    ridge.validate();
    reduce.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, e.what(), e.code());
  }
  if (reduce.strategy == Strategy::LineSeeded && !seed) {
    throw Error(ErrorCode::ValidationError, "line_seeded strategy requires a seed");
  }
  if (cell_size && !(*cell_size > 0.0)) {
    throw Error(ErrorCode::ValidationError, "cell size must be positive", ErrorCode::NonPositiveCellSize);
  }
  if (input_path.empty()) throw Error(ErrorCode::ValidationError, "no input path");
}

namespace {

class Stages {
 public:
  explicit Stages(RunReport& r) : report_(r) {}

  template <class F>
  auto run(const char* name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        done(name, t0);
      } else {
        auto out = f();
        done(name, t0);
        return out;
      }
    } catch (const Error& e) {
      throw Error(e.code(), std::string(name) + ": " + e.what(), e.cause());
    }
  }

 private:
  void done(const char* name, std::chrono::steady_clock::time_point t0) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    report_.stage_seconds.emplace_back(name, dt.count());
  }
  RunReport& report_;
};

}  // namespace

RunReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.config = cfg;
  Stages stage(report);

  const FreeSpaceMap map = stage.run("load", [&] { return load_map(cfg.input_path); });
  report.cell_size = cfg.cell_size ? *cfg.cell_size : stage.run("cell size", [&] {
    return auto_cell_size(map);
  });
  const MedialAxisGraph graph =
      stage.run("medial axes", [&] { return medial_axes(map, report.cell_size); });
  report.boundary_samples = graph.samples.size();
  report.medial_vertices = graph.vertices.size();

  RidgeConfig ridge = cfg.ridge;
  if (!ridge.discretization_step) ridge.discretization_step = report.cell_size;
  AxialMap axial;
  std::vector<Ray> rays;
  if (cfg.reduce.strategy == Strategy::LineSeeded) {
    axial = stage.run("reduction", [&] {
      return axialgen_line_seeded(map, *cfg.seed, graph, ridge, cfg.reduce);
    });
    report.rays_generated = axial.stats.input_ray_count;
  } else {
    rays = stage.run("rays", [&] { return rays_from_medial(map, graph, ridge); });
    report.rays_generated = rays.size();
    axial = stage.run("reduction", [&] {
      return cfg.reduce.strategy == Strategy::Global ? reduce_global(rays, graph, map, cfg.reduce)
                                                     : reduce_search(rays, graph, map, cfg.reduce);
    });
  }
  report.lines_selected = axial.lines.size();
  report.coverage_fraction = axial.stats.coverage_fraction;

  stage.run("export", [&] {
    const std::filesystem::path dir(cfg.out_dir);
    report.files = export_axial_map(axial, cfg.out_dir, cfg.outputs);
    if (cfg.outputs.count(Output::Medial)) {
      report.files.push_back((dir / "medial.geojson").string());
      ensure_directory(cfg.out_dir);
      write_file(report.files.back(), medial_geojson(graph));
    }
    if (cfg.outputs.count(Output::Svg)) {
      ensure_directory(cfg.out_dir);
      SvgLayers layers;
      layers.medial = &graph;
      layers.buckets = &axial.buckets;
      if (!rays.empty()) layers.rays = &rays;
      layers.axial = &axial.lines;
      report.files.push_back((dir / "map.svg").string());
      write_file(report.files.back(), render_svg(map, layers));
    }
    if (cfg.outputs.count(Output::Stats)) {
      ensure_directory(cfg.out_dir);
      report.files.push_back((dir / "stats.json").string());
      write_file(report.files.back(), report_json(report));
    }
  });
  return report;
}

std::string report_json(const RunReport& r, bool with_timings) {
  const PipelineConfig& c = r.config;
  json outputs = json::array();
  for (Output o : c.outputs) outputs.push_back(to_string(o));
  json config = {
      {"input", c.input_path},
      {"cell_size", c.cell_size ? json(*c.cell_size) : json("auto")},
      {"angular_step", c.ridge.angular_step},
      {"overlap_threshold", c.reduce.overlap_threshold},
      {"strategy", to_string(c.reduce.strategy)},
      {"coverage_target", c.reduce.coverage_target},
      {"connectivity_tiebreak", c.reduce.connectivity_tiebreak},
      {"outputs", outputs},
  };
  if (c.ridge.discretization_step) config["discretization_step"] = *c.ridge.discretization_step;
  if (c.seed) {
    config["seed"] = json::array({c.seed->a.x, c.seed->a.y, c.seed->b.x, c.seed->b.y});
  }
  json out = {
      {"counts",
       {{"boundary_samples", r.boundary_samples},
        {"medial_vertices", r.medial_vertices},
        {"rays_generated", r.rays_generated},
        {"lines_selected", r.lines_selected}}},
      {"cell_size", r.cell_size},
      {"coverage_fraction", r.coverage_fraction},
      {"config", config},
  };
  if (with_timings) {
    json t = json::object();
    for (const auto& [name, s] : r.stage_seconds) t[name] = s;
    out["wall_time_s"] = t;
  }
  return out.dump(2) + "\n";
}

}  // namespace axialgen
