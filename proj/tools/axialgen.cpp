// axialgen command line: batch axial map generation plus the medial,
// isovist and bucket accessories, and the HTTP service.

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "axialgen/pipeline.hpp"
#include "axialgen/service.hpp"

using namespace axialgen;
using json = nlohmann::json;

namespace {

bool is_validation(ErrorCode c) {
  switch (c) {
    case ErrorCode::IoError:
    case ErrorCode::DegenerateBucket:
    case ErrorCode::InsufficientSamples:
      return false;
    default:
      return true;
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Session body for the service from a map file.
std::string session_body(const std::string& path, const std::string& cell) {
  json body;
  const std::string text = read_text(path);
  if (format_for_path(path) == MapFormat::Wkt) {
    body["wkt"] = text;
  } else {
    try {
      body["map"] = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
  }
  if (cell != "auto") body["cell_size"] = std::stod(cell);
  return body.dump();
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell == "auto") return std::nullopt;
  try {
    return std::stod(cell);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ValidationError, "cell size must be 'auto' or a number");
  }
}

int finish(const Response& r) {
  if (r.status / 100 == 2) {
    std::cout << r.body << "\n";
    return 0;
  }
  std::cerr << r.body << "\n";
  return r.status >= 500 ? 1 : 2;
}

HttpServer* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axial map generation from a polygon with holes"};
  app.require_subcommand(1);

  std::string input, cell = "auto", strategy = "global", out_dir;
  std::vector<double> seed, at, ray;
  double overlap = 0.85, angular = 1.0;
  std::vector<std::string> emit{"axial", "medial", "svg", "stats"};
  std::string out_file, host = "127.0.0.1";
  int port = 8080;

  auto* run = app.add_subcommand("run", "generate an axial map");
  run->add_option("--input", input, "map file (.geojson or .wkt)")->required();
  run->add_option("--strategy", strategy, "global, bfs, dfs or line-seeded");
  run->add_option("--seed", seed, "seed line x1,y1,x2,y2 (line-seeded)")->delimiter(',')->expected(4);
  run->add_option("--cell-size", cell, "auto or a length");
  run->add_option("--overlap", overlap, "overlap threshold");
  run->add_option("--angular-step", angular, "ridge sweep step in degrees");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--emit", emit, "axial,medial,svg,stats")->delimiter(',');

  auto* medial = app.add_subcommand("medial", "medial axes as GeoJSON");
  medial->add_option("--input", input, "map file")->required();
  medial->add_option("--cell-size", cell, "auto or a length");
  medial->add_option("--out", out_file, "output file (default stdout)");

  auto* isovist = app.add_subcommand("isovist", "isovist and ridge at a point");
  isovist->add_option("--input", input, "map file")->required();
  isovist->add_option("--at", at, "viewpoint x,y")->delimiter(',')->expected(2)->required();

  auto* bucket = app.add_subcommand("bucket", "bucket of a ray");
  bucket->add_option("--input", input, "map file")->required();
  bucket->add_option("--ray", ray, "segment x1,y1,x2,y2")->delimiter(',')->expected(4)->required();
  bucket->add_option("--cell-size", cell, "auto or a length");

  auto* serve = app.add_subcommand("serve", "HTTP service");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 = any free port)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      PipelineConfig cfg;
      cfg.input_path = input;
      cfg.cell_size = parse_cell(cell);
      cfg.ridge.angular_step = angular;
      cfg.reduce.strategy = parse_strategy(strategy);
      cfg.reduce.overlap_threshold = overlap;
      if (!seed.empty()) cfg.seed = Segment({seed[0], seed[1]}, {seed[2], seed[3]});
      cfg.outputs.clear();
      for (const std::string& e : emit) cfg.outputs.insert(parse_output(e));
      cfg.out_dir = out_dir;
      const RunReport report = run_pipeline(cfg);
      std::cout << report_json(report, true);
      return 0;
    }
    Service service;
    if (*medial || *isovist || *bucket) {
      const Response created = service.create_session(session_body(input, cell));
      if (created.status != 201) return finish(created);
      const std::string id = json::parse(created.body)["id"];
      if (*isovist) return finish(service.isovist(id, json{{"point", at}}.dump()));
      if (*bucket) {
        const json seg = json::array({{ray[0], ray[1]}, {ray[2], ray[3]}});
        return finish(service.bucket(id, json{{"segment", seg}}.dump()));
      }
      const Response r = service.medial(id);
      if (out_file.empty() || r.status != 200) return finish(r);
      write_file(out_file, r.body + "\n");
      return 0;
    }
    if (*serve) {
      HttpServer server(service);
      const int bound = server.bind(host, port);
      if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "listening on " << host << ":" << bound << "\n";
      g_server = &server;
      std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
      });
      server.run();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation(e.root_code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
