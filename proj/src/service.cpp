#include "axialgen/service.hpp"

#include <httplib.h>

#include <optional>
#include <random>

#include "axialgen/io.hpp"
#include "geojson.hpp"

namespace axialgen {

using json = nlohmann::json;

struct Service::Session {
  Session(FreeSpaceMap m, double cell) : map(std::move(m)), graph(medial_axes(map, cell)) {}

  std::mutex mu;
  FreeSpaceMap map;
  MedialAxisGraph graph;
  // Reduction state, created by the first step request.
  std::optional<Reducer> reducer;
  std::vector<json> history;
};

namespace {

int status_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ViewpointOutsideFreeSpace:
    case ErrorCode::PointOutsideFreeSpace:
    case ErrorCode::SeedOutsideFreeSpace:
    case ErrorCode::DegenerateBucket:
      return 422;
    case ErrorCode::IoError:
      return 500;
    default:
      return 400;
  }
}

Response error(int status, std::string_view code, const std::string& message) {
  return {status, json{{"code", code}, {"message", message}}.dump()};
}

Response error(int status, ErrorCode code, const std::string& message) {
  return error(status, to_string(code), message);
}

Response error(const Error& e) { return error(status_for(e.root_code()), e.root_code(), e.what()); }

Response ok(const json& body, int status = 200) { return {status, body.dump()}; }

json parse_body(const std::string& body) {
  try {
    json j = json::parse(body.empty() ? "{}" : body);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string new_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

json points(const std::vector<Point2>& ps) {
  json out = json::array();
  for (Point2 p : ps) out.push_back(geojson::position(p));
  return out;
}

Response unknown(const std::string& id) {
  return error(404, "SessionNotFound", "unknown session " + id);
}

}  // namespace

Service::Service() = default;
Service::~Service() = default;

std::size_t Service::session_count() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::create_session(const std::string& body) {
  try {
    const json req = parse_body(body);
    std::optional<FreeSpaceMap> map;
    if (req.contains("wkt")) {
      if (!req["wkt"].is_string()) throw Error(ErrorCode::ParseError, "wkt must be a string");
      map = parse_map(req["wkt"].get<std::string>(), MapFormat::Wkt);
    } else if (req.contains("map")) {
      map = geojson::to_map(req["map"]);
    } else {
      throw Error(ErrorCode::ParseError, "body needs \"map\" (GeoJSON) or \"wkt\"");
    }
    double cell = auto_cell_size(*map);
    if (req.contains("cell_size") && !req["cell_size"].is_null()) {
      if (!req["cell_size"].is_number()) throw Error(ErrorCode::ParseError, "cell_size must be a number");
      cell = req["cell_size"].get<double>();
      if (!(cell > 0)) throw Error(ErrorCode::NonPositiveCellSize, "cell_size must be positive");
    }
    auto s = std::make_shared<Session>(std::move(*map), cell);
    const std::string id = new_id();
    {
      std::unique_lock lock(mu_);
      sessions_[id] = s;
    }
    return ok({{"id", id},
               {"cell_size", cell},
               {"medial_vertices", s->graph.vertices.size()},
               {"medial_edges", s->graph.edges.size()}},
              201);
  } catch (const Error& e) {
    return error(400, e.root_code(), e.what());
  } catch (const json::exception& e) {
    return error(400, ErrorCode::ParseError, e.what());
  }
}

Response Service::medial(const std::string& id) {
  auto s = find(id);
  if (!s) return unknown(id);
  std::lock_guard lock(s->mu);
  return ok(geojson::medial(s->graph));
}

Response Service::isovist(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return unknown(id);
  try {
    const json req = parse_body(body);
    if (!req.contains("point")) throw Error(ErrorCode::ParseError, "body needs \"point\"");
    const Point2 p = geojson::to_point(req["point"]);
    std::lock_guard lock(s->mu);
    const Isovist iso = compute_isovist(s->map, p);
    const Ray ridge = isovist_ridge(s->map, p);
    return ok({{"viewpoint", geojson::position(p)},
               {"isovist", geojson::polygon(Polygon{iso.boundary, {}})},
               {"area", iso.area},
               {"ridge", geojson::ray_feature(ridge)}});
  } catch (const Error& e) {
    return error(e);
  } catch (const json::exception& e) {
    return error(400, ErrorCode::ParseError, e.what());
  }
}

Response Service::bucket(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return unknown(id);
  try {
    const json req = parse_body(body);
    if (!req.contains("segment")) throw Error(ErrorCode::ParseError, "body needs \"segment\"");
    const Segment seg = geojson::to_segment(req["segment"]);
    std::lock_guard lock(s->mu);
    Ray ray = cast_ray(s->map, seg.midpoint(), seg.b - seg.a);
    ray.id = -1;
    const BucketTrace trace = trace_crossings(ray, s->graph);
    const Bucket b = build_bucket(ray, trace, s->map);

    json branch = json::array(), pairs = json::array(), overlaps = json::array();
    for (const MedialVertex& v : trace.branch_points) branch.push_back(geojson::position(v.pos));
    for (const auto& [p, q] : trace.branch_associates) {
      pairs.push_back(json::array({geojson::position(p), geojson::position(q)}));
    }
    if (s->reducer) {
      const AxialMap ax = s->reducer->result();
      for (std::size_t i = 0; i < ax.lines.size(); ++i) {
        const double o = ray_bucket_overlap(ax.lines[i], b);
        overlaps.push_back({{"line_id", ax.lines[i].id},
                            {"selection_order", i},
                            {"overlap", o},
                            {"redundant", o >= ax.config.overlap_threshold}});
      }
    }
    return ok({{"ray", geojson::ray_feature(ray)},
               {"bucket", geojson::region(b.region)},
               {"area", b.area},
               {"self_overlap", ray_bucket_overlap(ray, b)},
               {"crossings", points(trace.crossings)},
               {"branch_points", branch},
               {"endpoint_associates",
                points({trace.endpoint_associates.begin(), trace.endpoint_associates.end()})},
               {"branch_associates", pairs},
               {"overlaps", overlaps}});
  } catch (const Error& e) {
    return error(e);
  } catch (const json::exception& e) {
    return error(400, ErrorCode::ParseError, e.what());
  }
}

Response Service::step(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return unknown(id);
  try {
    const json req = parse_body(body);
    ReduceConfig cfg;
    cfg.strategy = parse_strategy(req.value("strategy", "global"));
    if (cfg.strategy == Strategy::LineSeeded) {
      throw Error(ErrorCode::InvalidStrategy, "stepping supports global, bfs and dfs");
    }
    if (req.contains("threshold")) {
      if (!req["threshold"].is_number()) throw Error(ErrorCode::ParseError, "threshold must be a number");
      cfg.overlap_threshold = req["threshold"].get<double>();
    }
    cfg.validate();

    std::lock_guard lock(s->mu);
    if (!s->reducer) {
      s->reducer.emplace(rays_from_medial(s->map, s->graph), s->graph, s->map, cfg);
    } else {
      const ReduceConfig& cur = s->reducer->config();
      if (cur.strategy != cfg.strategy || cur.overlap_threshold != cfg.overlap_threshold) {
        return error(409, ErrorCode::InvalidStrategy,
                     "reduction already running with " + to_string(cur.strategy));
      }
    }
    const std::size_t done = s->history.size();
    std::size_t want = done + 1;
    if (req.contains("step")) {
      if (!req["step"].is_number_integer() || req["step"].get<long long>() < 1) {
        throw Error(ErrorCode::ParseError, "step must be a positive integer");
      }
      want = req["step"].get<std::size_t>();
    }
    if (want <= done) return ok(s->history[want - 1]);
    if (want > done + 1) {
      return error(409, "StepOutOfOrder", "next step is " + std::to_string(done + 1));
    }
    const auto r = s->reducer->step();
    if (!r) return {204, ""};
    json removed = json::array();
    for (int rid : r->removed) removed.push_back(rid);
    s->history.push_back({{"step", want},
                          {"line", geojson::ray_feature(r->line)},
                          {"bucket", geojson::region(r->bucket.region)},
                          {"removed", removed},
                          {"remaining", r->remaining}});
    return ok(s->history.back());
  } catch (const Error& e) {
    return error(e);
  } catch (const json::exception& e) {
    return error(400, ErrorCode::ParseError, e.what());
  }
}

Response Service::axial(const std::string& id) {
  auto s = find(id);
  if (!s) return unknown(id);
  std::lock_guard lock(s->mu);
  json out = geojson::collection();
  json props = {{"steps", s->history.size()}, {"complete", false}};
  if (s->reducer) {
    const AxialMap ax = s->reducer->result();
    out = json::parse(axial_geojson(ax));
    props["strategy"] = to_string(ax.config.strategy);
    props["remaining"] = s->reducer->remaining();
    props["complete"] = s->reducer->remaining() == 0;
    props["coverage_fraction"] = ax.stats.coverage_fraction;
  }
  out["properties"] = props;
  return ok(out);
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  if (r.status != 204) res.set_content(r.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  Service& svc = impl_->service;
  httplib::Server& srv = impl_->server;
  srv.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.create_session(req.body));
  });
  srv.Get(R"(/sessions/([^/]+)/medial)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.medial(req.matches[1]));
  });
  srv.Post(R"(/sessions/([^/]+)/isovist)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.isovist(req.matches[1], req.body));
  });
  srv.Post(R"(/sessions/([^/]+)/bucket)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.bucket(req.matches[1], req.body));
  });
  srv.Post(R"(/sessions/([^/]+)/reduce/step)",
           [&svc](const httplib::Request& req, httplib::Response& res) {
             reply(res, svc.step(req.matches[1], req.body));
           });
  srv.Get(R"(/sessions/([^/]+)/axial)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.axial(req.matches[1]));
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string msg = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(json{{"code", "InternalError"}, {"message", msg}}.dump(), "application/json");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace axialgen
