#pragma once

// Session-scoped HTTP/JSON facade: medial axes, isovist and bucket queries,
// and step-wise reduction.

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

namespace axialgen {

struct Response {
  int status = 200;
  std::string body;  // JSON, empty for 204
};

// Transport-independent request handling. Bodies are JSON text; errors come
// back as {"code", "message"}.
class Service {
 public:
  Service();
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // {"map": GeoJSON | "wkt": text, "cell_size"?: number}
  Response create_session(const std::string& body);
  Response medial(const std::string& id);
  Response isovist(const std::string& id, const std::string& body);  // {"point": [x, y]}
  Response bucket(const std::string& id, const std::string& body);   // {"segment": [[x,y],[x,y]]}
  // {"strategy", "threshold"?, "step"?}; step n replays an earlier step.
  Response step(const std::string& id, const std::string& body);
  Response axial(const std::string& id);

  std::size_t session_count() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// cpp-httplib server around a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  void run();  // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace axialgen
