#pragma once

#include <memory>
#include <string>
#include <thread>

#include "daas/controlplane/service.hpp"

namespace httplib {
class Server;
}

namespace daas::controlplane {

// JSON over HTTP front end for a MissionService.
//   POST /missions                  body: scenario       -> 201 {mission_id, status}
//   GET  /missions                                       -> [{mission_id, scenario, status}]
//   GET  /missions/{id}/state                            -> state view
//   GET  /missions/{id}/queue                            -> queue snapshot
//   POST /missions/{id}/commands    body: ControlCommand -> 200 ack, 409 on rejection
//   GET  /missions/{id}/telemetry                        -> newline-delimited events, replay then live
//   GET  /missions/{id}/overhead                         -> overhead report, 409 when not ready
// Errors are {"error": code, "message": text, "path": field path}.
class HttpServer {
 public:
  explicit HttpServer(MissionService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  // Serves on the calling thread until stop().
  void serve(const std::string& host, int port);
  void stop();

 private:
  void install_routes();

  MissionService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace daas::controlplane
