#include "daas/controlplane/http_server.hpp"

#include <httplib.h>

#include "daas/core/error.hpp"
#include "daas/core/wire.hpp"

namespace daas::controlplane {

namespace {

constexpr auto kJson = "application/json";

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Rejected:
    case ErrorCode::NotReady:
    case ErrorCode::DuplicateId:
    case ErrorCode::IllegalTransition: return 409;
    case ErrorCode::Placement:
    case ErrorCode::Configuration: return 422;
    default: return 400;
  }
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  Json body{{"error", to_string(e.code())}, {"message", e.what()}};
  if (!e.path().empty()) body["path"] = e.path();
  send_json(res, status_for(e.code()), body);
}

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("malformed JSON: ") + e.what(), "/");
  }
}

// Wraps a handler so that runtime errors become structured responses.
template <typename F>
httplib::Server::Handler guarded(F fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_json(res, 500, Json{{"error", "internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

HttpServer::HttpServer(MissionService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto& srv = *server_;

  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Post("/missions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const MissionHandle h = service_.start_mission(parse_body(req));
    send_json(res, 201, Json{{"mission_id", h.mission_id}, {"status", navigation::to_string(h.status)}});
  }));

  srv.Get("/missions", guarded([this](const httplib::Request&, httplib::Response& res) {
    Json out = Json::array();
    for (const auto& h : service_.list()) {
      out.push_back(Json{{"mission_id", h.mission_id},
                         {"scenario", h.scenario},
                         {"status", navigation::to_string(h.status)}});
    }
    send_json(res, 200, out);
  }));

  srv.Get("/missions/:id/state", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, to_json(service_.get_state(req.path_params.at("id"))));
  }));

  srv.Get("/missions/:id/queue", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, to_json(service_.get_queue(req.path_params.at("id"))));
  }));

  srv.Post("/missions/:id/commands", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.path_params.at("id");
    service_.handle(id);
    ControlCommand cmd = navigation::parse_control_command(parse_body(req));
    auto future = service_.submit_command(id, std::move(cmd));
    if (future.wait_for(std::chrono::seconds(10)) != std::future_status::ready) {
      send_json(res, 504, Json{{"error", "timeout"}, {"message", "command was not applied within 10 s"}});
      return;
    }
    const CommandAck ack = future.get();
    send_json(res, ack.accepted ? 200 : 409, to_json(ack));
  }));

  srv.Get("/missions/:id/telemetry", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto sub = std::make_shared<Subscription>(service_.stream_telemetry(req.path_params.at("id")));
    res.set_chunked_content_provider("application/x-ndjson", [sub](std::size_t, httplib::DataSink& sink) {
      while (true) {
        if (!sink.is_writable()) return false;
        auto line = sub->next(std::chrono::milliseconds(250));
        if (line) {
          line->push_back('\n');
          return sink.write(line->data(), line->size());
        }
        if (sub->ended()) {
          sink.done();
          return true;
        }
      }
    });
  }));

  srv.Get("/missions/:id/overhead", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const bool samples = req.get_param_value("samples") != "false";
    send_json(res, 200, to_json(service_.overhead_report(req.path_params.at("id")), samples));
  }));
}

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::Configuration, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::serve(const std::string& host, int port) {
  if (!server_->listen(host, port)) {
    throw Error(ErrorCode::Configuration, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace daas::controlplane
