/**
 * @file service.hpp
 * @brief HTTP/JSON front end over session_engine
 *
 * Every response body is an envelope
 *
 *   {"request_id": "...", "payload": {...}}                    on success
 *   {"request_id": "...", "error": {"code", "message", "details"}}  on failure
 *
 * where code is the wire name of an mcds::errc and the HTTP status is
 * http_status(code). The request id echoes the X-Request-Id header when
 * the client sends one.
 */

#pragma once

#include "mcds/engine.hpp"

#include <atomic>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace mcds {

struct service_config {
    std::string host{"127.0.0.1"};
    int port{8080};  ///< 0 picks a free port
    std::string casebase_path;
    engine_config engine;
};

class http_service {
public:
    /// Loads the case-base named in config (CSV or persisted JSON). A missing,
    /// corrupt or stale file is a startup error.
    explicit http_service(service_config config);
    http_service(case_base cb, service_config config, std::optional<vdm_model> model = {});
    ~http_service();

    http_service(const http_service&) = delete;
    http_service& operator=(const http_service&) = delete;

    /// Binds the listening socket; throws io_error on failure. Returns the port.
    int bind();
    /// Serves on the bound socket until stop(); blocks.
    void listen();
    /// bind() + listen() on a background thread.
    int start();
    void stop();

    [[nodiscard]] session_engine& engine() { return *engine_; }
    [[nodiscard]] int port() const { return port_; }

private:
    void install_routes();

    service_config config_;
    std::unique_ptr<session_engine> engine_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::atomic<std::uint64_t> requests_{0};
    int port_{0};
};

}  // namespace mcds
