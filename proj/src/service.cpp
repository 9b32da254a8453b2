#include "mcds/service.hpp"

#include "mcds/error.hpp"
#include "mcds/evaluation.hpp"
#include "mcds/persistence.hpp"

#include "httplib.h"

#include <cstdlib>
#include <sstream>

namespace mcds {

namespace {

using httplib::Request;
using httplib::Response;

json parse_body(const Request& req) {
    if (req.body.empty()) return json::object();
    try {
        auto j = json::parse(req.body);
        if (!j.is_object()) throw error(errc::bad_request, "request body must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw error(errc::bad_request, std::string("request body is not valid JSON: ") + e.what());
    }
}

std::optional<std::size_t> positive_count(const json& body, const char* key) {
    const auto v = optional_field<long long>(body, key);
    if (!v) return std::nullopt;
    if (*v < 1) throw error(errc::argument_error, std::string(key) + " must be >= 1");
    return static_cast<std::size_t>(*v);
}

std::optional<std::size_t> count(const json& body, const char* key) {
    const auto v = optional_field<long long>(body, key);
    if (!v) return std::nullopt;
    if (*v < 0) throw error(errc::argument_error, std::string(key) + " must be >= 0");
    return static_cast<std::size_t>(*v);
}

json stats(const case_base& cb, const vdm_model& model) {
    const auto counts = cb.class_counts();
    return json{{"version", cb.version()},
                {"size", cb.size()},
                {"class_counts", {{"0", counts[0]}, {"1", counts[1]}}},
                {"model_version", model.train_version()},
                {"schema", cb.schema()}};
}

}  // namespace

http_service::http_service(service_config config) : config_(std::move(config)) {
    if (config_.casebase_path.empty()) {
        throw error(errc::argument_error, "no case-base path configured");
    }
    auto loaded = open_case_base(config_.casebase_path);
    engine_ = std::make_unique<session_engine>(std::move(loaded.cb), config_.engine,
                                               std::move(loaded.model));
    engine_->recover();
    install_routes();
}

http_service::http_service(case_base cb, service_config config, std::optional<vdm_model> model)
    : config_(std::move(config)),
      engine_(std::make_unique<session_engine>(std::move(cb), config_.engine, std::move(model))) {
    engine_->recover();
    install_routes();
}

http_service::~http_service() { stop(); }

int http_service::bind() {
    if (config_.port == 0) {
        port_ = server_->bind_to_any_port(config_.host);
        if (port_ <= 0) throw error(errc::io_error, "cannot bind " + config_.host);
    } else {
        if (!server_->bind_to_port(config_.host, config_.port)) {
            throw error(errc::io_error, "cannot bind " + config_.host + ":" +
                                            std::to_string(config_.port));
        }
        port_ = config_.port;
    }
    return port_;
}

void http_service::listen() { server_->listen_after_bind(); }

int http_service::start() {
    const int p = bind();
    thread_ = std::thread([this] { listen(); });
    server_->wait_until_ready();
    return p;
}

void http_service::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

void http_service::install_routes() {
    server_ = std::make_unique<httplib::Server>();
    auto& srv = *server_;

    // httplib defaults to SO_REUSEPORT, which lets a second instance share the port
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });

    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type, X-Request-Id"}});
    srv.Options(R"(.*)", [](const Request&, Response& res) { res.status = 204; });

    using handler = std::function<json(const Request&, Response&)>;
    const auto wrap = [this](handler fn) {
        return [this, fn = std::move(fn)](const Request& req, Response& res) {
            json envelope;
            envelope["request_id"] = req.has_header("X-Request-Id")
                                         ? req.get_header_value("X-Request-Id")
                                         : "req-" + std::to_string(++requests_);
            const auto fail = [&](errc code, const std::string& message,
                                  const std::vector<std::string>& details) {
                res.status = http_status(code);
                envelope["error"] = {
                    {"code", to_string(code)}, {"message", message}, {"details", details}};
            };
            try {
                res.status = 200;
                envelope["payload"] = fn(req, res);
            } catch (const error& e) {
                fail(e.code(), e.what(), e.details());
            } catch (const json::exception& e) {
                fail(errc::bad_request, e.what(), {});
            } catch (const std::exception& e) {
                fail(errc::internal_error, e.what(), {});
            }
            res.set_content(envelope.dump(), "application/json");
        };
    };

    srv.Get("/health", wrap([this](const Request&, Response&) {
        auto j = stats(*engine_->casebase(), *engine_->model());
        j["status"] = "ok";
        return j;
    }));

    srv.Get("/casebase/stats", wrap([this](const Request&, Response&) {
        auto j = stats(*engine_->casebase(), *engine_->model());
        j["refits"] = engine_->refit_count();
        return j;
    }));

    srv.Get("/rules", wrap([this](const Request& req, Response&) {
        double min_support = 0.0;
        if (req.has_param("min_support")) {
            char* end = nullptr;
            const auto text = req.get_param_value("min_support");
            min_support = std::strtod(text.c_str(), &end);
            if (end == text.c_str() || *end != '\0') {
                throw error(errc::bad_request, "min_support must be a number");
            }
        }
        return json(engine_->rules(min_support));
    }));

    srv.Get("/sessions", wrap([this](const Request&, Response&) {
        json out = json::array();
        for (const auto& s : engine_->sessions()) out.push_back(s);
        return out;
    }));

    srv.Post("/sessions", wrap([this](const Request& req, Response& res) {
        const auto body = parse_body(req);
        auto session = engine_->open(
            required<std::vector<double>>(body, "descriptors"),
            optional_field<std::vector<std::string>>(body, "physician_actions").value_or(
                std::vector<std::string>{}),
            optional_field<electre_config>(body, "criteria_config"));
        res.status = 201;
        return json(session);
    }));

    srv.Get(R"(/sessions/([^/]+))", wrap([this](const Request& req, Response&) {
        return json(engine_->get(req.matches[1]));
    }));

    srv.Post(R"(/sessions/([^/]+)/retrieve)", wrap([this](const Request& req, Response&) {
        const auto body = parse_body(req);
        return json(engine_->retrieve(req.matches[1], positive_count(body, "k"),
                                      optional_field<double>(body, "radius")));
    }));

    srv.Put(R"(/sessions/([^/]+)/assessment)", wrap([this](const Request& req, Response&) {
        const auto body = parse_body(req);
        return json(engine_->assess(
            req.matches[1],
            optional_field<level_assignments>(body, "cells").value_or(level_assignments{}),
            optional_field<electre_config>(body, "criteria_config")));
    }));

    srv.Post(R"(/sessions/([^/]+)/design)", wrap([this](const Request& req, Response&) {
        return json(engine_->design(req.matches[1]));
    }));

    srv.Post(R"(/sessions/([^/]+)/choice)", wrap([this](const Request& req, Response&) {
        const auto body = parse_body(req);
        return json(engine_->choose(req.matches[1], required<std::string>(body, "action")));
    }));

    srv.Post(R"(/sessions/([^/]+)/review)", wrap([this](const Request& req, Response&) {
        const auto body = parse_body(req);
        const auto text = required<std::string>(body, "verdict");
        const auto verdict = parse_review_verdict(text);
        if (!verdict) throw error(errc::bad_request, "unknown verdict '" + text + "'");
        return json(engine_->review(req.matches[1], *verdict,
                                    optional_field<std::string>(body, "revised_action")));
    }));

    srv.Post(R"(/sessions/([^/]+)/retain)", wrap([this](const Request& req, Response&) {
        const auto body = parse_body(req);
        auto session = engine_->retain(req.matches[1], optional_field<diagnosis>(body, "diagnosis"));
        json j = session;
        j["casebase"] = stats(*engine_->casebase(), *engine_->model());
        return j;
    }));

    srv.Post("/experiment", wrap([this](const Request& req, Response&) {
        const auto body = parse_body(req);
        const auto cb = engine_->casebase();
        experiment_options opts;
        opts.vdm = config_.engine.vdm;
        const auto report = run_split_experiment(
            *cb, positive_count(body, "train_size").value_or(default_train_size),
            count(body, "probes_pos").value_or(default_probes_per_class),
            count(body, "probes_neg").value_or(default_probes_per_class),
            positive_count(body, "k").value_or(config_.engine.k),
            optional_field<std::uint64_t>(body, "seed").value_or(0), opts);
        std::ostringstream out;
        emit_report(report, report_format::structured, out);
        return json::parse(out.str());
    }));

    srv.Post("/electre/solve", wrap([this](const Request& req, Response&) {
        const auto body = parse_body(req);
        const auto actions = required<std::vector<std::string>>(body, "actions");
        const auto config =
            optional_field<electre_config>(body, "criteria_config").value_or(config_.engine.criteria);
        const auto levels = required<level_assignments>(body, "assessment");
        const auto table = encode_performance(actions, config.criteria, levels);
        const auto graph = build_outranking(table, config.c_hat, config.d_hat, config.normalization);
        return json{{"kernel", extract_kernel(graph)}, {"graph", graph}};
    }));
}

}  // namespace mcds
