/**
 * @file engine.hpp
 * @brief Live session registry with case-base snapshots and an audit log
 *
 * Commands on one session are serialized by that session's mutex; distinct
 * sessions run concurrently. The case-base and the fitted model are
 * published as immutable snapshots: retrieval reads whichever snapshot is
 * current, and retention (append + refit) is serialized through a single
 * writer.
 *
 * Every command is appended to the audit log as one JSON line carrying the
 * full session after the command, so recover() can rebuild in-flight
 * sessions and re-apply retained cases after a restart.
 */

#pragma once

#include "mcds/json_io.hpp"
#include "mcds/pipeline.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace mcds {

struct engine_config {
    std::size_t k{default_k};
    double radius{default_acceptance_radius};
    electre_config criteria{therapy_criteria()};
    vdm_options vdm;
    std::string audit_log_path;           ///< empty: no log file
    std::function<std::string()> clock;   ///< empty: current UTC time, ISO 8601
};

/// Append-only JSON-lines file.
class audit_log {
public:
    explicit audit_log(std::string path) : path_(std::move(path)) {}

    void append(const json& entry);
    [[nodiscard]] std::vector<json> read_all() const;
    [[nodiscard]] const std::string& path() const { return path_; }

private:
    std::string path_;
    mutable std::mutex mutex_;
};

class session_engine {
public:
    /// Discretizes cb with the default schema when it has no bins, and fits
    /// the model unless a matching one is supplied.
    session_engine(case_base cb, engine_config config, std::optional<vdm_model> model = {});

    [[nodiscard]] std::shared_ptr<const case_base> casebase() const;
    [[nodiscard]] std::shared_ptr<const vdm_model> model() const;
    [[nodiscard]] const engine_config& config() const { return config_; }
    [[nodiscard]] std::size_t refit_count() const;

    decision_session open(std::vector<double> descriptors,
                          std::vector<std::string> physician_actions,
                          std::optional<electre_config> criteria = {});
    [[nodiscard]] decision_session get(const std::string& id) const;
    [[nodiscard]] std::vector<decision_session> sessions() const;

    /// rapprochement + pool_candidate_actions. When pooling finds nothing the
    /// session is still left in the retrieved state and no_candidates is thrown.
    decision_session retrieve(const std::string& id, std::optional<std::size_t> k = {},
                              std::optional<double> radius = {});
    decision_session assess(const std::string& id, const level_assignments& cells,
                            const std::optional<electre_config>& criteria = {});
    decision_session design(const std::string& id);
    decision_session choose(const std::string& id, const std::string& action);
    decision_session review(const std::string& id, review_verdict verdict,
                            const std::optional<std::string>& revised_action = {});
    /// Appends the case and refits the model before returning.
    decision_session retain(const std::string& id, std::optional<diagnosis> dx);

    [[nodiscard]] choice_rules rules(double min_support) const;

    /// Replays the audit log; returns the number of sessions restored.
    std::size_t recover();

private:
    struct slot {
        std::mutex mutex;
        decision_session session;
    };

    [[nodiscard]] std::shared_ptr<slot> find_slot(const std::string& id) const;
    void log(const std::string& command, const json& inputs, const decision_session& before,
             const decision_session& after);
    [[nodiscard]] std::string now() const;
    template <typename Fn>
    decision_session run(const std::string& id, const std::string& command, const json& inputs,
                         Fn&& fn);

    engine_config config_;
    std::unique_ptr<audit_log> log_;

    mutable std::shared_mutex snapshot_mutex_;
    std::shared_ptr<const case_base> cb_;
    std::shared_ptr<const vdm_model> model_;
    std::size_t refits_{0};
    std::mutex writer_;

    mutable std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<slot>> sessions_;
    std::size_t next_session_{1};
};

}  // namespace mcds
