#include "mcds/engine.hpp"

#include "mcds/error.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

namespace mcds {

void audit_log::append(const json& entry) {
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw error(errc::io_error, "cannot append to audit log '" + path_ + "'");
    out << entry.dump() << '\n';
    out.flush();
    if (!out) throw error(errc::io_error, "write to audit log '" + path_ + "' failed");
}

std::vector<json> audit_log::read_all() const {
    std::lock_guard lock(mutex_);
    std::vector<json> out;
    std::ifstream in(path_, std::ios::binary);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception&) {
            // a torn final line from a crash mid-write; everything before it is intact
            break;
        }
    }
    return out;
}

session_engine::session_engine(case_base cb, engine_config config, std::optional<vdm_model> model)
    : config_(std::move(config)) {
    if (!config_.audit_log_path.empty()) log_ = std::make_unique<audit_log>(config_.audit_log_path);
    if (!cb.is_discretized()) cb = discretize(cb, pima_schema());
    const bool usable = model && model->train_version() == cb.version() &&
                        cb.bins() && model->bins() == *cb.bins();
    model_ = std::make_shared<const vdm_model>(usable ? *model : fit_vdm(cb, config_.vdm));
    cb_ = std::make_shared<const case_base>(std::move(cb));
}

std::shared_ptr<const case_base> session_engine::casebase() const {
    std::shared_lock lock(snapshot_mutex_);
    return cb_;
}

std::shared_ptr<const vdm_model> session_engine::model() const {
    std::shared_lock lock(snapshot_mutex_);
    return model_;
}

std::size_t session_engine::refit_count() const {
    std::shared_lock lock(snapshot_mutex_);
    return refits_;
}

std::string session_engine::now() const {
    if (config_.clock) return config_.clock();
    const auto t = std::chrono::system_clock::now();
    const std::time_t secs = std::chrono::system_clock::to_time_t(t);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()) % 1000;
    std::tm utc{};
    gmtime_r(&secs, &utc);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &utc);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms.count()));
    return out;
}

void session_engine::log(const std::string& command, const json& inputs,
                         const decision_session& before, const decision_session& after) {
    if (!log_) return;
    json entry;
    entry["timestamp"] = now();
    entry["session_id"] = after.id;
    entry["command"] = command;
    if (before.state != after.state || command == "open") {
        entry["transition"] = {{"from", command == "open" ? json(nullptr)
                                                          : json(to_string(before.state))},
                               {"to", to_string(after.state)}};
    } else {
        entry["transition"] = nullptr;
    }
    entry["inputs"] = inputs;
    entry["session"] = after;
    log_->append(entry);
}

std::shared_ptr<session_engine::slot> session_engine::find_slot(const std::string& id) const {
    std::lock_guard lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw error(errc::not_found, "no session '" + id + "'");
    return it->second;
}

template <typename Fn>
decision_session session_engine::run(const std::string& id, const std::string& command,
                                     const json& inputs, Fn&& fn) {
    const auto s = find_slot(id);
    std::lock_guard lock(s->mutex);
    decision_session next = fn(s->session);
    log(command, inputs, s->session, next);
    s->session = next;
    return next;
}

decision_session session_engine::open(std::vector<double> descriptors,
                                      std::vector<std::string> physician_actions,
                                      std::optional<electre_config> criteria) {
    std::string id;
    {
        std::lock_guard lock(sessions_mutex_);
        char buf[24];
        std::snprintf(buf, sizeof buf, "S%06zu", next_session_++);
        id = buf;
    }
    json inputs{{"descriptors", descriptors}, {"physician_actions", physician_actions}};
    auto session = open_session(id, descriptors, std::move(physician_actions),
                                criteria ? std::move(*criteria) : config_.criteria);
    {
        std::lock_guard lock(sessions_mutex_);
        auto s = std::make_shared<slot>();
        s->session = session;
        sessions_.emplace(id, std::move(s));
    }
    log("open", inputs, session, session);
    return session;
}

decision_session session_engine::get(const std::string& id) const {
    const auto s = find_slot(id);
    std::lock_guard lock(s->mutex);
    return s->session;
}

std::vector<decision_session> session_engine::sessions() const {
    std::vector<std::shared_ptr<slot>> slots;
    {
        std::lock_guard lock(sessions_mutex_);
        for (const auto& [id, s] : sessions_) slots.push_back(s);
    }
    std::vector<decision_session> out;
    for (const auto& s : slots) {
        std::lock_guard lock(s->mutex);
        out.push_back(s->session);
    }
    return out;
}

decision_session session_engine::retrieve(const std::string& id, std::optional<std::size_t> k,
                                          std::optional<double> radius) {
    const auto kk = k.value_or(config_.k);
    const auto rr = radius.value_or(config_.radius);
    const auto s = find_slot(id);
    std::lock_guard lock(s->mutex);

    std::shared_ptr<const case_base> cb;
    std::shared_ptr<const vdm_model> model;
    {
        std::shared_lock snap(snapshot_mutex_);
        cb = cb_;
        model = model_;
    }
    const json inputs{{"k", kk}, {"radius", rr}};
    auto retrieved = rapprochement(s->session, *model, *cb, kk, rr);
    try {
        retrieved = pool_candidate_actions(retrieved);
    } catch (const error&) {
        log("retrieve", inputs, s->session, retrieved);
        s->session = retrieved;
        throw;
    }
    log("retrieve", inputs, s->session, retrieved);
    s->session = retrieved;
    return retrieved;
}

decision_session session_engine::assess(const std::string& id, const level_assignments& cells,
                                        const std::optional<electre_config>& criteria) {
    json inputs{{"cells", cells}};
    if (criteria) inputs["criteria_config"] = *criteria;
    return run(id, "assess", inputs,
               [&](const decision_session& s) { return mcds::assess(s, cells, criteria); });
}

decision_session session_engine::design(const std::string& id) {
    return run(id, "design", json::object(),
               [](const decision_session& s) { return mcds::design(s); });
}

decision_session session_engine::choose(const std::string& id, const std::string& action) {
    return run(id, "choice", json{{"action", action}},
               [&](const decision_session& s) { return record_choice(s, action); });
}

decision_session session_engine::review(const std::string& id, review_verdict verdict,
                                        const std::optional<std::string>& revised_action) {
    json inputs{{"verdict", to_string(verdict)}};
    inputs["revised_action"] = revised_action ? json(*revised_action) : json(nullptr);
    return run(id, "review", inputs, [&](const decision_session& s) {
        return mcds::review(s, verdict, revised_action);
    });
}

decision_session session_engine::retain(const std::string& id, std::optional<diagnosis> dx) {
    json inputs;
    inputs["diagnosis"] = dx ? json(*dx) : json(nullptr);
    return run(id, "retain", inputs, [&](const decision_session& s) {
        std::lock_guard writer(writer_);
        auto result = adapt_and_retain(s, *casebase(), dx);
        auto refit = std::make_shared<const vdm_model>(fit_vdm(result.cb, config_.vdm));
        auto next_cb = std::make_shared<const case_base>(std::move(result.cb));
        {
            std::unique_lock snap(snapshot_mutex_);
            cb_ = std::move(next_cb);
            model_ = std::move(refit);
            ++refits_;
        }
        return result.session;
    });
}

choice_rules session_engine::rules(double min_support) const {
    return mine_choice_rules(*casebase(), min_support);
}

std::size_t session_engine::recover() {
    if (!log_) return 0;
    std::map<std::string, decision_session> latest;
    std::vector<decision_session> retained;  // first retained snapshot per session, log order
    for (const auto& entry : log_->read_all()) {
        if (!entry.contains("session") || !entry.at("session").is_object()) continue;
        auto s = entry.at("session").get<decision_session>();
        const bool seen = latest.contains(s.id) && latest.at(s.id).state == session_state::retained;
        if (s.state == session_state::retained && !seen) retained.push_back(s);
        latest[s.id] = std::move(s);
    }

    std::lock_guard writer(writer_);
    auto cb = *casebase();
    bool changed = false;
    for (const auto& s : retained) {
        if (!s.retained_case_id || cb.contains(*s.retained_case_id)) continue;
        case_record c;
        c.id = *s.retained_case_id;
        c.descriptors = s.patient.descriptors;
        c.actions = {*s.chosen_action};
        c.dx = s.retained_diagnosis;
        cb = retain_case(cb, c);
        changed = true;
    }
    if (changed) {
        auto refit = std::make_shared<const vdm_model>(fit_vdm(cb, config_.vdm));
        std::unique_lock snap(snapshot_mutex_);
        cb_ = std::make_shared<const case_base>(std::move(cb));
        model_ = std::move(refit);
        ++refits_;
    }

    std::size_t restored = 0;
    std::lock_guard lock(sessions_mutex_);
    for (auto& [key, s] : latest) {
        if (s.id.size() > 1 && s.id[0] == 'S') {
            const auto n = static_cast<std::size_t>(std::strtoull(s.id.c_str() + 1, nullptr, 10));
            next_session_ = std::max(next_session_, n + 1);
        }
        auto sl = std::make_shared<slot>();
        sl->session = std::move(s);
        sessions_[key] = std::move(sl);
        ++restored;
    }
    return restored;
}

}  // namespace mcds
