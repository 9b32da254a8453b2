#include "mcds/pipeline.hpp"

#include "mcds/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace mcds {

namespace {

constexpr std::array<std::string_view, 6> state_names{
    "information", "retrieved", "designed", "chosen", "reviewed", "retained",
};

constexpr std::array<std::string_view, 3> verdict_names{"accepted", "revised", "rejected"};

void require_state(const decision_session& s, session_state expected, std::string_view command) {
    if (s.state != expected) {
        throw error(errc::sequencing_error,
                    std::string(command) + " requires state '" + std::string(to_string(expected)) +
                        "', session '" + s.id + "' is '" + std::string(to_string(s.state)) + "'");
    }
}

decision_session advance(decision_session s, session_state to, std::string command) {
    s.audit.push_back({s.state, to, std::move(command)});
    s.state = to;
    return s;
}

bool contains(const std::vector<std::string>& v, std::string_view x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

bool is_kernel_member(const decision_session& s, std::string_view action) {
    return s.proposal && contains(s.proposal->members, action);
}

}  // namespace

std::string_view to_string(session_state s) { return state_names[static_cast<std::size_t>(s)]; }

std::optional<session_state> parse_session_state(std::string_view s) {
    for (std::size_t i = 0; i < state_names.size(); ++i) {
        if (state_names[i] == s) return static_cast<session_state>(i);
    }
    return std::nullopt;
}

bool is_forward_edge(session_state from, session_state to) {
    return static_cast<int>(to) == static_cast<int>(from) + 1;
}

std::string_view to_string(review_verdict v) { return verdict_names[static_cast<std::size_t>(v)]; }

std::optional<review_verdict> parse_review_verdict(std::string_view s) {
    for (std::size_t i = 0; i < verdict_names.size(); ++i) {
        if (verdict_names[i] == s) return static_cast<review_verdict>(i);
    }
    return std::nullopt;
}

bool decision_session::operator==(const decision_session& o) const {
    const auto graph_eq = [](const std::optional<outranking_graph>& x,
                             const std::optional<outranking_graph>& y) {
        if (x.has_value() != y.has_value()) return false;
        if (!x) return true;
        return x->actions == y->actions && x->concordance == y->concordance &&
               x->discordance == y->discordance && x->c_hat == y->c_hat &&
               x->d_hat == y->d_hat && x->edges == y->edges;
    };
    return id == o.id && patient == o.patient && neighbors == o.neighbors &&
           physician_actions == o.physician_actions && pooled_actions == o.pooled_actions &&
           criteria_config == o.criteria_config && performance_input == o.performance_input &&
           proposal == o.proposal && graph_eq(graph, o.graph) &&
           chosen_action == o.chosen_action && override_flag == o.override_flag &&
           review == o.review && retained_diagnosis == o.retained_diagnosis &&
           retained_case_id == o.retained_case_id && state == o.state && audit == o.audit;
}

decision_session open_session(std::string id, std::span<const double> descriptors,
                              std::vector<std::string> physician_actions,
                              electre_config criteria_config) {
    for (const auto& c : criteria_config.criteria) validate_criterion(c);
    decision_session s;
    s.patient = validate_new_case(pima_schema(), descriptors, {}, std::nullopt, id);
    s.id = std::move(id);
    std::vector<std::string> unique;
    for (auto& a : physician_actions) {
        if (a.empty()) {
            throw error(errc::validation_error, "invalid case", {"actions: empty action label"});
        }
        if (!contains(unique, a)) unique.push_back(std::move(a));
    }
    s.physician_actions = std::move(unique);
    s.criteria_config = std::move(criteria_config);
    return s;
}

decision_session rapprochement(const decision_session& session, const vdm_model& model,
                               const case_base& cb, std::size_t k, double radius) {
    require_state(session, session_state::information, "retrieve");
    if (!cb.bins()) throw error(errc::state_error, "case-base is not discretized");
    if (!(radius >= 0.0)) throw error(errc::argument_error, "acceptance radius must be >= 0");

    case_record query = session.patient;
    query.discretized = cb.bins()->encode(query.descriptors);
    const auto found = retrieve_k_nearest(model, cb, query, k);

    decision_session s = session;
    s.patient.discretized = query.discretized;
    s.neighbors.clear();
    for (const auto& n : found) {
        const auto* c = cb.find(n.case_id);
        s.neighbors.push_back({n, n.distance <= radius, *c->dx, c->actions});
    }
    return advance(std::move(s), session_state::retrieved, "retrieve");
}

decision_session pool_candidate_actions(const decision_session& session) {
    require_state(session, session_state::retrieved, "pool");
    std::vector<std::string> pooled;
    for (const auto& n : session.neighbors) {
        if (!n.within_radius) continue;
        for (const auto& a : n.actions) {
            if (!contains(pooled, a)) pooled.push_back(a);
        }
    }
    for (const auto& a : session.physician_actions) {
        if (!contains(pooled, a)) pooled.push_back(a);
    }
    if (pooled.empty()) {
        throw error(errc::no_candidates,
                    "no neighbor within the acceptance radius and no physician action");
    }
    decision_session s = session;
    s.pooled_actions = std::move(pooled);
    return s;
}

decision_session assess(const decision_session& session, const level_assignments& cells,
                        const std::optional<electre_config>& criteria_config) {
    if (session.state != session_state::information && session.state != session_state::retrieved) {
        throw error(errc::sequencing_error, "assessment is closed once the session is designed");
    }
    decision_session s = session;
    if (criteria_config) {
        for (const auto& c : criteria_config->criteria) validate_criterion(c);
        s.criteria_config = *criteria_config;
    }
    for (const auto& [action, row] : cells) {
        for (const auto& [crit, label] : row) s.performance_input[action][crit] = label;
    }
    return s;
}

decision_session design(const decision_session& session) {
    require_state(session, session_state::retrieved, "design");
    if (session.pooled_actions.empty()) {
        throw error(errc::no_candidates, "no pooled actions to design with");
    }
    const auto& cfg = session.criteria_config;
    const auto table = encode_performance(session.pooled_actions, cfg.criteria,
                                          session.performance_input);
    auto graph = build_outranking(table, cfg.c_hat, cfg.d_hat, cfg.normalization);

    decision_session s = session;
    s.proposal = extract_kernel(graph);
    s.graph = std::move(graph);
    return advance(std::move(s), session_state::designed, "design");
}

std::vector<std::string> allowed_choices(const decision_session& session) {
    std::vector<std::string> out;
    if (session.proposal) out = session.proposal->members;
    for (const auto& a : session.physician_actions) {
        if (!contains(out, a)) out.push_back(a);
    }
    return out;
}

decision_session record_choice(const decision_session& session, std::string_view action) {
    require_state(session, session_state::designed, "choice");
    if (!contains(allowed_choices(session), action)) {
        throw error(errc::choice_error, "action '" + std::string(action) +
                                            "' is neither proposed nor a physician action");
    }
    decision_session s = session;
    s.chosen_action = std::string(action);
    s.override_flag = !is_kernel_member(session, action);
    return advance(std::move(s), session_state::chosen, "choice");
}

decision_session review(const decision_session& session, review_verdict verdict,
                        const std::optional<std::string>& revised_action) {
    require_state(session, session_state::chosen, "review");
    decision_session s = session;
    if (verdict == review_verdict::revised) {
        if (!revised_action || revised_action->empty()) {
            throw error(errc::argument_error, "a revised verdict needs the revised action");
        }
        if (!contains(allowed_choices(session), *revised_action)) {
            throw error(errc::choice_error, "revised action '" + *revised_action +
                                                "' is neither proposed nor a physician action");
        }
        s.chosen_action = *revised_action;
        s.override_flag = !is_kernel_member(session, *revised_action);
    }
    s.review = verdict;
    return advance(std::move(s), session_state::reviewed, "review");
}

retention_result adapt_and_retain(const decision_session& session, const case_base& cb,
                                  std::optional<diagnosis> dx) {
    if (session.state == session_state::retained) {
        throw error(errc::conflict, "session '" + session.id + "' was already retained");
    }
    require_state(session, session_state::reviewed, "retain");
    if (session.review == review_verdict::rejected) {
        throw error(errc::retention_refused, "session '" + session.id + "' was rejected at review");
    }
    if (!dx) throw error(errc::validation_error, "case cannot be retained", {"diagnosis: missing"});

    case_record c;
    c.id = "session-" + session.id;
    c.descriptors = session.patient.descriptors;
    c.actions = {*session.chosen_action};
    c.dx = dx;
    auto next = retain_case(cb, c);
    case_record stored = *next.find(c.id);

    decision_session s = session;
    s.retained_diagnosis = dx;
    s.retained_case_id = stored.id;
    s.patient.dx = dx;
    s = advance(std::move(s), session_state::retained, "retain");
    return {std::move(next), std::move(stored), std::move(s)};
}

choice_rules mine_choice_rules(const case_base& train, double min_support) {
    std::array<std::size_t, class_count> totals{};
    std::array<std::map<std::string, std::size_t>, class_count> per_class;
    for (const auto& c : train.cases()) {
        const auto k = class_index(*c.dx);
        ++totals[k];
        std::set<std::string> distinct(c.actions.begin(), c.actions.end());
        for (const auto& a : distinct) ++per_class[k][a];
    }

    choice_rules out;
    out.min_support = min_support;
    for (std::size_t k = 0; k < class_count; ++k) {
        std::vector<choice_rule> rules;
        for (const auto& [action, n] : per_class[k]) {
            const double freq = static_cast<double>(n) / static_cast<double>(totals[k]);
            if (freq >= min_support) {
                rules.push_back({static_cast<diagnosis>(k), action, freq, n});
            }
        }
        std::stable_sort(rules.begin(), rules.end(), [](const auto& x, const auto& y) {
            return x.frequency > y.frequency;
        });
        out.rules.insert(out.rules.end(), rules.begin(), rules.end());
    }
    return out;
}

std::optional<double> override_rate(const std::vector<decision_session>& sessions) {
    std::size_t retained = 0;
    std::size_t overrides = 0;
    for (const auto& s : sessions) {
        if (s.state != session_state::retained) continue;
        ++retained;
        if (s.override_flag) ++overrides;
    }
    if (retained == 0) return std::nullopt;
    return static_cast<double>(overrides) / static_cast<double>(retained);
}

}  // namespace mcds
