/**
 * @file pipeline.hpp
 * @brief Decision sessions: information, retrieval, design, choice, review, retention
 *
 * A session moves strictly forward through
 *
 *   information -> retrieved -> designed -> chosen -> reviewed -> retained
 *
 * Every operation below takes a session by const reference and returns the
 * next session value; nothing is mutated in place. session_engine (in
 * engine.hpp) owns live sessions, the case-base snapshot and the audit log.
 */

#pragma once

#include "mcds/casebase.hpp"
#include "mcds/electre.hpp"
#include "mcds/similarity.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcds {

inline constexpr std::size_t default_k = 5;
/// One maximally different attribute at q = 1.
inline constexpr double default_acceptance_radius = 2.0;

enum class session_state { information, retrieved, designed, chosen, reviewed, retained };

[[nodiscard]] std::string_view to_string(session_state s);
[[nodiscard]] std::optional<session_state> parse_session_state(std::string_view s);

/// True only for the single forward edge out of `from`.
[[nodiscard]] bool is_forward_edge(session_state from, session_state to);

enum class review_verdict { accepted, revised, rejected };

[[nodiscard]] std::string_view to_string(review_verdict v);
[[nodiscard]] std::optional<review_verdict> parse_review_verdict(std::string_view s);

struct transition_record {
    session_state from{};
    session_state to{};
    std::string command;

    bool operator==(const transition_record&) const = default;
};

struct session_neighbor {
    neighbor match;
    bool within_radius{false};
    diagnosis dx{diagnosis::negative};
    std::vector<std::string> actions;

    bool operator==(const session_neighbor&) const = default;
};

struct decision_session {
    std::string id;
    case_record patient;  ///< may be undiagnosed
    std::vector<session_neighbor> neighbors;
    std::vector<std::string> physician_actions;
    std::vector<std::string> pooled_actions;
    electre_config criteria_config;
    level_assignments performance_input;
    std::optional<kernel> proposal;
    std::optional<outranking_graph> graph;
    std::optional<std::string> chosen_action;
    bool override_flag{false};
    std::optional<review_verdict> review;
    std::optional<diagnosis> retained_diagnosis;
    std::optional<std::string> retained_case_id;
    session_state state{session_state::information};
    std::vector<transition_record> audit;

    bool operator==(const decision_session&) const;
};

[[nodiscard]] decision_session open_session(std::string id, std::span<const double> descriptors,
                                            std::vector<std::string> physician_actions,
                                            electre_config criteria_config);

/// Retrieves the k nearest cases. Only neighbors at distance <= radius
/// contribute actions; when none qualifies the case is treated as new.
[[nodiscard]] decision_session rapprochement(const decision_session& session,
                                             const vdm_model& model, const case_base& cb,
                                             std::size_t k,
                                             double radius = default_acceptance_radius);

/// Neighbor actions by rank (first appearance), then physician actions,
/// deduplicated. Throws no_candidates when the union is empty.
[[nodiscard]] decision_session pool_candidate_actions(const decision_session& session);

/// Merges assessment cells; allowed until the session is designed.
[[nodiscard]] decision_session assess(const decision_session& session,
                                      const level_assignments& cells,
                                      const std::optional<electre_config>& criteria_config = {});

[[nodiscard]] decision_session design(const decision_session& session);

[[nodiscard]] decision_session record_choice(const decision_session& session,
                                             std::string_view action);

[[nodiscard]] decision_session review(const decision_session& session, review_verdict verdict,
                                      const std::optional<std::string>& revised_action = {});

struct retention_result {
    case_base cb;
    case_record retained;
    decision_session session;
};

/// Null adaptation: the new case carries the session descriptors, the
/// chosen action and the confirmed diagnosis. The caller must refit the
/// model before the next retrieval (its train_version no longer matches).
[[nodiscard]] retention_result adapt_and_retain(const decision_session& session,
                                                const case_base& cb,
                                                std::optional<diagnosis> dx);

/// Actions allowed for record_choice: kernel members then physician actions.
[[nodiscard]] std::vector<std::string> allowed_choices(const decision_session& session);

// ---------------------------------------------------------------------------
// knowledge discovery baseline

struct choice_rule {
    diagnosis cls{diagnosis::negative};
    std::string action;
    double frequency{0.0};
    std::size_t support_count{0};

    bool operator==(const choice_rule&) const = default;
};

struct choice_rules {
    double min_support{0.0};
    std::vector<choice_rule> rules;  ///< by class, then descending frequency, then action

    bool operator==(const choice_rules&) const = default;
};

/// Per-class relative frequency of each recorded action; rules under
/// min_support are dropped. Advisory only, never fed into ELECTRE.
[[nodiscard]] choice_rules mine_choice_rules(const case_base& train, double min_support);

/// Overrides among retained sessions / retained sessions; nullopt when none.
[[nodiscard]] std::optional<double> override_rate(const std::vector<decision_session>& sessions);

}  // namespace mcds
