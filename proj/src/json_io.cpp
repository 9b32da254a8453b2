#include "mcds/json_io.hpp"

#include "mcds/error.hpp"

namespace mcds {

namespace {

std::string_view to_string(direction d) { return d == direction::minimize ? "minimize" : "maximize"; }

direction parse_direction(const std::string& s) {
    if (s == "maximize") return direction::maximize;
    if (s == "minimize") return direction::minimize;
    throw error(errc::bad_request, "direction must be 'maximize' or 'minimize', got '" + s + "'");
}

std::string_view to_string(discordance_normalization n) {
    return n == discordance_normalization::scale_range ? "scale_range" : "observed_range";
}

discordance_normalization parse_normalization(const std::string& s) {
    if (s == "observed_range") return discordance_normalization::observed_range;
    if (s == "scale_range") return discordance_normalization::scale_range;
    throw error(errc::bad_request, "unknown discordance normalization '" + s + "'");
}

session_state parse_state(const std::string& s) {
    const auto st = parse_session_state(s);
    if (!st) throw error(errc::bad_request, "unknown session state '" + s + "'");
    return *st;
}

}  // namespace

void to_json(json& j, diagnosis d) { j = static_cast<int>(d); }

void from_json(const json& j, diagnosis& d) {
    if (!j.is_number_integer()) throw error(errc::bad_request, "diagnosis must be 0 or 1");
    const auto v = j.get<long long>();
    if (v != 0 && v != 1) {
        throw error(errc::domain_error, "diagnosis must be 0 or 1, got " + std::to_string(v));
    }
    d = static_cast<diagnosis>(v);
}

void to_json(json& j, const attribute_schema& a) {
    j = json{{"index", a.index},
             {"name", a.name},
             {"kind", a.kind == attribute_kind::count ? "count" : "continuous"},
             {"missing_code_is_zero", a.missing_code_is_zero},
             {"bin_count", a.bin_count}};
}

void from_json(const json& j, attribute_schema& a) {
    a.index = required<int>(j, "index");
    a.name = required<std::string>(j, "name");
    a.kind = required<std::string>(j, "kind") == "count" ? attribute_kind::count
                                                         : attribute_kind::continuous;
    a.missing_code_is_zero = required<bool>(j, "missing_code_is_zero");
    a.bin_count = required<int>(j, "bin_count");
}

void to_json(json& j, const attribute_bins& b) {
    j = json{{"edges", b.edges}, {"has_missing", b.has_missing}};
}

void from_json(const json& j, attribute_bins& b) {
    b.edges = required<std::vector<double>>(j, "edges");
    b.has_missing = required<bool>(j, "has_missing");
    if (b.edges.size() < 2 || !std::is_sorted(b.edges.begin(), b.edges.end())) {
        throw error(errc::bad_request, "bin edges must be >= 2 ascending values");
    }
}

void to_json(json& j, const discretization& d) { j = d.attributes; }

void from_json(const json& j, discretization& d) {
    d.attributes = j.get<std::vector<attribute_bins>>();
}

void to_json(json& j, const case_record& c) {
    j = json{{"id", c.id}, {"descriptors", c.descriptors}, {"actions", c.actions}};
    j["diagnosis"] = c.dx ? json(*c.dx) : json(nullptr);
    if (c.is_discretized()) j["bins"] = c.discretized;
}

void from_json(const json& j, case_record& c) {
    c.id = required<std::string>(j, "id");
    const auto d = required<std::vector<double>>(j, "descriptors");
    if (d.size() != attribute_count) {
        throw error(errc::bad_request, "a case needs exactly 8 descriptors");
    }
    std::copy(d.begin(), d.end(), c.descriptors.begin());
    c.actions = required<std::vector<std::string>>(j, "actions");
    c.dx = optional_field<diagnosis>(j, "diagnosis");
    c.discretized = optional_field<std::vector<bin_t>>(j, "bins").value_or(std::vector<bin_t>{});
}

void to_json(json& j, const neighbor& n) {
    j = json{{"case_id", n.case_id}, {"distance", n.distance}, {"rank", n.rank}};
}

void from_json(const json& j, neighbor& n) {
    n.case_id = required<std::string>(j, "case_id");
    n.distance = required<double>(j, "distance");
    n.rank = required<std::size_t>(j, "rank");
}

void to_json(json& j, const criterion& c) {
    j = json{{"name", c.name},
             {"direction", to_string(c.dir)},
             {"weight", c.weight},
             {"scale", c.scale}};
}

void from_json(const json& j, criterion& c) {
    c.name = required<std::string>(j, "name");
    c.dir = parse_direction(optional_field<std::string>(j, "direction").value_or("maximize"));
    c.weight = required<double>(j, "weight");
    c.scale = required<std::vector<std::string>>(j, "scale");
}

void to_json(json& j, const electre_config& c) {
    j = json{{"criteria", c.criteria},
             {"thresholds", {{"concordance", c.c_hat}, {"discordance", c.d_hat}}},
             {"discordance_normalization", to_string(c.normalization)}};
}

void from_json(const json& j, electre_config& c) {
    c.criteria = required<std::vector<criterion>>(j, "criteria");
    c.c_hat = default_concordance_threshold;
    c.d_hat = default_discordance_threshold;
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        c.c_hat = optional_field<double>(t, "concordance").value_or(c.c_hat);
        c.d_hat = optional_field<double>(t, "discordance").value_or(c.d_hat);
    }
    c.normalization = parse_normalization(
        optional_field<std::string>(j, "discordance_normalization").value_or("observed_range"));
    for (const auto& cr : c.criteria) validate_criterion(cr);
    if (!(c.c_hat > 0.0 && c.c_hat <= 1.0) || !(c.d_hat >= 0.0 && c.d_hat < 1.0)) {
        throw error(errc::argument_error, "thresholds must satisfy 0 < c <= 1 and 0 <= d < 1");
    }
}

void to_json(json& j, const kernel& k) {
    j = json{{"members", k.members}, {"collapsed_cycles", k.collapsed_cycles}};
}

void from_json(const json& j, kernel& k) {
    k.members = required<std::vector<std::string>>(j, "members");
    k.collapsed_cycles = required<std::vector<std::vector<std::string>>>(j, "collapsed_cycles");
}

void to_json(json& j, const outranking_graph& g) {
    json edges = json::array();
    for (std::size_t a = 0; a < g.edges.size(); ++a) {
        for (std::size_t b = 0; b < g.edges[a].size(); ++b) {
            if (g.edges[a][b]) edges.push_back({g.actions[a], g.actions[b]});
        }
    }
    j = json{{"actions", g.actions},       {"concordance", g.concordance},
             {"discordance", g.discordance}, {"c_hat", g.c_hat},
             {"d_hat", g.d_hat},           {"edges", edges}};
}

void from_json(const json& j, outranking_graph& g) {
    g.actions = required<std::vector<std::string>>(j, "actions");
    g.concordance = required<std::vector<std::vector<double>>>(j, "concordance");
    g.discordance = required<std::vector<std::vector<double>>>(j, "discordance");
    g.c_hat = required<double>(j, "c_hat");
    g.d_hat = required<double>(j, "d_hat");
    const auto n = g.actions.size();
    g.edges.assign(n, std::vector<bool>(n, false));
    const auto index = [&](const std::string& name) {
        const auto it = std::find(g.actions.begin(), g.actions.end(), name);
        if (it == g.actions.end()) throw error(errc::bad_request, "edge names unknown action");
        return static_cast<std::size_t>(it - g.actions.begin());
    };
    for (const auto& e : required<std::vector<std::vector<std::string>>>(j, "edges")) {
        if (e.size() != 2) throw error(errc::bad_request, "an edge is a [from, to] pair");
        g.edges[index(e[0])][index(e[1])] = true;
    }
}

void to_json(json& j, const session_neighbor& n) {
    j = json{{"case_id", n.match.case_id},
             {"distance", n.match.distance},
             {"rank", n.match.rank},
             {"within_radius", n.within_radius},
             {"diagnosis", n.dx},
             {"actions", n.actions}};
}

void from_json(const json& j, session_neighbor& n) {
    from_json(j, n.match);
    n.within_radius = required<bool>(j, "within_radius");
    n.dx = required<diagnosis>(j, "diagnosis");
    n.actions = required<std::vector<std::string>>(j, "actions");
}

void to_json(json& j, const transition_record& t) {
    j = json{{"from", to_string(t.from)}, {"to", to_string(t.to)}, {"command", t.command}};
}

void from_json(const json& j, transition_record& t) {
    t.from = parse_state(required<std::string>(j, "from"));
    t.to = parse_state(required<std::string>(j, "to"));
    t.command = required<std::string>(j, "command");
}

void to_json(json& j, const decision_session& s) {
    j = json{{"id", s.id},
             {"state", to_string(s.state)},
             {"case", s.patient},
             {"neighbors", s.neighbors},
             {"physician_actions", s.physician_actions},
             {"pooled_actions", s.pooled_actions},
             {"criteria_config", s.criteria_config},
             {"performance_input", s.performance_input},
             {"override", s.override_flag},
             {"audit", s.audit}};
    j["proposal"] = s.proposal ? json(*s.proposal) : json(nullptr);
    j["graph"] = s.graph ? json(*s.graph) : json(nullptr);
    j["chosen_action"] = s.chosen_action ? json(*s.chosen_action) : json(nullptr);
    j["review"] = s.review ? json(to_string(*s.review)) : json(nullptr);
    j["retained_diagnosis"] = s.retained_diagnosis ? json(*s.retained_diagnosis) : json(nullptr);
    j["retained_case_id"] = s.retained_case_id ? json(*s.retained_case_id) : json(nullptr);
}

void from_json(const json& j, decision_session& s) {
    s.id = required<std::string>(j, "id");
    s.state = parse_state(required<std::string>(j, "state"));
    s.patient = required<case_record>(j, "case");
    s.neighbors = required<std::vector<session_neighbor>>(j, "neighbors");
    s.physician_actions = required<std::vector<std::string>>(j, "physician_actions");
    s.pooled_actions = required<std::vector<std::string>>(j, "pooled_actions");
    s.criteria_config = required<electre_config>(j, "criteria_config");
    s.performance_input = required<level_assignments>(j, "performance_input");
    s.override_flag = required<bool>(j, "override");
    s.audit = required<std::vector<transition_record>>(j, "audit");
    s.proposal = optional_field<kernel>(j, "proposal");
    s.graph = optional_field<outranking_graph>(j, "graph");
    s.chosen_action = optional_field<std::string>(j, "chosen_action");
    s.review.reset();
    if (const auto v = optional_field<std::string>(j, "review")) {
        s.review = parse_review_verdict(*v);
        if (!s.review) throw error(errc::bad_request, "unknown review verdict '" + *v + "'");
    }
    s.retained_diagnosis = optional_field<diagnosis>(j, "retained_diagnosis");
    s.retained_case_id = optional_field<std::string>(j, "retained_case_id");
}

void to_json(json& j, const choice_rules& r) {
    json rules = json::array();
    for (const auto& rule : r.rules) {
        rules.push_back({{"class", rule.cls},
                         {"class_label", class_label(rule.cls)},
                         {"action", rule.action},
                         {"frequency", rule.frequency},
                         {"support_count", rule.support_count}});
    }
    j = json{{"min_support", r.min_support}, {"rules", rules}};
}

}  // namespace mcds
