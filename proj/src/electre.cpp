#include "mcds/electre.hpp"

#include "mcds/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mcds {

std::optional<int> criterion::level_of(std::string_view label) const {
    for (std::size_t i = 0; i < scale.size(); ++i) {
        if (scale[i] == label) return static_cast<int>(i) + 1;
    }
    return std::nullopt;
}

void validate_criterion(const criterion& c) {
    if (c.name.empty()) throw error(errc::argument_error, "criterion name is empty");
    if (!(c.weight > 0.0)) {
        throw error(errc::argument_error, "criterion '" + c.name + "' needs a positive weight");
    }
    if (c.scale.size() < 2) {
        throw error(errc::argument_error, "criterion '" + c.name + "' needs at least 2 levels");
    }
    std::set<std::string> seen;
    for (const auto& label : c.scale) {
        if (!seen.insert(label).second) {
            throw error(errc::argument_error,
                        "criterion '" + c.name + "' repeats level '" + label + "'");
        }
    }
}

std::size_t performance_table::action_index(std::string_view action) const {
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i] == action) return i;
    }
    throw error(errc::lookup_error, "unknown action '" + std::string(action) + "'");
}

double performance_table::oriented(std::size_t action, std::size_t crit) const {
    const double s = scores[action][crit];
    return criteria[crit].dir == direction::minimize ? -s : s;
}

performance_table encode_performance(const std::vector<std::string>& actions,
                                     const std::vector<criterion>& criteria,
                                     const level_assignments& levels) {
    if (actions.empty()) throw error(errc::argument_error, "no actions to assess");
    if (criteria.empty()) throw error(errc::argument_error, "no criteria");
    std::set<std::string> names;
    for (const auto& c : criteria) {
        validate_criterion(c);
        if (!names.insert(c.name).second) {
            throw error(errc::argument_error, "duplicate criterion '" + c.name + "'");
        }
    }
    std::set<std::string> seen_actions;
    for (const auto& a : actions) {
        if (!seen_actions.insert(a).second) {
            throw error(errc::argument_error, "duplicate action '" + a + "'");
        }
    }

    performance_table table{actions, criteria, {}};
    table.scores.assign(actions.size(), std::vector<double>(criteria.size(), 0.0));
    std::vector<std::string> gaps;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto row = levels.find(actions[i]);
        for (std::size_t j = 0; j < criteria.size(); ++j) {
            const std::map<std::string, std::string>::const_iterator cell =
                row == levels.end() ? std::map<std::string, std::string>::const_iterator{}
                                    : row->second.find(criteria[j].name);
            if (row == levels.end() || cell == row->second.end()) {
                gaps.push_back(actions[i] + " / " + criteria[j].name);
                continue;
            }
            const auto level = criteria[j].level_of(cell->second);
            if (!level) {
                throw error(errc::encoding_error, "action '" + actions[i] + "', criterion '" +
                                                      criteria[j].name + "': unknown level '" +
                                                      cell->second + "'");
            }
            table.scores[i][j] = *level;
        }
    }
    if (!gaps.empty()) {
        throw error(errc::incomplete_input,
                    std::to_string(gaps.size()) + " unassessed cell(s)", std::move(gaps));
    }
    return table;
}

double concordance_index(const performance_table& table, std::size_t a, std::size_t b) {
    if (a >= table.actions.size() || b >= table.actions.size()) {
        throw error(errc::lookup_error, "action index out of range");
    }
    double agree = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < table.criteria.size(); ++j) {
        const double w = table.criteria[j].weight;
        total += w;
        if (table.oriented(a, j) >= table.oriented(b, j)) agree += w;
    }
    return total > 0.0 ? agree / total : 1.0;
}

double concordance_index(const performance_table& table, std::string_view a, std::string_view b) {
    return concordance_index(table, table.action_index(a), table.action_index(b));
}

double discordance_index(const performance_table& table, std::size_t a, std::size_t b,
                         discordance_normalization norm) {
    if (a >= table.actions.size() || b >= table.actions.size()) {
        throw error(errc::lookup_error, "action index out of range");
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < table.criteria.size(); ++j) {
        const double gap = table.oriented(b, j) - table.oriented(a, j);
        if (gap <= 0.0) continue;
        double range = 0.0;
        if (norm == discordance_normalization::scale_range) {
            range = static_cast<double>(table.criteria[j].scale.size()) - 1.0;
        } else {
            auto [lo, hi] = std::minmax_element(
                table.scores.begin(), table.scores.end(),
                [j](const auto& x, const auto& y) { return x[j] < y[j]; });
            range = (*hi)[j] - (*lo)[j];
        }
        if (range > 0.0) worst = std::max(worst, std::min(1.0, gap / range));
    }
    return worst;
}

double discordance_index(const performance_table& table, std::string_view a, std::string_view b,
                         discordance_normalization norm) {
    return discordance_index(table, table.action_index(a), table.action_index(b), norm);
}

std::size_t outranking_graph::edge_count() const {
    std::size_t n = 0;
    for (const auto& row : edges) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
    return n;
}

outranking_graph build_outranking(const performance_table& table, double c_hat, double d_hat,
                                  discordance_normalization norm) {
    if (!(c_hat > 0.0 && c_hat <= 1.0)) {
        throw error(errc::argument_error, "concordance threshold must be in (0, 1]");
    }
    if (!(d_hat >= 0.0 && d_hat < 1.0)) {
        throw error(errc::argument_error, "discordance threshold must be in [0, 1)");
    }
    const std::size_t n = table.actions.size();
    outranking_graph g;
    g.actions = table.actions;
    g.c_hat = c_hat;
    g.d_hat = d_hat;
    g.concordance.assign(n, std::vector<double>(n, 1.0));
    g.discordance.assign(n, std::vector<double>(n, 0.0));
    g.edges.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            g.concordance[a][b] = concordance_index(table, a, b);
            g.discordance[a][b] = discordance_index(table, a, b, norm);
            g.edges[a][b] = g.concordance[a][b] >= c_hat - threshold_tolerance &&
                            g.discordance[a][b] <= d_hat + threshold_tolerance;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// kernel

std::vector<std::vector<std::size_t>> strongly_connected_components(
    const adjacency_matrix& adjacency) {
    const std::size_t n = adjacency.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> order(n, unvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        order[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w = 0; w < n; ++w) {
            if (w == v || !adjacency[v][w]) continue;
            if (order[w] == unvisited) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], order[w]);
            }
        }
        if (low[v] == order[v]) {
            std::vector<std::size_t> comp;
            std::size_t w = 0;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (order[v] == unvisited) visit(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

digraph_kernel kernel_of(const adjacency_matrix& adjacency) {
    const std::size_t n = adjacency.size();
    digraph_kernel result;
    result.components = strongly_connected_components(adjacency);
    result.component_of.assign(n, 0);
    for (std::size_t c = 0; c < result.components.size(); ++c) {
        for (auto v : result.components[c]) result.component_of[v] = c;
    }

    const std::size_t m = result.components.size();
    std::vector<std::set<std::size_t>> preds(m);
    std::vector<std::set<std::size_t>> succs(m);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v || !adjacency[u][v]) continue;
            const auto cu = result.component_of[u];
            const auto cv = result.component_of[v];
            if (cu == cv) continue;
            succs[cu].insert(cv);
            preds[cv].insert(cu);
        }
    }

    // The condensation is acyclic: repeatedly admit undecided components whose
    // predecessors are all decided, then exclude everything they point to.
    enum class mark { undecided, in, out };
    std::vector<mark> status(m, mark::undecided);
    std::size_t decided = 0;
    while (decided < m) {
        std::vector<std::size_t> ready;
        for (std::size_t c = 0; c < m; ++c) {
            if (status[c] != mark::undecided) continue;
            const bool free = std::all_of(preds[c].begin(), preds[c].end(),
                                          [&](std::size_t p) { return status[p] != mark::undecided; });
            if (free) ready.push_back(c);
        }
        for (auto c : ready) {
            if (status[c] != mark::undecided) continue;
            status[c] = mark::in;
            ++decided;
            for (auto s : succs[c]) {
                if (status[s] == mark::undecided) {
                    status[s] = mark::out;
                    ++decided;
                }
            }
        }
    }

    for (std::size_t c = 0; c < m; ++c) {
        if (status[c] != mark::in) continue;
        const auto& nodes = result.components[c];
        result.members.insert(result.members.end(), nodes.begin(), nodes.end());
        if (nodes.size() > 1) result.collapsed.push_back(nodes);
    }
    std::sort(result.members.begin(), result.members.end());
    return result;
}

kernel extract_kernel(const outranking_graph& graph) {
    const auto k = kernel_of(graph.edges);
    kernel out;
    for (auto v : k.members) out.members.push_back(graph.actions[v]);
    for (const auto& group : k.collapsed) {
        std::vector<std::string> names;
        for (auto v : group) names.push_back(graph.actions[v]);
        out.collapsed_cycles.push_back(std::move(names));
    }
    return out;
}

kernel solve_choice(const std::vector<std::string>& actions,
                    const std::vector<criterion>& criteria, const level_assignments& levels,
                    double c_hat, double d_hat, discordance_normalization norm) {
    const auto table = encode_performance(actions, criteria, levels);
    return extract_kernel(build_outranking(table, c_hat, d_hat, norm));
}

kernel solve_choice(const std::vector<std::string>& actions, const electre_config& config,
                    const level_assignments& levels) {
    return solve_choice(actions, config.criteria, levels, config.c_hat, config.d_hat,
                        config.normalization);
}

electre_config therapy_criteria() {
    electre_config config;
    config.criteria = {
        {"side effects", direction::maximize, 1.0, {"Many", "No", "Not at all"}},
        {"treatment efficacy", direction::maximize, 1.0, {"Fair", "Good", "Very good"}},
        {"Duration of therapy", direction::maximize, 1.0, {"long", "reduced"}},
    };
    return config;
}

}  // namespace mcds
