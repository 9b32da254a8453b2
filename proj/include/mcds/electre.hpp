/**
 * @file electre.hpp
 * @brief ELECTRE I outranking for the choice problematic
 *
 * Actions are scored on ordinal criteria (labels encoded 1..L). For an
 * ordered pair (a, b):
 *
 *   concordance C(a,b) = sum of weights of criteria where a is at least as
 *                        good as b, over the sum of all weights
 *   discordance D(a,b) = max over criteria where b is strictly better of
 *                        (g(b) - g(a)) / range, or 0 when there is none
 *
 * a outranks b when C(a,b) >= c_hat and D(a,b) <= d_hat. The proposed
 * action subset is the kernel of that digraph once its strongly connected
 * components have been contracted.
 */

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcds {

enum class direction { maximize, minimize };

struct criterion {
    std::string name;
    direction dir{direction::maximize};
    double weight{1.0};
    std::vector<std::string> scale;  ///< worst to best for maximize; label i encodes to i+1

    /// 1-based level of label, or nullopt when the label is not on the scale.
    [[nodiscard]] std::optional<int> level_of(std::string_view label) const;

    bool operator==(const criterion&) const = default;
};

/// Throws argument_error unless weight > 0, the scale has >= 2 unique labels
/// and the name is non-empty.
void validate_criterion(const criterion& c);

enum class discordance_normalization {
    observed_range,  ///< max - min of the criterion's scores in the table
    scale_range,     ///< L - 1 of the criterion's scale
};

/// Slack on threshold comparisons so that rescaling the weights cannot flip
/// an edge through rounding.
inline constexpr double threshold_tolerance = 1e-9;

inline constexpr double default_concordance_threshold = 0.7;
inline constexpr double default_discordance_threshold = 0.3;

/// action -> criterion name -> scale label
using level_assignments = std::map<std::string, std::map<std::string, std::string>>;

struct performance_table {
    std::vector<std::string> actions;
    std::vector<criterion> criteria;
    std::vector<std::vector<double>> scores;  ///< [action][criterion], encoded levels

    [[nodiscard]] std::size_t action_index(std::string_view action) const;
    /// Score oriented so that larger is better.
    [[nodiscard]] double oriented(std::size_t action, std::size_t crit) const;
};

/// Throws encoding_error for a label outside its scale and incomplete_input
/// (listing every gap) for an unassigned cell.
[[nodiscard]] performance_table encode_performance(const std::vector<std::string>& actions,
                                                   const std::vector<criterion>& criteria,
                                                   const level_assignments& levels);

[[nodiscard]] double concordance_index(const performance_table& table, std::size_t a, std::size_t b);
[[nodiscard]] double concordance_index(const performance_table& table, std::string_view a,
                                       std::string_view b);

[[nodiscard]] double discordance_index(
    const performance_table& table, std::size_t a, std::size_t b,
    discordance_normalization norm = discordance_normalization::observed_range);
[[nodiscard]] double discordance_index(
    const performance_table& table, std::string_view a, std::string_view b,
    discordance_normalization norm = discordance_normalization::observed_range);

using adjacency_matrix = std::vector<std::vector<bool>>;

struct outranking_graph {
    std::vector<std::string> actions;
    std::vector<std::vector<double>> concordance;
    std::vector<std::vector<double>> discordance;
    double c_hat{default_concordance_threshold};
    double d_hat{default_discordance_threshold};
    adjacency_matrix edges;  ///< edges[a][b]: a outranks b

    [[nodiscard]] std::size_t edge_count() const;
};

[[nodiscard]] outranking_graph build_outranking(
    const performance_table& table, double c_hat = default_concordance_threshold,
    double d_hat = default_discordance_threshold,
    discordance_normalization norm = discordance_normalization::observed_range);

/// Kernel of an arbitrary digraph after contracting strongly connected
/// components. Indices refer to the input nodes.
struct digraph_kernel {
    std::vector<std::size_t> members;                  ///< ascending
    std::vector<std::vector<std::size_t>> collapsed;   ///< multi-node components in the kernel
    std::vector<std::size_t> component_of;             ///< node -> component id
    std::vector<std::vector<std::size_t>> components;  ///< component id -> nodes, ascending
};

[[nodiscard]] std::vector<std::vector<std::size_t>> strongly_connected_components(
    const adjacency_matrix& adjacency);

[[nodiscard]] digraph_kernel kernel_of(const adjacency_matrix& adjacency);

struct kernel {
    std::vector<std::string> members;
    std::vector<std::vector<std::string>> collapsed_cycles;

    bool operator==(const kernel&) const = default;
};

[[nodiscard]] kernel extract_kernel(const outranking_graph& graph);

/// Criteria, thresholds and normalization as read from a criteria file.
struct electre_config {
    std::vector<criterion> criteria;
    double c_hat{default_concordance_threshold};
    double d_hat{default_discordance_threshold};
    discordance_normalization normalization{discordance_normalization::observed_range};

    bool operator==(const electre_config&) const = default;
};

/// encode -> build -> extract.
[[nodiscard]] kernel solve_choice(const std::vector<std::string>& actions,
                                  const std::vector<criterion>& criteria,
                                  const level_assignments& levels,
                                  double c_hat = default_concordance_threshold,
                                  double d_hat = default_discordance_threshold,
                                  discordance_normalization norm =
                                      discordance_normalization::observed_range);

[[nodiscard]] kernel solve_choice(const std::vector<std::string>& actions,
                                  const electre_config& config, const level_assignments& levels);

/// The three-criterion therapy problem used as the default configuration.
[[nodiscard]] electre_config therapy_criteria();

}  // namespace mcds
