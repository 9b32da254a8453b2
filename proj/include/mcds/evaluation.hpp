/**
 * @file evaluation.hpp
 * @brief Probe experiment and k-NN classification evaluation
 *
 * A probe is "found" when the majority diagnosis of its k nearest training
 * cases equals the class it is supposed to have.
 */

#pragma once

#include "mcds/casebase.hpp"
#include "mcds/similarity.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mcds {

inline constexpr std::size_t default_train_size = 512;
inline constexpr std::size_t default_probes_per_class = 10;

/// Published found rates for 10 + 10 probes, printed next to ours.
inline constexpr double reference_found_pos_rate = 60.0;
inline constexpr double reference_found_neg_rate = 50.0;

struct probe_row {
    std::string probe_id;
    diagnosis supposed{diagnosis::negative};
    diagnosis majority{diagnosis::negative};
    double vote_fraction{0.0};

    [[nodiscard]] bool found() const { return supposed == majority; }
    bool operator==(const probe_row&) const = default;
};

struct experiment_report {
    std::uint64_t seed{0};
    std::size_t k{0};
    std::size_t train_size{0};
    std::size_t n_probes_pos{0};
    std::size_t n_probes_neg{0};
    std::optional<double> found_pos_rate;  ///< absent when n_probes_pos == 0
    std::optional<double> found_neg_rate;
    std::array<std::size_t, class_count> class_counts{};  ///< cases per class in train + probe source
    std::vector<probe_row> rows;                          ///< positive probes first

    /// Found probes over all probes, in percent; nullopt without probes.
    [[nodiscard]] std::optional<double> overall_found_rate() const;

    bool operator==(const experiment_report&) const = default;
};

struct experiment_options {
    vdm_options vdm;
    /// Refuse probes whose id also appears in the training base.
    bool enforce_disjoint{true};
};

/// train must be discretized; probe_source is encoded with the train bins.
[[nodiscard]] experiment_report run_probe_experiment(const case_base& train,
                                                     const case_base& probe_source,
                                                     std::size_t n_pos, std::size_t n_neg,
                                                     std::size_t k, std::uint64_t seed,
                                                     const experiment_options& options = {});

/// File-order split of a raw base, discretized with the default schema, then
/// run_probe_experiment on the held-out part.
[[nodiscard]] experiment_report run_split_experiment(const case_base& full, std::size_t train_size,
                                                     std::size_t n_pos, std::size_t n_neg,
                                                     std::size_t k, std::uint64_t seed,
                                                     const experiment_options& options = {});

struct classification_metrics {
    std::size_t total{0};
    std::size_t correct{0};
    double accuracy{0.0};
    std::array<double, class_count> recall{};  ///< NaN-free: 0 when a class is absent
    std::array<std::array<std::size_t, class_count>, class_count> confusion{};  ///< [actual][predicted]

    bool operator==(const classification_metrics&) const = default;
};

[[nodiscard]] classification_metrics classification_eval(const case_base& train,
                                                         const case_base& test, std::size_t k,
                                                         const experiment_options& options = {});

enum class report_format { table, structured };

[[nodiscard]] std::optional<report_format> parse_report_format(std::string_view s);

/// Table-2 shaped text table or a JSON document with the same numbers.
void emit_report(const experiment_report& report, report_format format, std::ostream& out);
void emit_report_file(const experiment_report& report, report_format format,
                      const std::string& path);

}  // namespace mcds
