/**
 * @file casebase.hpp
 * @brief Pima records, case structure, discretization and the case-base
 *
 * A case carries the eight descriptors X1..X8 of a Pima record, the
 * actions recorded for it and (for stored cases) its diagnosis Y. The
 * case-base is an immutable value; every mutating operation returns a
 * new base with a bumped version so readers can keep a snapshot.
 */

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mcds {

inline constexpr std::size_t attribute_count = 8;
inline constexpr std::size_t class_count = 2;
inline constexpr int default_bin_count = 10;

enum class attribute_kind { count, continuous };

struct attribute_schema {
    int index{};  ///< 1-based position in the record
    std::string name;
    attribute_kind kind{attribute_kind::continuous};
    bool missing_code_is_zero{false};
    int bin_count{default_bin_count};

    bool operator==(const attribute_schema&) const = default;
};

/// The eight Pima descriptors in file order.
[[nodiscard]] std::vector<attribute_schema> pima_schema(int bin_count = default_bin_count);

enum class diagnosis : std::uint8_t { negative = 0, positive = 1 };

[[nodiscard]] constexpr std::size_t class_index(diagnosis d) {
    return static_cast<std::size_t>(d);
}

/// "tested negative for diabetes" / "tested positive for diabetes"
[[nodiscard]] std::string_view class_label(diagnosis d);

/// Parses "0"/"1"; anything else is a domain error.
[[nodiscard]] diagnosis diagnosis_from_int(long long value);

/// Discretized value of one attribute. Bin 0 is MISSING; real bins are 1..n.
using bin_t = int;
inline constexpr bin_t missing_bin = 0;

/// Equal-width bins of one attribute. Intervals are half-open [e_i, e_i+1)
/// except the last, which is closed. Values outside the fitted range clamp
/// to the first or last bin.
struct attribute_bins {
    std::vector<double> edges;  ///< bin_count()+1 ascending edges
    bool has_missing{false};

    [[nodiscard]] int bin_count() const { return static_cast<int>(edges.size()) - 1; }
    [[nodiscard]] bin_t encode(double value) const;
    /// Every bin label this attribute can produce, MISSING first when present.
    [[nodiscard]] std::vector<bin_t> labels() const;

    bool operator==(const attribute_bins&) const = default;
};

struct discretization {
    std::vector<attribute_bins> attributes;

    [[nodiscard]] std::vector<bin_t> encode(std::span<const double> descriptors) const;

    bool operator==(const discretization&) const = default;
};

struct case_record {
    std::string id;
    std::array<double, attribute_count> descriptors{};
    std::vector<bin_t> discretized;  ///< empty until discretized
    std::vector<std::string> actions;
    std::optional<diagnosis> dx;

    [[nodiscard]] bool is_discretized() const { return discretized.size() == attribute_count; }

    bool operator==(const case_record&) const = default;
};

/// Immutable collection of diagnosed cases.
class case_base {
public:
    case_base() = default;

    /// Throws conflict on duplicate ids and validation_error on an
    /// undiagnosed case.
    case_base(std::vector<attribute_schema> schema, std::vector<case_record> cases,
              std::uint64_t version = 0, std::optional<discretization> bins = std::nullopt);

    [[nodiscard]] const std::vector<attribute_schema>& schema() const { return schema_; }
    [[nodiscard]] const std::vector<case_record>& cases() const { return cases_; }
    [[nodiscard]] std::uint64_t version() const { return version_; }
    [[nodiscard]] const std::optional<discretization>& bins() const { return bins_; }

    [[nodiscard]] std::size_t size() const { return cases_.size(); }
    [[nodiscard]] bool empty() const { return cases_.empty(); }
    [[nodiscard]] bool is_discretized() const { return bins_.has_value(); }

    [[nodiscard]] const case_record* find(std::string_view id) const;
    [[nodiscard]] bool contains(std::string_view id) const { return find(id) != nullptr; }

    /// Cases per class, indexed by class_index().
    [[nodiscard]] std::array<std::size_t, class_count> class_counts() const;

private:
    std::vector<attribute_schema> schema_;
    std::vector<case_record> cases_;
    std::unordered_map<std::string, std::size_t> index_;
    std::uint64_t version_{0};
    std::optional<discretization> bins_;
};

/// Parses one 9-field record. line_number is only used in messages.
[[nodiscard]] case_record parse_pima_line(std::string_view line, std::string id,
                                          std::size_t line_number = 0);

/// One case per non-blank line, ids "pima-0001", "pima-0002", ...
[[nodiscard]] case_base load_case_base(std::istream& source);
[[nodiscard]] case_base load_case_base_file(const std::string& path);

/// Without a seed the first n_train cases in file order are the training
/// part; with a seed the cases are shuffled deterministically first.
[[nodiscard]] std::pair<case_base, case_base> split_train_test(
    const case_base& cb, std::size_t n_train, std::optional<std::uint64_t> seed = std::nullopt);

/// Fits equal-width bins on cb and encodes every case with them.
[[nodiscard]] case_base discretize(const case_base& cb, const std::vector<attribute_schema>& schema);

/// Encodes cb with bins fitted elsewhere (e.g. test cases with training edges).
[[nodiscard]] case_base apply_discretization(const case_base& cb, const discretization& bins);

/// Appends one case. Assigns "case-<n>" when the id is empty and encodes
/// the case with the base's bins when it has them.
[[nodiscard]] case_base retain_case(const case_base& cb, case_record c);

/// Checks arity, finiteness, sign and diagnosis domain, reporting every
/// violation at once as a validation_error.
[[nodiscard]] case_record validate_new_case(const std::vector<attribute_schema>& schema,
                                            std::span<const double> raw,
                                            std::vector<std::string> actions,
                                            std::optional<long long> dx, std::string id = {});

}  // namespace mcds
