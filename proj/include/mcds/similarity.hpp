/**
 * @file similarity.hpp
 * @brief Modified Value Difference Metric and k-nearest case retrieval
 *
 * The model stores, for every attribute and every bin the discretization
 * can produce, the Laplace-smoothed class distribution
 *
 *     P(c | a = v) = (N(a=v, c) + alpha) / (N(a=v) + alpha * |classes|)
 *
 * and measures two bins by  delta(v1, v2) = sum_c |P(c|v1) - P(c|v2)|^q.
 * A case distance is the (optionally weighted) sum of delta over the eight
 * attributes. With q = 1 each delta is an L1 distance between probability
 * vectors, so it is a pseudo-metric bounded by 2.
 */

#pragma once

#include "mcds/casebase.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mcds {

struct vdm_options {
    double alpha{1.0};
    double q{1.0};
    /// One weight per attribute; empty means all 1.
    std::vector<double> attribute_weights;
};

using class_distribution = std::array<double, class_count>;

class vdm_model {
public:
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] double weight(std::size_t attr) const { return weights_.at(attr); }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
    [[nodiscard]] const discretization& bins() const { return bins_; }
    [[nodiscard]] std::uint64_t train_version() const { return train_version_; }

    /// Smoothed P(c | attr = bin). Throws lookup_error for a bin the
    /// attribute cannot produce.
    [[nodiscard]] const class_distribution& probabilities(std::size_t attr, bin_t bin) const;

    /// Raw class counts behind probabilities().
    [[nodiscard]] const class_distribution& counts(std::size_t attr, bin_t bin) const;

    /// Bins known for attr, MISSING first when present.
    [[nodiscard]] std::vector<bin_t> known_bins(std::size_t attr) const;

    bool operator==(const vdm_model&) const = default;

private:
    friend vdm_model fit_vdm(const case_base&, const vdm_options&);
    friend vdm_model refit_with(const vdm_model&, const case_record&, std::uint64_t);
    friend vdm_model restore_vdm(const vdm_options&, const discretization&, std::uint64_t,
                                 std::vector<std::vector<class_distribution>>);

    void renormalize();
    [[nodiscard]] std::size_t slot(std::size_t attr, bin_t bin) const;

    double alpha_{1.0};
    double q_{1.0};
    std::vector<double> weights_;
    discretization bins_;
    std::uint64_t train_version_{0};
    // indexed [attr][bin]; bin 0 is only meaningful when the attribute has MISSING
    std::vector<std::vector<class_distribution>> counts_;
    std::vector<std::vector<class_distribution>> probs_;
};

struct neighbor {
    std::string case_id;
    double distance{0.0};
    std::size_t rank{0};  ///< 1-based

    bool operator==(const neighbor&) const = default;
};

/// Requires a non-empty, discretized training base.
[[nodiscard]] vdm_model fit_vdm(const case_base& train, const vdm_options& options = {});

/// Same as refitting on train + {c}: adds c's counts and renormalizes.
[[nodiscard]] vdm_model refit_with(const vdm_model& model, const case_record& c,
                                   std::uint64_t new_version);

/// Rebuilds a model from persisted counts.
[[nodiscard]] vdm_model restore_vdm(const vdm_options& options, const discretization& bins,
                                    std::uint64_t train_version,
                                    std::vector<std::vector<class_distribution>> counts);

[[nodiscard]] double value_distance(const vdm_model& model, std::size_t attr, bin_t v1, bin_t v2);

/// Weighted sum of value_distance over the attributes.
[[nodiscard]] double case_distance(const vdm_model& model, const case_record& c1,
                                   const case_record& c2);

/// The k cases closest to query, ascending distance, ties by ascending id.
[[nodiscard]] std::vector<neighbor> retrieve_k_nearest(const vdm_model& model, const case_base& cb,
                                                       const case_record& query, std::size_t k);

/// Modal diagnosis and its vote fraction; a tie goes to class 0.
[[nodiscard]] std::pair<diagnosis, double> majority_diagnosis(const std::vector<neighbor>& neighbors,
                                                              const case_base& cb);

}  // namespace mcds
