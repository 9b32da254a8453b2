#include "mcds/similarity.hpp"

#include "mcds/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcds {

namespace {

void check_options(const vdm_options& options) {
    if (!(options.alpha > 0.0)) throw error(errc::argument_error, "alpha must be positive");
    if (!(options.q > 0.0)) throw error(errc::argument_error, "q must be positive");
    if (!options.attribute_weights.empty() &&
        options.attribute_weights.size() != attribute_count) {
        throw error(errc::argument_error, "attribute_weights must hold 8 values");
    }
    for (double w : options.attribute_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw error(errc::argument_error, "attribute weights must be finite and >= 0");
        }
    }
}

std::vector<std::vector<class_distribution>> empty_counts(const discretization& bins) {
    std::vector<std::vector<class_distribution>> counts;
    counts.reserve(bins.attributes.size());
    for (const auto& ab : bins.attributes) {
        counts.emplace_back(static_cast<std::size_t>(ab.bin_count()) + 1, class_distribution{});
    }
    return counts;
}

}  // namespace

std::size_t vdm_model::slot(std::size_t attr, bin_t bin) const {
    if (attr >= bins_.attributes.size()) {
        throw error(errc::lookup_error, "unknown attribute " + std::to_string(attr));
    }
    const auto& ab = bins_.attributes[attr];
    const bool known = (bin == missing_bin) ? ab.has_missing : (bin >= 1 && bin <= ab.bin_count());
    if (!known) {
        throw error(errc::lookup_error, "bin " + std::to_string(bin) + " unknown for attribute " +
                                            std::to_string(attr + 1));
    }
    return static_cast<std::size_t>(bin);
}

const class_distribution& vdm_model::probabilities(std::size_t attr, bin_t bin) const {
    return probs_[attr][slot(attr, bin)];
}

const class_distribution& vdm_model::counts(std::size_t attr, bin_t bin) const {
    return counts_[attr][slot(attr, bin)];
}

std::vector<bin_t> vdm_model::known_bins(std::size_t attr) const {
    return bins_.attributes.at(attr).labels();
}

void vdm_model::renormalize() {
    probs_ = counts_;
    const double denom_extra = alpha_ * static_cast<double>(class_count);
    for (auto& attr_rows : probs_) {
        for (auto& row : attr_rows) {
            const double total = std::accumulate(row.begin(), row.end(), 0.0);
            for (auto& p : row) p = (p + alpha_) / (total + denom_extra);
        }
    }
}

vdm_model fit_vdm(const case_base& train, const vdm_options& options) {
    check_options(options);
    if (train.empty()) throw error(errc::fit_error, "cannot fit on an empty training base");
    if (!train.is_discretized()) {
        throw error(errc::state_error, "training base is not discretized");
    }

    vdm_model m;
    m.alpha_ = options.alpha;
    m.q_ = options.q;
    m.weights_ = options.attribute_weights.empty() ? std::vector<double>(attribute_count, 1.0)
                                                   : options.attribute_weights;
    m.bins_ = *train.bins();
    m.train_version_ = train.version();
    m.counts_ = empty_counts(m.bins_);
    for (const auto& c : train.cases()) {
        for (std::size_t a = 0; a < attribute_count; ++a) {
            m.counts_[a][m.slot(a, c.discretized[a])][class_index(*c.dx)] += 1.0;
        }
    }
    m.renormalize();
    return m;
}

vdm_model refit_with(const vdm_model& model, const case_record& c, std::uint64_t new_version) {
    if (!c.dx) throw error(errc::validation_error, "case '" + c.id + "' has no diagnosis");
    const auto encoded = model.bins_.encode(c.descriptors);
    vdm_model m = model;
    for (std::size_t a = 0; a < attribute_count; ++a) {
        m.counts_[a][m.slot(a, encoded[a])][class_index(*c.dx)] += 1.0;
    }
    m.train_version_ = new_version;
    m.renormalize();
    return m;
}

vdm_model restore_vdm(const vdm_options& options, const discretization& bins,
                      std::uint64_t train_version,
                      std::vector<std::vector<class_distribution>> counts) {
    check_options(options);
    const auto expected = empty_counts(bins);
    bool shape_ok = counts.size() == expected.size();
    for (std::size_t a = 0; shape_ok && a < counts.size(); ++a) {
        shape_ok = counts[a].size() == expected[a].size();
    }
    if (!shape_ok) throw error(errc::corrupt_file, "model counts do not match the bin layout");

    vdm_model m;
    m.alpha_ = options.alpha;
    m.q_ = options.q;
    m.weights_ = options.attribute_weights.empty() ? std::vector<double>(attribute_count, 1.0)
                                                   : options.attribute_weights;
    m.bins_ = bins;
    m.train_version_ = train_version;
    m.counts_ = std::move(counts);
    m.renormalize();
    return m;
}

double value_distance(const vdm_model& model, std::size_t attr, bin_t v1, bin_t v2) {
    const auto& p1 = model.probabilities(attr, v1);
    const auto& p2 = model.probabilities(attr, v2);
    if (v1 == v2) return 0.0;
    double sum = 0.0;
    for (std::size_t c = 0; c < class_count; ++c) {
        const double diff = std::abs(p1[c] - p2[c]);
        sum += model.q() == 1.0 ? diff : std::pow(diff, model.q());
    }
    return sum;
}

double case_distance(const vdm_model& model, const case_record& c1, const case_record& c2) {
    if (!c1.is_discretized() || !c2.is_discretized()) {
        throw error(errc::state_error, "case distance needs discretized cases");
    }
    double sum = 0.0;
    for (std::size_t a = 0; a < attribute_count; ++a) {
        const double w = model.weight(a);
        if (w == 0.0) continue;
        sum += w * value_distance(model, a, c1.discretized[a], c2.discretized[a]);
    }
    return sum;
}

std::vector<neighbor> retrieve_k_nearest(const vdm_model& model, const case_base& cb,
                                         const case_record& query, std::size_t k) {
    if (k < 1 || k > cb.size()) {
        throw error(errc::argument_error, "k must be in [1, " + std::to_string(cb.size()) +
                                              "], got " + std::to_string(k));
    }
    if (model.train_version() != cb.version() || !cb.bins() || !(*cb.bins() == model.bins())) {
        throw error(errc::stale_model, "model fitted on version " +
                                           std::to_string(model.train_version()) +
                                           ", case-base is at version " +
                                           std::to_string(cb.version()));
    }
    if (!query.is_discretized()) throw error(errc::state_error, "query is not discretized");

    const auto& cases = cb.cases();
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        scored.emplace_back(case_distance(model, query, cases[i]), i);
    }
    const auto closer = [&](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return cases[x.second].id < cases[y.second].id;
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                      scored.end(), closer);

    std::vector<neighbor> out;
    out.reserve(k);
    for (std::size_t r = 0; r < k; ++r) {
        out.push_back({cases[scored[r].second].id, scored[r].first, r + 1});
    }
    return out;
}

std::pair<diagnosis, double> majority_diagnosis(const std::vector<neighbor>& neighbors,
                                                const case_base& cb) {
    if (neighbors.empty()) throw error(errc::argument_error, "no neighbors to vote");
    std::array<std::size_t, class_count> votes{};
    for (const auto& n : neighbors) {
        const auto* c = cb.find(n.case_id);
        if (c == nullptr) throw error(errc::lookup_error, "unknown case '" + n.case_id + "'");
        ++votes[class_index(*c->dx)];
    }
    const auto winner = votes[1] > votes[0] ? diagnosis::positive : diagnosis::negative;
    return {winner, static_cast<double>(votes[class_index(winner)]) /
                        static_cast<double>(neighbors.size())};
}

}  // namespace mcds
