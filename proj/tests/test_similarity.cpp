#include "doctest.h"

#include "mcds/casebase.hpp"
#include "mcds/error.hpp"
#include "mcds/similarity.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace mcds;

namespace {

errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    FAIL("expected an mcds::error");
    return errc::internal_error;
}

/// One attribute with bins {1: u, 2: v, 3: never seen}; every other attribute constant.
case_base two_case_base() {
    discretization bins;
    for (std::size_t a = 0; a < 8; ++a) bins.attributes.push_back({{0.0, 1.0}, false});
    bins.attributes[0].edges = {0, 1, 2, 3};
    case_record u;
    u.id = "u";
    u.discretized = {1, 1, 1, 1, 1, 1, 1, 1};
    u.dx = diagnosis::positive;
    u.actions = {"x"};
    case_record v = u;
    v.id = "v";
    v.discretized[0] = 2;
    v.dx = diagnosis::negative;
    return case_base(pima_schema(), {u, v}, 0, bins);
}

const case_base& pima_train() {
    static const case_base cb = [] {
        const auto full = load_case_base_file(MCDS_DATA_FILE);
        return discretize(split_train_test(full, 512).first, pima_schema());
    }();
    return cb;
}

}  // namespace

TEST_SUITE("similarity") {

TEST_CASE("smoothed probabilities of the two-case model") {
    const auto m = fit_vdm(two_case_base());
    const auto pu = m.probabilities(0, 1);
    const auto pv = m.probabilities(0, 2);
    CHECK(pu[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(pu[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(pv[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(pv[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    // bin 3 never seen in training
    CHECK(m.probabilities(0, 3)[0] == 0.5);
    CHECK(m.probabilities(0, 3)[1] == 0.5);
    CHECK(m.counts(0, 1) == class_distribution{0, 1});
}

TEST_CASE("value distance of the two-case model") {
    const auto m = fit_vdm(two_case_base());
    CHECK(value_distance(m, 0, 1, 2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(value_distance(m, 0, 1, 1) == 0.0);
    CHECK(value_distance(m, 0, 2, 1) == value_distance(m, 0, 1, 2));
    CHECK(code_of([&] { (void)value_distance(m, 0, 1, 4); }) == errc::lookup_error);
    CHECK(code_of([&] { (void)value_distance(m, 0, missing_bin, 1); }) == errc::lookup_error);
    CHECK(code_of([&] { (void)m.probabilities(9, 1); }) == errc::lookup_error);
}

TEST_CASE("q exponent") {
    vdm_options opts;
    opts.q = 2.0;
    const auto m = fit_vdm(two_case_base(), opts);
    CHECK(value_distance(m, 0, 1, 2) == doctest::Approx(2.0 / 9).epsilon(1e-15));
}

TEST_CASE("case distance adds the attribute terms") {
    const auto cb = two_case_base();
    const auto m = fit_vdm(cb);
    const auto& u = cb.cases()[0];
    const auto& v = cb.cases()[1];
    CHECK(case_distance(m, u, u) == 0.0);
    // they differ on attribute 0 only
    CHECK(case_distance(m, u, v) == value_distance(m, 0, 1, 2));

    vdm_options opts;
    opts.attribute_weights = {3, 1, 1, 1, 1, 1, 1, 1};
    const auto w = fit_vdm(cb, opts);
    CHECK(case_distance(w, u, v) == doctest::Approx(2.0).epsilon(1e-15));

    case_record raw;
    CHECK(code_of([&] { (void)case_distance(m, u, raw); }) == errc::state_error);
}

TEST_CASE("fit errors") {
    CHECK(code_of([] { (void)fit_vdm(case_base{}); }) == errc::fit_error);
    const auto raw = load_case_base_file(MCDS_DATA_FILE);
    CHECK(code_of([&] { (void)fit_vdm(raw); }) == errc::state_error);
    vdm_options bad;
    bad.alpha = 0;
    CHECK(code_of([&] { (void)fit_vdm(two_case_base(), bad); }) == errc::argument_error);
    bad = {};
    bad.attribute_weights = {1, 2};
    CHECK(code_of([&] { (void)fit_vdm(two_case_base(), bad); }) == errc::argument_error);
}

TEST_CASE("fitted on the training split: every row sums to 1 and lies in (0, 1)") {
    const auto m = fit_vdm(pima_train());
    std::size_t rows = 0;
    for (std::size_t a = 0; a < 8; ++a) {
        for (auto b : m.known_bins(a)) {
            const auto p = m.probabilities(a, b);
            CHECK(std::fabs(p[0] + p[1] - 1.0) <= 1e-9);
            CHECK(p[0] > 0.0);
            CHECK(p[0] < 1.0);
            ++rows;
        }
    }
    // 8 attributes x 10 bins plus MISSING for attributes 2..6
    CHECK(rows == 85);
}

TEST_CASE("probabilities match counts taken straight from the cases") {
    const auto& cb = pima_train();
    const auto m = fit_vdm(cb);
    for (std::size_t a = 0; a < 8; ++a) {
        for (auto b : m.known_bins(a)) {
            const auto expect = oracle::probabilities(cb, a, b);
            CHECK(m.probabilities(a, b)[0] == doctest::Approx(expect[0]).epsilon(1e-15));
            CHECK(m.probabilities(a, b)[1] == doctest::Approx(expect[1]).epsilon(1e-15));
        }
    }
}

TEST_CASE("property: pseudo-metric on random fitted models") {
    oracle::gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sb = oracle::random_small_base(g);
        const auto m = fit_vdm(sb.cb);
        for (std::size_t a = 0; a < 8; ++a) {
            const auto& l = sb.labels[a];
            for (auto u : l) {
                CHECK(value_distance(m, a, u, u) == 0.0);
                for (auto v : l) {
                    const double uv = value_distance(m, a, u, v);
                    CHECK(uv == value_distance(m, a, v, u));
                    CHECK(uv <= 2.0);
                    CHECK(uv == doctest::Approx(oracle::value_distance(sb.cb, a, u, v)).epsilon(1e-12));
                    for (auto w : l) {
                        CHECK(value_distance(m, a, u, w) <=
                              uv + value_distance(m, a, v, w) + 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("property: case distance equals a per-attribute re-summation") {
    oracle::gen g(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto sb = oracle::random_small_base(g, 2);
        const auto m = fit_vdm(sb.cb);
        const oracle::distance_table dist(sb.cb, sb.labels);
        for (const auto& x : sb.cb.cases()) {
            for (const auto& y : sb.cb.cases()) {
                CHECK(case_distance(m, x, y) == doctest::Approx(dist(x, y)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("retrieval") {
    const auto& cb = pima_train();
    const auto m = fit_vdm(cb);
    SUBCASE("a stored case finds itself first at distance 0") {
        const auto& q = cb.cases()[17];
        const auto n = retrieve_k_nearest(m, cb, q, 1);
        REQUIRE(n.size() == 1);
        CHECK(n[0].distance == 0.0);
        // an exact duplicate with a smaller id would win the tie
        CHECK(case_distance(m, q, *cb.find(n[0].case_id)) == 0.0);
        CHECK(n[0].case_id <= q.id);
    }
    SUBCASE("k = |cb| returns everything sorted, ranks from 1") {
        const auto n = retrieve_k_nearest(m, cb, cb.cases()[0], cb.size());
        REQUIRE(n.size() == cb.size());
        for (std::size_t i = 0; i < n.size(); ++i) {
            CHECK(n[i].rank == i + 1);
            if (i > 0) {
                CHECK(n[i - 1].distance <= n[i].distance);
                if (n[i - 1].distance == n[i].distance) CHECK(n[i - 1].case_id < n[i].case_id);
            }
        }
    }
    SUBCASE("bad k and stale model") {
        CHECK(code_of([&] { (void)retrieve_k_nearest(m, cb, cb.cases()[0], 0); }) ==
              errc::argument_error);
        CHECK(code_of([&] { (void)retrieve_k_nearest(m, cb, cb.cases()[0], cb.size() + 1); }) ==
              errc::argument_error);
        auto c = cb.cases()[0];
        c.id = "extra";
        const auto grown = retain_case(cb, c);
        CHECK(code_of([&] { (void)retrieve_k_nearest(m, grown, c, 5); }) == errc::stale_model);
    }
}

TEST_CASE("property: retrieval equals an exhaustive scan") {
    oracle::gen g(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sb = oracle::random_small_base(g, 5, 40);
        const auto m = fit_vdm(sb.cb);
        const oracle::distance_table dist(sb.cb, sb.labels);
        const auto q = oracle::random_query(g, sb);
        const auto k = static_cast<std::size_t>(g.integer(1, static_cast<int>(sb.cb.size())));
        const auto got = retrieve_k_nearest(m, sb.cb, q, k);
        const auto want = oracle::retrieve(dist, sb.cb, q, k);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(got[i].case_id == want[i].first);
            CHECK(got[i].distance == doctest::Approx(want[i].second).epsilon(1e-12));
        }
    }
}

TEST_CASE("refit_with equals a fresh fit on the grown base") {
    const auto& cb = pima_train();
    const auto m = fit_vdm(cb);
    oracle::gen g(14);
    auto base = cb;
    auto model = m;
    for (int i = 0; i < 20; ++i) {
        auto c = cb.cases()[static_cast<std::size_t>(g.integer(0, 511))];
        c.id = "new-" + std::to_string(i);
        c.dx = g.coin() ? diagnosis::positive : diagnosis::negative;
        base = retain_case(base, c);
        model = refit_with(model, c, base.version());
        const auto fresh = fit_vdm(base);
        CHECK(model.train_version() == fresh.train_version());
        for (std::size_t a = 0; a < 8; ++a) {
            for (auto b : fresh.known_bins(a)) {
                CHECK(model.counts(a, b) == fresh.counts(a, b));
                for (int k = 0; k < 2; ++k) {
                    CHECK(std::fabs(model.probabilities(a, b)[k] - fresh.probabilities(a, b)[k]) <=
                          1e-12);
                }
            }
        }
    }
}

TEST_CASE("majority vote") {
    const auto cb = two_case_base();  // u positive, v negative
    const auto n = [](std::initializer_list<const char*> ids) {
        std::vector<neighbor> out;
        std::size_t r = 1;
        for (const auto* id : ids) out.push_back({id, 0.0, r++});
        return out;
    };
    CHECK(majority_diagnosis(n({"u", "u", "u"}), cb) == std::pair{diagnosis::positive, 1.0});
    const auto three_of_five = majority_diagnosis(n({"v", "u", "v", "u", "v"}), cb);
    CHECK(three_of_five.first == diagnosis::negative);
    CHECK(three_of_five.second == doctest::Approx(0.6));
    CHECK(majority_diagnosis(n({"u", "v", "u", "v"}), cb) == std::pair{diagnosis::negative, 0.5});
    CHECK(code_of([&] { (void)majority_diagnosis({}, cb); }) == errc::argument_error);
    CHECK(code_of([&] { (void)majority_diagnosis(n({"zz"}), cb); }) == errc::lookup_error);
}

}  // TEST_SUITE
