#include "doctest.h"

#include "mcds/error.hpp"
#include "mcds/evaluation.hpp"
#include "mcds/json_io.hpp"
#include "oracles.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

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

struct split {
    case_base full;
    case_base train;  // discretized
    case_base test;
};

const split& pima_split() {
    static const split s = [] {
        auto full = load_case_base_file(MCDS_DATA_FILE);
        auto [train, test] = split_train_test(full, 512);
        return split{full, discretize(train, pima_schema()), test};
    }();
    return s;
}

std::string emit(const experiment_report& r, report_format f) {
    std::ostringstream out;
    emit_report(r, f, out);
    return out.str();
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("10 + 10 probes against the 512-case base") {
    const auto& s = pima_split();
    const auto r = run_probe_experiment(s.train, s.test, 10, 10, 5, 1);
    CHECK(r.rows.size() == 20);
    CHECK(r.train_size == 512);
    CHECK(r.class_counts == std::array<std::size_t, 2>{500, 268});
    REQUIRE(r.found_pos_rate.has_value());
    REQUIRE(r.found_neg_rate.has_value());

    // rates recompute exactly from the rows
    std::size_t pos_hits = 0;
    std::size_t neg_hits = 0;
    for (const auto& row : r.rows) {
        CHECK_FALSE(s.train.contains(row.probe_id));
        CHECK(s.test.contains(row.probe_id));
        CHECK(s.test.find(row.probe_id)->dx == row.supposed);
        if (row.found()) ++(row.supposed == diagnosis::positive ? pos_hits : neg_hits);
    }
    CHECK(*r.found_pos_rate == 100.0 * static_cast<double>(pos_hits) / 10.0);
    CHECK(*r.found_neg_rate == 100.0 * static_cast<double>(neg_hits) / 10.0);
    // positives first
    CHECK(r.rows.front().supposed == diagnosis::positive);
    CHECK(r.rows.back().supposed == diagnosis::negative);

    std::set<std::string> ids;
    for (const auto& row : r.rows) CHECK(ids.insert(row.probe_id).second);
}

TEST_CASE("vote fractions and majorities agree with an independent retrieval") {
    const auto& s = pima_split();
    const auto r = run_probe_experiment(s.train, s.test, 10, 10, 5, 9);
    const oracle::distance_table dist(s.train, oracle::labels_of(*s.train.bins()));
    for (const auto& row : r.rows) {
        auto probe = *s.test.find(row.probe_id);
        probe.discretized = s.train.bins()->encode(probe.descriptors);
        const auto near = oracle::retrieve(dist, s.train, probe, 5);
        int pos = 0;
        for (const auto& [id, d] : near) pos += s.train.find(id)->dx == diagnosis::positive;
        const auto majority = pos >= 3 ? diagnosis::positive : diagnosis::negative;
        CHECK(row.majority == majority);
        CHECK(row.vote_fraction == doctest::Approx((majority == diagnosis::positive ? pos : 5 - pos) / 5.0));
    }
}

TEST_CASE("determinism per seed") {
    const auto& s = pima_split();
    const auto a = run_probe_experiment(s.train, s.test, 10, 10, 5, 77);
    const auto b = run_probe_experiment(s.train, s.test, 10, 10, 5, 77);
    CHECK(a == b);
    CHECK(emit(a, report_format::structured) == emit(b, report_format::structured));
    const auto c = run_probe_experiment(s.train, s.test, 10, 10, 5, 78);
    CHECK_FALSE(a.rows == c.rows);
}

TEST_CASE("probes copied from the training base are all found at k = 1") {
    const auto& s = pima_split();
    experiment_options opts;
    opts.enforce_disjoint = false;
    const auto r = run_probe_experiment(s.train, s.train, 10, 10, 1, 3, opts);
    CHECK(r.found_pos_rate == 100.0);
    CHECK(r.found_neg_rate == 100.0);
}

TEST_CASE("overlap is refused unless disabled") {
    const auto& s = pima_split();
    CHECK(code_of([&] { (void)run_probe_experiment(s.train, s.train, 1, 1, 5, 0); }) ==
          errc::argument_error);
}

TEST_CASE("empty class side") {
    const auto& s = pima_split();
    const auto r = run_probe_experiment(s.train, s.test, 0, 10, 5, 2);
    CHECK_FALSE(r.found_pos_rate.has_value());
    CHECK(r.found_neg_rate.has_value());
    CHECK(r.rows.size() == 10);
}

TEST_CASE("insufficient probes") {
    const auto& s = pima_split();
    CHECK(code_of([&] { (void)run_probe_experiment(s.train, s.test, 1000, 0, 5, 2); }) ==
          errc::argument_error);
}

TEST_CASE("run_split_experiment matches the manual split") {
    const auto& s = pima_split();
    CHECK(run_split_experiment(s.full, 512, 10, 10, 5, 4) ==
          run_probe_experiment(s.train, s.test, 10, 10, 5, 4));
}

TEST_CASE("classification on the file-order split") {
    const auto& s = pima_split();
    const auto m = classification_eval(s.train, s.test, 5);
    CHECK(m.total == 256);
    std::size_t sum = 0;
    for (const auto& r : m.confusion) sum += r[0] + r[1];
    CHECK(sum == 256);
    // regression anchor recorded from the first oracle-checked run
    CHECK(m.correct == 185);
    CHECK(m.accuracy == doctest::Approx(185.0 / 256.0));
    CHECK(m.confusion == std::array<std::array<std::size_t, 2>, 2>{{{141, 32}, {39, 44}}});

    CHECK(code_of([&] { (void)classification_eval(s.train, case_base{}, 5); }) == errc::argument_error);
}

TEST_CASE("k = 1 on a duplicate-free copy of the training base is exact") {
    // keep one case per bin vector so self-retrieval has no ties
    const auto& s = pima_split();
    std::vector<case_record> kept;
    std::set<std::vector<bin_t>> seen;
    for (const auto& c : s.train.cases()) {
        if (seen.insert(c.discretized).second) kept.push_back(c);
    }
    const case_base unique(s.train.schema(), kept, 0, s.train.bins());
    experiment_options opts;
    opts.enforce_disjoint = false;
    CHECK(classification_eval(unique, unique, 1, opts).accuracy == 1.0);
}

TEST_CASE("report layout") {
    const auto& s = pima_split();
    const auto r = run_probe_experiment(s.train, s.test, 10, 10, 5, 1);
    const auto table = emit(r, report_format::table);
    for (const char* header : {"Diagnosis for diabetes", "Case Diagnosis", "Number of cases",
                               "Introduced cases supposed +", "Introduced cases supposed -",
                               "(%) Result +", "(%) Result -", "Reference (%)"}) {
        CHECK(table.find(header) != std::string::npos);
    }
    CHECK(table.find("Negative") != std::string::npos);
    CHECK(table.find("| 500 ") != std::string::npos);
    CHECK(table.find("| 268 ") != std::string::npos);

    const auto j = json::parse(emit(r, report_format::structured));
    REQUIRE(j["table"].size() == 2);
    CHECK(j["table"][0]["number_of_cases"] == 500);
    CHECK(j["table"][0]["reference_percent"] == 50.0);
    CHECK(j["table"][1]["reference_percent"] == 60.0);
    CHECK(j["table"][1]["introduced_supposed_pos"] == 10);
    CHECK(j["probes"].size() == 20);

    // same numbers in both formats
    char pos[16];
    std::snprintf(pos, sizeof pos, "%.2f", j["table"][1]["result_pos_percent"].get<double>());
    char neg[16];
    std::snprintf(neg, sizeof neg, "%.2f", j["table"][0]["result_neg_percent"].get<double>());
    CHECK(j["table"][1]["result_pos_percent"].get<double>() == *r.found_pos_rate);
    CHECK(table.find(pos) != std::string::npos);
    CHECK(table.find(neg) != std::string::npos);
}

TEST_CASE("report errors") {
    experiment_report empty;
    std::ostringstream out;
    CHECK(code_of([&] { emit_report(empty, report_format::table, out); }) == errc::argument_error);
    const auto& s = pima_split();
    const auto r = run_probe_experiment(s.train, s.test, 1, 1, 5, 1);
    CHECK(code_of([&] { emit_report_file(r, report_format::table, "/nonexistent/dir/r.txt"); }) ==
          errc::io_error);
    CHECK(parse_report_format("table") == report_format::table);
    CHECK_FALSE(parse_report_format("xml").has_value());
}

}  // TEST_SUITE
