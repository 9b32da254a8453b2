#include "mcds/evaluation.hpp"

#include "mcds/error.hpp"
#include "mcds/json_io.hpp"
#include "mcds/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace mcds {

namespace {

void check_disjoint(const case_base& train, const case_base& other, std::string_view what) {
    for (const auto& c : other.cases()) {
        if (train.contains(c.id)) {
            throw error(errc::argument_error,
                        std::string(what) + " case '" + c.id + "' is also in the training base");
        }
    }
}

double percent(std::size_t hits, std::size_t n) {
    return 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", round2(v));
    return buf;
}

constexpr const char* found_definition =
    "a probe is found when the majority diagnosis of its k nearest cases equals its supposed "
    "class (ties go to class 0)";

struct table_row {
    std::string label;
    diagnosis cls;
    std::size_t cases;
    std::size_t supposed_pos;
    std::size_t supposed_neg;
    std::optional<double> result_pos;
    std::optional<double> result_neg;
    double reference;
};

std::vector<table_row> table_rows(const experiment_report& r) {
    return {
        {"Negative", diagnosis::negative, r.class_counts[0], 0, r.n_probes_neg, std::nullopt,
         r.found_neg_rate, reference_found_neg_rate},
        {"Positive", diagnosis::positive, r.class_counts[1], r.n_probes_pos, 0, r.found_pos_rate,
         std::nullopt, reference_found_pos_rate},
    };
}

}  // namespace

std::optional<double> experiment_report::overall_found_rate() const {
    if (rows.empty()) return std::nullopt;
    std::size_t hits = 0;
    for (const auto& r : rows) hits += r.found() ? 1 : 0;
    return percent(hits, rows.size());
}

experiment_report run_probe_experiment(const case_base& train, const case_base& probe_source,
                                       std::size_t n_pos, std::size_t n_neg, std::size_t k,
                                       std::uint64_t seed, const experiment_options& options) {
    if (!train.bins()) throw error(errc::state_error, "training base is not discretized");
    if (options.enforce_disjoint) check_disjoint(train, probe_source, "probe");

    const auto model = fit_vdm(train, options.vdm);
    const auto source = apply_discretization(probe_source, *train.bins());

    std::array<std::vector<std::size_t>, class_count> by_class;
    for (std::size_t i = 0; i < source.size(); ++i) {
        by_class[class_index(*source.cases()[i].dx)].push_back(i);
    }
    const std::array<std::size_t, class_count> wanted{n_neg, n_pos};
    for (std::size_t c = 0; c < class_count; ++c) {
        if (by_class[c].size() < wanted[c]) {
            throw error(errc::argument_error,
                        "probe source has " + std::to_string(by_class[c].size()) + " class-" +
                            std::to_string(c) + " cases, " + std::to_string(wanted[c]) +
                            " requested");
        }
    }

    experiment_report report;
    report.seed = seed;
    report.k = k;
    report.train_size = train.size();
    report.n_probes_pos = n_pos;
    report.n_probes_neg = n_neg;

    std::set<std::string> ids;
    for (const auto* base : {&train, &probe_source}) {
        for (const auto& c : base->cases()) {
            if (ids.insert(c.id).second) ++report.class_counts[class_index(*c.dx)];
        }
    }

    std::mt19937_64 engine(seed);
    for (const auto cls : {diagnosis::positive, diagnosis::negative}) {
        auto& pool = by_class[class_index(cls)];
        seeded_shuffle(std::span<std::size_t>(pool), engine);
        std::size_t found = 0;
        const std::size_t n = wanted[class_index(cls)];
        for (std::size_t i = 0; i < n; ++i) {
            const auto& probe = source.cases()[pool[i]];
            const auto [majority, fraction] =
                majority_diagnosis(retrieve_k_nearest(model, train, probe, k), train);
            report.rows.push_back({probe.id, cls, majority, fraction});
            found += majority == cls ? 1 : 0;
        }
        auto& rate = cls == diagnosis::positive ? report.found_pos_rate : report.found_neg_rate;
        if (n > 0) rate = percent(found, n);
    }
    return report;
}

experiment_report run_split_experiment(const case_base& full, std::size_t train_size,
                                       std::size_t n_pos, std::size_t n_neg, std::size_t k,
                                       std::uint64_t seed, const experiment_options& options) {
    auto [train, test] = split_train_test(full, train_size);
    const auto discretized = discretize(train, pima_schema());
    return run_probe_experiment(discretized, test, n_pos, n_neg, k, seed, options);
}

classification_metrics classification_eval(const case_base& train, const case_base& test,
                                           std::size_t k, const experiment_options& options) {
    if (test.empty()) throw error(errc::argument_error, "test set is empty");
    if (!train.bins()) throw error(errc::state_error, "training base is not discretized");
    if (options.enforce_disjoint) check_disjoint(train, test, "test");

    const auto model = fit_vdm(train, options.vdm);
    const auto encoded = apply_discretization(test, *train.bins());

    classification_metrics m;
    for (const auto& c : encoded.cases()) {
        const auto predicted =
            majority_diagnosis(retrieve_k_nearest(model, train, c, k), train).first;
        ++m.confusion[class_index(*c.dx)][class_index(predicted)];
        ++m.total;
        m.correct += predicted == *c.dx ? 1 : 0;
    }
    m.accuracy = static_cast<double>(m.correct) / static_cast<double>(m.total);
    for (std::size_t c = 0; c < class_count; ++c) {
        const auto actual = m.confusion[c][0] + m.confusion[c][1];
        m.recall[c] = actual == 0 ? 0.0 : static_cast<double>(m.confusion[c][c]) /
                                              static_cast<double>(actual);
    }
    return m;
}

std::optional<report_format> parse_report_format(std::string_view s) {
    if (s == "table") return report_format::table;
    if (s == "structured") return report_format::structured;
    return std::nullopt;
}

void emit_report(const experiment_report& report, report_format format, std::ostream& out) {
    if (report.rows.empty()) throw error(errc::argument_error, "report has no probes");
    const auto rows = table_rows(report);
    const auto opt2 = [](const std::optional<double>& v) {
        return v ? fixed2(*v) : std::string{};
    };
    const auto count_or_blank = [](std::size_t n) {
        return n == 0 ? std::string{} : std::to_string(n);
    };

    if (format == report_format::structured) {
        json j;
        j["definition"] = found_definition;
        j["seed"] = report.seed;
        j["k"] = report.k;
        j["train_size"] = report.train_size;
        json jrows = json::array();
        for (const auto& r : rows) {
            jrows.push_back({
                {"diagnosis", r.label},
                {"case_diagnosis", static_cast<int>(r.cls)},
                {"number_of_cases", r.cases},
                {"introduced_supposed_pos", r.supposed_pos},
                {"introduced_supposed_neg", r.supposed_neg},
                {"result_pos_percent", r.result_pos ? json(round2(*r.result_pos)) : json(nullptr)},
                {"result_neg_percent", r.result_neg ? json(round2(*r.result_neg)) : json(nullptr)},
                {"reference_percent", r.reference},
            });
        }
        j["table"] = jrows;
        const auto overall = report.overall_found_rate();
        j["overall_found_percent"] = overall ? json(round2(*overall)) : json(nullptr);
        json probes = json::array();
        for (const auto& p : report.rows) {
            probes.push_back({{"probe_id", p.probe_id},
                              {"supposed", p.supposed},
                              {"majority", p.majority},
                              {"vote_fraction", p.vote_fraction},
                              {"found", p.found()}});
        }
        j["probes"] = probes;
        out << j.dump(2) << '\n';
        return;
    }

    const std::vector<std::string> headers{
        "Diagnosis for diabetes",      "Case Diagnosis", "Number of cases",
        "Introduced cases supposed +", "Introduced cases supposed -",
        "(%) Result +",                "(%) Result -",   "Reference (%)"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        std::ostringstream ref;
        ref << r.reference;
        cells.push_back({r.label, std::to_string(static_cast<int>(r.cls)), std::to_string(r.cases),
                         count_or_blank(r.supposed_pos), count_or_blank(r.supposed_neg),
                         opt2(r.result_pos), opt2(r.result_neg), ref.str()});
    }
    std::vector<std::size_t> width(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        width[c] = headers[c].size();
        for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
    }
    const auto print_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c == 0 ? "" : " | ") << std::left << std::setw(static_cast<int>(width[c]))
                << row[c];
        }
        out << '\n';
    };

    out << "Probe experiment: k = " << report.k << ", seed = " << report.seed
        << ", training cases = " << report.train_size << '\n';
    out << "Found: " << found_definition << '\n' << '\n';
    print_row(headers);
    for (std::size_t c = 0; c < headers.size(); ++c) {
        out << (c == 0 ? "" : "-+-") << std::string(width[c], '-');
    }
    out << '\n';
    for (const auto& row : cells) print_row(row);
    if (const auto overall = report.overall_found_rate()) {
        out << '\n' << "Overall found rate (%): " << fixed2(*overall) << '\n';
    }
}

void emit_report_file(const experiment_report& report, report_format format,
                      const std::string& path) {
    std::ostringstream buffer;
    emit_report(report, format, buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_error, "cannot write '" + path + "'");
    out << buffer.str();
    if (!out) throw error(errc::io_error, "write to '" + path + "' failed");
}

}  // namespace mcds
