// mcds command line: experiments, evaluation, case-base files, ELECTRE runs
// and the HTTP service.

#include "mcds/error.hpp"
#include "mcds/evaluation.hpp"
#include "mcds/json_io.hpp"
#include "mcds/persistence.hpp"
#include "mcds/service.hpp"

#include "CLI11.hpp"

#include <csignal>
#include <fstream>
#include <iostream>

#ifndef MCDS_DEFAULT_DATA
#define MCDS_DEFAULT_DATA "data/pima-indians-diabetes.csv"
#endif

namespace {

mcds::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mcds::error(mcds::errc::io_error, "cannot open '" + path + "'");
    try {
        return mcds::json::parse(in);
    } catch (const mcds::json::exception& e) {
        throw mcds::error(mcds::errc::bad_request, path + ": " + e.what());
    }
}

mcds::http_service* running_service = nullptr;

void on_signal(int) {
    if (running_service != nullptr) running_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Case-based retrieval + ELECTRE I decision support"};
    app.require_subcommand(1);

    std::string data = MCDS_DEFAULT_DATA;

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run the 10+10 probe experiment");
    std::size_t train_size = mcds::default_train_size;
    std::size_t probes_pos = mcds::default_probes_per_class;
    std::size_t probes_neg = mcds::default_probes_per_class;
    std::size_t k = mcds::default_k;
    std::uint64_t seed = 0;
    std::string format = "table";
    std::string out_path;
    experiment->add_option("--data", data, "Pima CSV or case-base file")->capture_default_str();
    experiment->add_option("--train-size", train_size)->capture_default_str();
    experiment->add_option("--probes-pos", probes_pos)->capture_default_str();
    experiment->add_option("--probes-neg", probes_neg)->capture_default_str();
    experiment->add_option("--k", k)->capture_default_str()->check(CLI::PositiveNumber);
    experiment->add_option("--seed", seed)->capture_default_str();
    experiment->add_option("--format", format)->check(CLI::IsMember({"table", "structured"}))
        ->capture_default_str();
    experiment->add_option("--out", out_path, "Write the report here instead of stdout");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "k-NN classification of the held-out split");
    evaluate->add_option("--data", data)->capture_default_str();
    evaluate->add_option("--train-size", train_size)->capture_default_str();
    evaluate->add_option("--k", k)->capture_default_str()->check(CLI::PositiveNumber);

    // build-casebase
    auto* build = app.add_subcommand("build-casebase", "Write a persisted case-base file");
    int bins = mcds::default_bin_count;
    bool with_model = false;
    build->add_option("--data", data)->capture_default_str();
    build->add_option("--out", out_path)->required();
    build->add_option("--bins", bins)->capture_default_str()->check(CLI::Range(2, 1000));
    build->add_flag("--with-model", with_model, "Embed the fitted MVDM counts");

    // rules
    auto* rules = app.add_subcommand("rules", "Per-diagnosis action frequency rules");
    double min_support = 0.0;
    rules->add_option("--data", data)->capture_default_str();
    rules->add_option("--min-support", min_support)->capture_default_str();

    // solve
    auto* solve = app.add_subcommand("solve", "ELECTRE I kernel for an assessed action set");
    std::string criteria_path;
    std::string assessment_path;
    solve->add_option("--criteria", criteria_path, "Criteria file (default: therapy criteria)");
    solve->add_option("--assessment", assessment_path,
                      "JSON {\"actions\": [...], \"assessment\": {action: {criterion: level}}}")
        ->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Start the HTTP service");
    mcds::service_config svc;
    double radius = mcds::default_acceptance_radius;
    serve->add_option("--port", svc.port)->capture_default_str();
    serve->add_option("--host", svc.host)->capture_default_str();
    serve->add_option("--casebase", svc.casebase_path, "Pima CSV or case-base file")->required();
    serve->add_option("--audit-log", svc.engine.audit_log_path, "Append-only session log");
    serve->add_option("--criteria", criteria_path, "Default criteria file");
    serve->add_option("--k", k)->capture_default_str()->check(CLI::PositiveNumber);
    serve->add_option("--radius", radius, "Similarity acceptance radius")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*experiment) {
            const auto report = mcds::run_split_experiment(mcds::open_case_base(data).cb,
                                                           train_size, probes_pos, probes_neg, k,
                                                           seed);
            const auto fmt = *mcds::parse_report_format(format);
            if (out_path.empty()) {
                mcds::emit_report(report, fmt, std::cout);
            } else {
                mcds::emit_report_file(report, fmt, out_path);
            }
        } else if (*evaluate) {
            auto [train, test] = mcds::split_train_test(mcds::open_case_base(data).cb, train_size);
            const auto m = mcds::classification_eval(mcds::discretize(train, mcds::pima_schema()),
                                                     test, k);
            mcds::json j{{"k", k},
                         {"train_size", train.size()},
                         {"test_size", m.total},
                         {"accuracy", m.accuracy},
                         {"recall", {{"0", m.recall[0]}, {"1", m.recall[1]}}},
                         {"confusion", m.confusion}};
            std::cout << j.dump(2) << '\n';
        } else if (*build) {
            const auto cb = mcds::discretize(mcds::open_case_base(data).cb, mcds::pima_schema(bins));
            if (with_model) {
                const auto model = mcds::fit_vdm(cb);
                mcds::save_case_base_file(out_path, cb, &model);
            } else {
                mcds::save_case_base_file(out_path, cb);
            }
            std::cout << "wrote " << cb.size() << " cases to " << out_path << '\n';
        } else if (*rules) {
            const auto r = mcds::mine_choice_rules(mcds::open_case_base(data).cb, min_support);
            std::cout << mcds::json(r).dump(2) << '\n';
        } else if (*solve) {
            const auto config = criteria_path.empty()
                                    ? mcds::therapy_criteria()
                                    : read_json_file(criteria_path).get<mcds::electre_config>();
            const auto input = read_json_file(assessment_path);
            const auto actions = mcds::required<std::vector<std::string>>(input, "actions");
            const auto levels = mcds::required<mcds::level_assignments>(input, "assessment");
            const auto table = mcds::encode_performance(actions, config.criteria, levels);
            const auto graph =
                mcds::build_outranking(table, config.c_hat, config.d_hat, config.normalization);
            mcds::json j{{"kernel", mcds::extract_kernel(graph)}, {"graph", graph}};
            std::cout << j.dump(2) << '\n';
        } else if (*serve) {
            svc.engine.k = k;
            svc.engine.radius = radius;
            if (!criteria_path.empty()) {
                svc.engine.criteria = read_json_file(criteria_path).get<mcds::electre_config>();
            }
            mcds::http_service service(svc);
            const int port = service.bind();
            running_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "serving " << service.engine().casebase()->size() << " cases on "
                      << svc.host << ":" << port << '\n';
            service.listen();
            running_service = nullptr;
        }
    } catch (const mcds::error& e) {
        std::cerr << "error [" << mcds::to_string(e.code()) << "]: " << e.what() << '\n';
        for (const auto& d : e.details()) std::cerr << "  - " << d << '\n';
        return 1;
    }
    return 0;
}
