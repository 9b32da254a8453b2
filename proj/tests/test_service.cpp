#include "doctest.h"

#include "mcds/error.hpp"
#include "mcds/json_io.hpp"
#include "mcds/service.hpp"

#include "httplib.h"

#include <filesystem>
#include <fstream>
#include <set>

using namespace mcds;

namespace {

const std::string basal = "acting insulin for basal";
const std::string bolus = "rapid-acting insulin for bolus";
const std::vector<double> figure_row{6, 148, 72, 35, 0, 33.6, 0.627, 50};

struct reply {
    int status{0};
    json body;
    httplib::Headers headers;
};

struct fixture {
    http_service svc;
    httplib::Client client;

    static service_config ephemeral() {
        service_config c;
        c.port = 0;
        return c;
    }

    fixture()
        : svc(load_case_base_file(MCDS_DATA_FILE), ephemeral()),
          client("127.0.0.1", svc.start()) {}

    static reply wrap(const httplib::Result& r) {
        REQUIRE(r);
        return {r->status, json::parse(r->body), r->headers};
    }
    reply get(const std::string& path) { return wrap(client.Get(path)); }
    reply post(const std::string& path, const json& body = json::object()) {
        return wrap(client.Post(path, body.dump(), "application/json"));
    }
    reply put(const std::string& path, const json& body) {
        return wrap(client.Put(path, body.dump(), "application/json"));
    }
};

json cells_for(const json& pooled, const std::string& best) {
    json out = json::object();
    for (const auto& a : pooled) {
        const auto name = a.get<std::string>();
        out[name] = name == best ? json{{"side effects", "Not at all"},
                                        {"treatment efficacy", "Very good"},
                                        {"Duration of therapy", "reduced"}}
                                 : json{{"side effects", "Many"},
                                        {"treatment efficacy", "Fair"},
                                        {"Duration of therapy", "long"}};
    }
    return out;
}

void expect_error(const reply& r, errc code) {
    CHECK(r.body.contains("error"));
    CHECK_FALSE(r.body.contains("payload"));
    CHECK(r.body["error"]["code"] == to_string(code));
    CHECK(r.status == http_status(code));
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("error table: unique names, one status each") {
    const auto codes = all_error_codes();
    CHECK(codes.size() == 23);
    std::set<std::string_view> names;
    for (auto c : codes) {
        CHECK(names.insert(to_string(c)).second);
        const int s = http_status(c);
        CHECK(s >= 400);
        CHECK(s < 600);
    }
    CHECK(http_status(errc::not_found) == 404);
    CHECK(http_status(errc::conflict) == 409);
    CHECK(http_status(errc::bad_request) == 400);
}

TEST_CASE("health and stats") {
    fixture f;
    const auto h = f.get("/health");
    CHECK(h.status == 200);
    CHECK(h.body["payload"]["size"] == 768);
    CHECK(h.body["payload"]["version"] == 0);
    CHECK(h.body["payload"]["class_counts"] == json{{"0", 500}, {"1", 268}});
    CHECK(h.body["request_id"].is_string());
    CHECK_FALSE(h.body.contains("error"));

    const auto r = f.client.Get("/health", httplib::Headers{{"X-Request-Id", "abc-1"}});
    REQUIRE(r);
    CHECK(json::parse(r->body)["request_id"] == "abc-1");
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");

    const auto opt = f.client.Options("/sessions");
    REQUIRE(opt);
    CHECK(opt->status == 204);
}

TEST_CASE("scripted session walk over HTTP") {
    fixture f;
    auto r = f.post("/sessions", {{"descriptors", figure_row}, {"physician_actions", {basal, bolus}}});
    REQUIRE(r.status == 201);
    const auto id = r.body["payload"]["id"].get<std::string>();
    CHECK(r.body["payload"]["state"] == "information");

    r = f.post("/sessions/" + id + "/retrieve", {{"k", 5}});
    REQUIRE(r.status == 200);
    CHECK(r.body["payload"]["state"] == "retrieved");
    CHECK(r.body["payload"]["neighbors"].size() == 5);
    const auto pooled = r.body["payload"]["pooled_actions"];

    r = f.put("/sessions/" + id + "/assessment", {{"cells", cells_for(pooled, basal)}});
    REQUIRE(r.status == 200);

    r = f.post("/sessions/" + id + "/design");
    REQUIRE(r.status == 200);
    CHECK(r.body["payload"]["proposal"]["members"] == json{basal});
    CHECK(r.body["payload"]["graph"]["edges"].is_array());

    r = f.post("/sessions/" + id + "/choice", {{"action", basal}});
    REQUIRE(r.status == 200);
    CHECK(r.body["payload"]["override"] == false);

    r = f.post("/sessions/" + id + "/review", {{"verdict", "accepted"}});
    REQUIRE(r.status == 200);

    r = f.post("/sessions/" + id + "/retain", {{"diagnosis", 1}});
    REQUIRE(r.status == 200);
    CHECK(r.body["payload"]["state"] == "retained");
    CHECK(r.body["payload"]["casebase"]["size"] == 769);
    CHECK(r.body["payload"]["casebase"]["version"] == 1);
    CHECK(r.body["payload"]["casebase"]["model_version"] == 1);
    CHECK(f.get("/casebase/stats").body["payload"]["refits"] == 1);

    // the retained case comes back first at distance 0
    r = f.post("/sessions", {{"descriptors", figure_row}});
    const auto probe = r.body["payload"]["id"].get<std::string>();
    r = f.post("/sessions/" + probe + "/retrieve", {{"k", 1}});
    CHECK(r.body["payload"]["neighbors"][0]["distance"] == 0.0);

    expect_error(f.post("/sessions/" + id + "/retain", {{"diagnosis", 1}}), errc::conflict);
    CHECK(f.get("/sessions").body["payload"].size() == 2);
    CHECK(f.get("/sessions/" + id).body["payload"]["state"] == "retained");
}

TEST_CASE("error responses map onto error codes") {
    fixture f;
    expect_error(f.get("/sessions/S999999"), errc::not_found);
    expect_error(f.wrap(f.client.Post("/sessions", "{oops", "application/json")), errc::bad_request);
    expect_error(f.post("/sessions", json::object()), errc::bad_request);
    expect_error(f.post("/sessions", {{"descriptors", {1, 2, 3}}}), errc::validation_error);

    auto r = f.post("/sessions", {{"descriptors", figure_row}, {"physician_actions", {basal}}});
    const auto id = r.body["payload"]["id"].get<std::string>();
    expect_error(f.post("/sessions/" + id + "/design"), errc::sequencing_error);
    expect_error(f.post("/sessions/" + id + "/retrieve", {{"k", 0}}), errc::argument_error);
    r = f.post("/sessions/" + id + "/retrieve");
    REQUIRE(r.status == 200);
    expect_error(f.post("/sessions/" + id + "/design"), errc::incomplete_input);

    auto cells = cells_for(r.body["payload"]["pooled_actions"], basal);
    cells[basal]["side effects"] = "Sometimes";
    f.put("/sessions/" + id + "/assessment", {{"cells", cells}});
    expect_error(f.post("/sessions/" + id + "/design"), errc::encoding_error);
    cells[basal]["side effects"] = "No";
    f.put("/sessions/" + id + "/assessment", {{"cells", cells}});
    REQUIRE(f.post("/sessions/" + id + "/design").status == 200);
    expect_error(f.post("/sessions/" + id + "/choice", {{"action", "surgery"}}), errc::choice_error);
    REQUIRE(f.post("/sessions/" + id + "/choice", {{"action", basal}}).status == 200);
    expect_error(f.post("/sessions/" + id + "/review", {{"verdict", "revised"}}), errc::argument_error);
    expect_error(f.post("/sessions/" + id + "/review", {{"verdict", "maybe"}}), errc::bad_request);
    REQUIRE(f.post("/sessions/" + id + "/review", {{"verdict", "rejected"}}).status == 200);
    expect_error(f.post("/sessions/" + id + "/retain", {{"diagnosis", 0}}), errc::retention_refused);

    r = f.post("/sessions", {{"descriptors", {17, 199, 122, 99, 846, 67.1, 2.42, 81}}});
    const auto lonely = r.body["payload"]["id"].get<std::string>();
    expect_error(f.post("/sessions/" + lonely + "/retrieve", {{"radius", 0.0}}), errc::no_candidates);
    expect_error(f.post("/sessions", {{"descriptors", figure_row},
                                      {"criteria_config", {{"criteria", json::array()},
                                                           {"thresholds", {{"concordance", 2.0}}}}}}),
                 errc::argument_error);
}

TEST_CASE("rules, experiment and stateless solve") {
    fixture f;
    auto r = f.get("/rules?min_support=0.5");
    REQUIRE(r.status == 200);
    // loaded records carry their class label as the action
    REQUIRE(r.body["payload"]["rules"].size() == 2);
    CHECK(r.body["payload"]["rules"][0]["support_count"] == 500);
    CHECK(r.body["payload"]["rules"][1]["frequency"] == 1.0);
    CHECK(r.body["payload"]["min_support"] == 0.5);
    expect_error(f.get("/rules?min_support=abc"), errc::bad_request);

    r = f.post("/experiment", {{"seed", 3}});
    REQUIRE(r.status == 200);
    CHECK(r.body["payload"]["probes"].size() == 20);
    CHECK(r.body["payload"]["table"][1]["reference_percent"] == 60.0);
    expect_error(f.post("/experiment", {{"train_size", 768}}), errc::argument_error);

    const json assessment{
        {basal, {{"side effects", "No"}, {"treatment efficacy", "Good"}, {"Duration of therapy", "long"}}},
        {bolus, {{"side effects", "Many"}, {"treatment efficacy", "Fair"}, {"Duration of therapy", "long"}}}};
    r = f.post("/electre/solve", {{"actions", {basal, bolus}}, {"assessment", assessment}});
    REQUIRE(r.status == 200);
    CHECK(r.body["payload"]["kernel"]["members"] == json{basal});
    expect_error(f.post("/electre/solve", {{"actions", {basal}}, {"assessment", json::object()}}),
                 errc::incomplete_input);
}

TEST_CASE("startup failures") {
    service_config c;
    c.port = 0;
    c.casebase_path = "/nonexistent/pima.csv";
    try {
        http_service svc(c);
        FAIL("no error");
    } catch (const error& e) {
        CHECK(e.code() == errc::io_error);
    }

    const auto bad = std::filesystem::temp_directory_path() / "mcds-service-bad.json";
    {
        std::ofstream out(bad);
        out << R"({"format": "mcds-casebase", "format_version": 1, "checksum": "0", "cases": []})";
    }
    c.casebase_path = bad.string();
    try {
        http_service svc(c);
        FAIL("no error");
    } catch (const error& e) {
        CHECK(e.code() == errc::corrupt_file);
    }
    std::filesystem::remove(bad);

    c.casebase_path = MCDS_DATA_FILE;
    http_service first(c);
    const int port = first.start();
    service_config clash = c;
    clash.port = port;
    http_service second(clash);
    try {
        (void)second.bind();
        FAIL("no error");
    } catch (const error& e) {
        CHECK(e.code() == errc::io_error);
    }
}

}  // TEST_SUITE
