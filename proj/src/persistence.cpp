#include "mcds/persistence.hpp"

#include "mcds/error.hpp"
#include "mcds/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace mcds {

namespace {

std::string fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json cases_json(const case_base& cb) {
    json cases = json::array();
    for (const auto& c : cb.cases()) {
        json jc = c;
        jc.erase("bins");  // recomputed from the edges on load
        cases.push_back(std::move(jc));
    }
    return cases;
}

json model_json(const vdm_model& m) {
    json counts = json::array();
    for (std::size_t a = 0; a < m.bins().attributes.size(); ++a) {
        json rows = json::array();
        const int n = m.bins().attributes[a].bin_count();
        for (bin_t b = 0; b <= n; ++b) {
            const bool known = b != missing_bin || m.bins().attributes[a].has_missing;
            rows.push_back(known ? json(m.counts(a, b)) : json::array({0.0, 0.0}));
        }
        counts.push_back(std::move(rows));
    }
    return json{{"alpha", m.alpha()},
                {"q", m.q()},
                {"attribute_weights", m.weights()},
                {"train_version", m.train_version()},
                {"counts", counts}};
}

}  // namespace

void save_case_base(std::ostream& out, const case_base& cb, const vdm_model* model) {
    json cases = cases_json(cb);
    json doc;
    doc["format"] = casebase_format_tag;
    doc["format_version"] = casebase_format_version;
    doc["version"] = cb.version();
    doc["class_labels"] = {{"0", class_label(diagnosis::negative)},
                           {"1", class_label(diagnosis::positive)}};
    doc["schema"] = cb.schema();
    doc["bins"] = cb.bins() ? json(*cb.bins()) : json(nullptr);
    doc["checksum"] = fnv1a64(cases.dump());
    doc["cases"] = std::move(cases);
    doc["model"] = model ? model_json(*model) : json(nullptr);
    out << doc.dump(1) << '\n';
}

void save_case_base_file(const std::string& path, const case_base& cb, const vdm_model* model) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw error(errc::io_error, "cannot write '" + tmp + "'");
        save_case_base(out, cb, model);
        if (!out) throw error(errc::io_error, "write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw error(errc::io_error, "cannot replace '" + path + "'");
    }
}

persisted_case_base load_persisted_case_base(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw error(errc::corrupt_file, std::string("case-base file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", "") != casebase_format_tag) {
            throw error(errc::corrupt_file, "not an mcds case-base file");
        }
        if (doc.value("format_version", 0) != casebase_format_version) {
            throw error(errc::corrupt_file, "unsupported case-base format version");
        }
        const json& cases = doc.at("cases");
        if (required<std::string>(doc, "checksum") != fnv1a64(cases.dump())) {
            throw error(errc::corrupt_file, "case-base checksum mismatch");
        }
        const auto version = required<std::uint64_t>(doc, "version");
        auto schema = required<std::vector<attribute_schema>>(doc, "schema");
        auto records = cases.get<std::vector<case_record>>();
        const auto bins = optional_field<discretization>(doc, "bins");
        if (bins && bins->attributes.size() != attribute_count) {
            throw error(errc::corrupt_file, "bin edges must cover 8 attributes");
        }

        case_base cb(std::move(schema), std::move(records), version);
        if (bins) cb = apply_discretization(cb, *bins);

        persisted_case_base out{std::move(cb), std::nullopt};
        if (doc.contains("model") && !doc.at("model").is_null()) {
            const json& m = doc.at("model");
            const auto train_version = required<std::uint64_t>(m, "train_version");
            if (train_version != version) {
                throw error(errc::stale_casebase,
                            "embedded model was fitted on version " +
                                std::to_string(train_version) + ", file is at version " +
                                std::to_string(version));
            }
            if (!bins) throw error(errc::corrupt_file, "model present without bin edges");
            vdm_options opts;
            opts.alpha = required<double>(m, "alpha");
            opts.q = required<double>(m, "q");
            opts.attribute_weights = required<std::vector<double>>(m, "attribute_weights");
            out.model = restore_vdm(
                opts, *bins, train_version,
                required<std::vector<std::vector<class_distribution>>>(m, "counts"));
        }
        return out;
    } catch (const error& e) {
        if (e.code() == errc::stale_casebase || e.code() == errc::corrupt_file) throw;
        throw error(errc::corrupt_file, std::string("case-base file rejected: ") + e.what(),
                    e.details());
    } catch (const json::exception& e) {
        throw error(errc::corrupt_file, std::string("case-base file rejected: ") + e.what());
    }
}

persisted_case_base load_persisted_case_base_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_error, "cannot open '" + path + "'");
    return load_persisted_case_base(in);
}

persisted_case_base open_case_base(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_error, "cannot open '" + path + "'");
    int first = in.peek();
    while (first == ' ' || first == '\n' || first == '\r' || first == '\t') {
        in.get();
        first = in.peek();
    }
    if (first == '{') return load_persisted_case_base(in);
    return {load_case_base(in), std::nullopt};
}

}  // namespace mcds
