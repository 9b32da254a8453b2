#include "mcds/casebase.hpp"

#include "mcds/error.hpp"
#include "mcds/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace mcds {

namespace {

constexpr std::array<std::string_view, attribute_count> attribute_names{
    "Number of times pregnant",
    "Plasma glucose concentration",
    "Diastolic blood pressure",
    "Triceps skin fold thickness",
    "2-Hour serum insulin",
    "Body mass index",
    "Diabetes pedigree function",
    "Age",
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::optional<double> parse_decimal(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::fixed);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string where(std::size_t line_number) {
    return line_number == 0 ? std::string{} : " at line " + std::to_string(line_number);
}

std::string format_value(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::vector<attribute_schema> pima_schema(int bin_count) {
    std::vector<attribute_schema> schema;
    schema.reserve(attribute_count);
    for (std::size_t i = 0; i < attribute_count; ++i) {
        attribute_schema a;
        a.index = static_cast<int>(i) + 1;
        a.name = std::string(attribute_names[i]);
        a.kind = (i == 0) ? attribute_kind::count : attribute_kind::continuous;
        // glucose, blood pressure, skin fold, insulin and BMI use 0 for "not measured"
        a.missing_code_is_zero = (i >= 1 && i <= 5);
        a.bin_count = bin_count;
        schema.push_back(std::move(a));
    }
    return schema;
}

std::string_view class_label(diagnosis d) {
    return d == diagnosis::positive ? "tested positive for diabetes"
                                    : "tested negative for diabetes";
}

diagnosis diagnosis_from_int(long long value) {
    if (value == 0) return diagnosis::negative;
    if (value == 1) return diagnosis::positive;
    throw error(errc::domain_error,
                "diagnosis must be 0 or 1, got " + std::to_string(value));
}

// ---------------------------------------------------------------------------
// discretization

bin_t attribute_bins::encode(double value) const {
    if (has_missing && value == 0.0) return missing_bin;
    const int n = bin_count();
    if (n <= 1) return 1;
    // interior edges edges[1..n-1]; a value on an edge goes to the higher bin
    const auto first = edges.begin() + 1;
    const auto last = edges.end() - 1;
    const auto pos = std::upper_bound(first, last, value);
    return static_cast<bin_t>(pos - first) + 1;
}

std::vector<bin_t> attribute_bins::labels() const {
    std::vector<bin_t> out;
    if (has_missing) out.push_back(missing_bin);
    for (int b = 1; b <= bin_count(); ++b) out.push_back(b);
    return out;
}

std::vector<bin_t> discretization::encode(std::span<const double> descriptors) const {
    if (descriptors.size() != attributes.size()) {
        throw error(errc::state_error, "descriptor count does not match the discretization");
    }
    std::vector<bin_t> out(descriptors.size());
    for (std::size_t a = 0; a < descriptors.size(); ++a) {
        out[a] = attributes[a].encode(descriptors[a]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// case_base

case_base::case_base(std::vector<attribute_schema> schema, std::vector<case_record> cases,
                     std::uint64_t version, std::optional<discretization> bins)
    : schema_(std::move(schema)),
      cases_(std::move(cases)),
      version_(version),
      bins_(std::move(bins)) {
    index_.reserve(cases_.size());
    for (std::size_t i = 0; i < cases_.size(); ++i) {
        const auto& c = cases_[i];
        if (!c.dx) {
            throw error(errc::validation_error, "stored case '" + c.id + "' has no diagnosis");
        }
        if (!index_.emplace(c.id, i).second) {
            throw error(errc::conflict, "duplicate case id '" + c.id + "'");
        }
    }
}

const case_record* case_base::find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &cases_[it->second];
}

std::array<std::size_t, class_count> case_base::class_counts() const {
    std::array<std::size_t, class_count> counts{};
    for (const auto& c : cases_) ++counts[class_index(*c.dx)];
    return counts;
}

// ---------------------------------------------------------------------------
// loading

case_record parse_pima_line(std::string_view line, std::string id, std::size_t line_number) {
    line = trim(line);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (fields.size() != attribute_count + 1) {
        throw error(errc::malformed_record, "expected 9 fields, got " +
                                                std::to_string(fields.size()) + where(line_number));
    }

    case_record c;
    c.id = std::move(id);
    for (std::size_t a = 0; a < attribute_count; ++a) {
        const auto value = parse_decimal(fields[a]);
        if (!value) {
            throw error(errc::parse_error, "attribute '" + std::string(attribute_names[a]) +
                                               "' is not a decimal number" + where(line_number));
        }
        if (*value < 0.0) {
            throw error(errc::domain_error, "attribute '" + std::string(attribute_names[a]) +
                                                "' is negative" + where(line_number));
        }
        c.descriptors[a] = *value;
    }
    const auto cls = parse_decimal(fields[attribute_count]);
    if (!cls) {
        throw error(errc::parse_error, "class attribute is not a decimal number" + where(line_number));
    }
    if (*cls != 0.0 && *cls != 1.0) {
        throw error(errc::domain_error, "class must be 0 or 1, got '" +
                                            std::string(trim(fields[attribute_count])) + "'" +
                                            where(line_number));
    }
    c.dx = *cls == 1.0 ? diagnosis::positive : diagnosis::negative;
    c.actions.emplace_back(class_label(*c.dx));
    return c;
}

case_base load_case_base(std::istream& source) {
    std::vector<case_record> cases;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(source, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        char id[16];
        std::snprintf(id, sizeof id, "pima-%04zu", cases.size() + 1);
        cases.push_back(parse_pima_line(line, id, line_number));
    }
    if (cases.empty()) throw error(errc::empty_input, "no records in input");
    return case_base(pima_schema(), std::move(cases));
}

case_base load_case_base_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_error, "cannot open '" + path + "'");
    return load_case_base(in);
}

// ---------------------------------------------------------------------------
// split / discretize / retain

std::pair<case_base, case_base> split_train_test(const case_base& cb, std::size_t n_train,
                                                 std::optional<std::uint64_t> seed) {
    if (n_train == 0 || n_train >= cb.size()) {
        throw error(errc::argument_error, "n_train must be in (0, " + std::to_string(cb.size()) +
                                              "), got " + std::to_string(n_train));
    }
    std::vector<std::size_t> order(cb.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (seed) {
        std::mt19937_64 engine(*seed);
        seeded_shuffle(std::span<std::size_t>(order), engine);
    }
    std::vector<case_record> train;
    std::vector<case_record> test;
    train.reserve(n_train);
    test.reserve(cb.size() - n_train);
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? train : test).push_back(cb.cases()[order[i]]);
    }
    return {case_base(cb.schema(), std::move(train), cb.version(), cb.bins()),
            case_base(cb.schema(), std::move(test), cb.version(), cb.bins())};
}

case_base discretize(const case_base& cb, const std::vector<attribute_schema>& schema) {
    if (cb.empty()) throw error(errc::empty_input, "cannot discretize an empty case-base");
    if (schema.size() != attribute_count) {
        throw error(errc::argument_error, "schema must describe 8 attributes");
    }

    discretization bins;
    for (std::size_t a = 0; a < attribute_count; ++a) {
        const auto& attr = schema[a];
        if (attr.bin_count < 2) {
            throw error(errc::argument_error, "bin_count of '" + attr.name + "' must be >= 2");
        }
        double lo = 0.0;
        double hi = 0.0;
        bool seen = false;
        for (const auto& c : cb.cases()) {
            const double v = c.descriptors[a];
            if (attr.missing_code_is_zero && v == 0.0) continue;
            lo = seen ? std::min(lo, v) : v;
            hi = seen ? std::max(hi, v) : v;
            seen = true;
        }
        attribute_bins ab;
        ab.has_missing = attr.missing_code_is_zero;
        if (!seen || lo == hi) {
            ab.edges = {lo, hi};
        } else {
            const double width = (hi - lo) / attr.bin_count;
            ab.edges.resize(static_cast<std::size_t>(attr.bin_count) + 1);
            for (int i = 0; i < attr.bin_count; ++i) ab.edges[i] = lo + i * width;
            ab.edges.back() = hi;
        }
        bins.attributes.push_back(std::move(ab));
    }
    return apply_discretization(case_base(schema, cb.cases(), cb.version()), bins);
}

case_base apply_discretization(const case_base& cb, const discretization& bins) {
    std::vector<case_record> cases = cb.cases();
    for (auto& c : cases) c.discretized = bins.encode(c.descriptors);
    return case_base(cb.schema(), std::move(cases), cb.version(), bins);
}

case_base retain_case(const case_base& cb, case_record c) {
    std::vector<std::string> violations;
    if (!c.dx) violations.emplace_back("diagnosis: missing");
    if (c.actions.empty()) violations.emplace_back("actions: at least one action is required");
    for (std::size_t a = 0; a < attribute_count; ++a) {
        const double v = c.descriptors[a];
        if (!std::isfinite(v) || v < 0.0) {
            violations.push_back(std::string(attribute_names[a]) + ": invalid value " +
                                 format_value(v));
        }
    }
    if (!violations.empty()) {
        throw error(errc::validation_error, "case cannot be retained", std::move(violations));
    }

    if (c.id.empty()) {
        std::size_t n = cb.size() + 1;
        do {
            c.id = "case-" + std::to_string(n++);
        } while (cb.contains(c.id));
    } else if (cb.contains(c.id)) {
        throw error(errc::conflict, "case id '" + c.id + "' already in the case-base");
    }
    if (cb.bins()) {
        c.discretized = cb.bins()->encode(c.descriptors);
    }

    std::vector<case_record> cases = cb.cases();
    cases.push_back(std::move(c));
    return case_base(cb.schema(), std::move(cases), cb.version() + 1, cb.bins());
}

case_record validate_new_case(const std::vector<attribute_schema>& schema,
                              std::span<const double> raw, std::vector<std::string> actions,
                              std::optional<long long> dx, std::string id) {
    std::vector<std::string> violations;
    if (raw.size() != attribute_count || schema.size() != attribute_count) {
        violations.push_back("arity: expected 8 descriptors, got " + std::to_string(raw.size()));
    }
    const std::size_t n = std::min({raw.size(), attribute_count, schema.size()});
    for (std::size_t a = 0; a < n; ++a) {
        const double v = raw[a];
        if (!std::isfinite(v)) {
            violations.push_back(schema[a].name + ": non-finite value");
        } else if (v < 0.0) {
            violations.push_back(schema[a].name + ": negative value " + format_value(v));
        }
    }
    if (dx && *dx != 0 && *dx != 1) {
        violations.push_back("diagnosis: must be 0 or 1, got " + std::to_string(*dx));
    }
    for (const auto& action : actions) {
        if (trim(action).empty()) violations.emplace_back("actions: empty action label");
    }
    if (!violations.empty()) {
        throw error(errc::validation_error, "invalid case", std::move(violations));
    }

    case_record c;
    c.id = std::move(id);
    std::copy(raw.begin(), raw.end(), c.descriptors.begin());
    c.actions = std::move(actions);
    if (dx) c.dx = diagnosis_from_int(*dx);
    return c;
}

}  // namespace mcds
