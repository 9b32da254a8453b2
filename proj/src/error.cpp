#include "mcds/error.hpp"

#include <array>

namespace mcds {

namespace {

struct code_info {
    errc code;
    std::string_view name;
    int status;
};

constexpr std::array<code_info, 23> code_table{{
    {errc::malformed_record, "malformed_record", 400},
    {errc::parse_error, "parse_error", 400},
    {errc::domain_error, "domain_error", 400},
    {errc::empty_input, "empty_input", 400},
    {errc::argument_error, "argument_error", 400},
    {errc::conflict, "conflict", 409},
    {errc::validation_error, "validation_error", 422},
    {errc::io_error, "io_error", 500},
    {errc::corrupt_file, "corrupt_file", 500},
    {errc::stale_casebase, "stale_casebase", 500},
    {errc::fit_error, "fit_error", 500},
    {errc::lookup_error, "lookup_error", 404},
    {errc::state_error, "state_error", 500},
    {errc::stale_model, "stale_model", 503},
    {errc::encoding_error, "encoding_error", 422},
    {errc::sequencing_error, "sequencing_error", 409},
    {errc::no_candidates, "no_candidates", 422},
    {errc::incomplete_input, "incomplete_input", 422},
    {errc::choice_error, "choice_error", 422},
    {errc::retention_refused, "retention_refused", 409},
    {errc::not_found, "not_found", 404},
    {errc::bad_request, "bad_request", 400},
    {errc::internal_error, "internal_error", 500},
}};

constexpr std::array<errc, code_table.size()> make_codes() {
    std::array<errc, code_table.size()> out{};
    for (std::size_t i = 0; i < code_table.size(); ++i) out[i] = code_table[i].code;
    return out;
}

constexpr auto codes = make_codes();

const code_info& lookup(errc code) {
    for (const auto& info : code_table) {
        if (info.code == code) return info;
    }
    return code_table.back();
}

}  // namespace

std::span<const errc> all_error_codes() { return codes; }

std::string_view to_string(errc code) { return lookup(code).name; }

int http_status(errc code) { return lookup(code).status; }

}  // namespace mcds
