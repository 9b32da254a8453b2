/**
 * @file error.hpp
 * @brief Error codes shared by every mcds module and the HTTP service
 *
 * Every failure raised by the library is an mcds::error carrying one
 * errc value. The service maps each errc 1:1 onto a wire code and an
 * HTTP status, so adding a code here means adding it to the table in
 * error.cpp as well.
 */

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcds {

enum class errc {
    // casebase
    malformed_record,
    parse_error,
    domain_error,
    empty_input,
    argument_error,
    conflict,
    validation_error,
    io_error,
    corrupt_file,
    stale_casebase,
    // similarity
    fit_error,
    lookup_error,
    state_error,
    stale_model,
    // electre
    encoding_error,
    // pipeline
    sequencing_error,
    no_candidates,
    incomplete_input,
    choice_error,
    retention_refused,
    // service
    not_found,
    bad_request,
    internal_error,
};

/// All codes, in declaration order.
[[nodiscard]] std::span<const errc> all_error_codes();

/// Stable wire name, e.g. "malformed_record".
[[nodiscard]] std::string_view to_string(errc code);

/// HTTP status the service answers with for this code.
[[nodiscard]] int http_status(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message,
          std::vector<std::string> details = {})
        : std::runtime_error(message), code_(code), details_(std::move(details)) {}

    [[nodiscard]] errc code() const noexcept { return code_; }

    /// Extra items, e.g. every violation found by validation.
    [[nodiscard]] const std::vector<std::string>& details() const noexcept {
        return details_;
    }

private:
    errc code_;
    std::vector<std::string> details_;
};

}  // namespace mcds
