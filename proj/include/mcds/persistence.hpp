/**
 * @file persistence.hpp
 * @brief Versioned case-base file
 *
 * One JSON document holding the schema, the bin edges, every case, the
 * class labels, an FNV-1a checksum of the cases and optionally the fitted
 * MVDM counts. Loading refuses a file whose checksum does not match
 * (corrupt_file) or whose embedded model was fitted on another version
 * (stale_casebase). See README.md for the field list.
 */

#pragma once

#include "mcds/casebase.hpp"
#include "mcds/similarity.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace mcds {

inline constexpr std::string_view casebase_format_tag = "mcds-casebase";
inline constexpr int casebase_format_version = 1;

struct persisted_case_base {
    case_base cb;
    std::optional<vdm_model> model;
};

void save_case_base(std::ostream& out, const case_base& cb, const vdm_model* model = nullptr);
void save_case_base_file(const std::string& path, const case_base& cb,
                         const vdm_model* model = nullptr);

[[nodiscard]] persisted_case_base load_persisted_case_base(std::istream& in);
[[nodiscard]] persisted_case_base load_persisted_case_base_file(const std::string& path);

/// Opens either a persisted case-base (.json) or a raw Pima CSV.
[[nodiscard]] persisted_case_base open_case_base(const std::string& path);

}  // namespace mcds
