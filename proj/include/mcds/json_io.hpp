/**
 * @file json_io.hpp
 * @brief nlohmann::json conversions for the domain types
 *
 * Used by the case-base file, the session audit log and the HTTP API, so
 * the field names here are the wire format documented in README.md.
 * from_json throws mcds::error(bad_request) on malformed input.
 */

#pragma once

#include "mcds/casebase.hpp"
#include "mcds/electre.hpp"
#include "mcds/error.hpp"
#include "mcds/pipeline.hpp"
#include "mcds/similarity.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace mcds {

using json = nlohmann::json;

void to_json(json& j, diagnosis d);
void from_json(const json& j, diagnosis& d);

void to_json(json& j, const attribute_schema& a);
void from_json(const json& j, attribute_schema& a);

void to_json(json& j, const attribute_bins& b);
void from_json(const json& j, attribute_bins& b);

void to_json(json& j, const discretization& d);
void from_json(const json& j, discretization& d);

void to_json(json& j, const case_record& c);
void from_json(const json& j, case_record& c);

void to_json(json& j, const neighbor& n);
void from_json(const json& j, neighbor& n);

void to_json(json& j, const criterion& c);
void from_json(const json& j, criterion& c);

void to_json(json& j, const electre_config& c);
void from_json(const json& j, electre_config& c);

void to_json(json& j, const kernel& k);
void from_json(const json& j, kernel& k);

void to_json(json& j, const outranking_graph& g);
void from_json(const json& j, outranking_graph& g);

void to_json(json& j, const session_neighbor& n);
void from_json(const json& j, session_neighbor& n);

void to_json(json& j, const transition_record& t);
void from_json(const json& j, transition_record& t);

void to_json(json& j, const decision_session& s);
void from_json(const json& j, decision_session& s);

void to_json(json& j, const choice_rules& r);

/// Reads a field with a bad_request error naming it when absent or mistyped.
template <typename T>
T required(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw error(errc::bad_request, std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw error(errc::bad_request, std::string("field '") + key + "' has the wrong type");
    }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return required<T>(j, key);
}

}  // namespace mcds
