#pragma once

// Canonical serialization and content hashing for structured documents.
//
// A canonical document is compact JSON: object keys sorted bytewise, no
// insignificant whitespace, UTF-8 output, integers printed as integers and
// floating point numbers in shortest round-trip form. Two documents that are
// equal up to key order serialize to identical bytes. Non-finite numbers have
// no JSON spelling and are rejected.

#include <string>
#include <string_view>

#include "json.hpp"

namespace substrate {

using Document = nlohmann::json;

// Throws SubstrateError(kNonFiniteNumber) if any number in the tree is NaN/inf.
void require_finite(const Document& doc);

std::string canonical_json(const Document& doc);

// Lowercase hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

// SHA-256 of canonical_json(doc); always 64 hex digits.
std::string canonical_hash(const Document& doc);

}  // namespace substrate
