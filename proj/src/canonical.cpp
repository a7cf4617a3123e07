#include "substrate/canonical.hpp"

#include <array>
#include <cmath>

#include <openssl/evp.h>

#include "substrate/error.hpp"

namespace substrate {

void require_finite(const Document& doc) {
  switch (doc.type()) {
    case Document::value_t::number_float:
      if (!std::isfinite(doc.get<double>())) {
        throw SubstrateError(ErrorCode::kNonFiniteNumber, "document contains a non-finite number");
      }
      break;
    case Document::value_t::object:
    case Document::value_t::array:
      for (const auto& child : doc) require_finite(child);
      break;
    default:
      break;
  }
}

std::string canonical_json(const Document& doc) {
  require_finite(doc);
  // nlohmann::json keeps object keys in a std::map, so dump() is already
  // key-sorted; strict error handling rejects invalid UTF-8.
  return doc.dump(-1, ' ', false, Document::error_handler_t::strict);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw SubstrateError(ErrorCode::kIo, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string canonical_hash(const Document& doc) { return sha256_hex(canonical_json(doc)); }

}  // namespace substrate
