#ifndef CHAINGLUE_CLI_CHAIN_FILE_HPP
#define CHAINGLUE_CLI_CHAIN_FILE_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "chainglue/core.hpp"
#include "chainglue/errors.hpp"

namespace chainglue::cli {

inline constexpr int kChainFileVersion = 1;

/// Malformed file contents or unreadable file.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Chain files are JSON objects:
//
//   {"version": 1,
//    "states": ["1", "2", "3"],
//    "rates": [[-2, 1, 1], [1, -1, 0], [2, 0, -2]]}
//
// or with sparse rates, where the diagonal is implied:
//
//   "rates": [{"from": "1", "to": "2", "rate": 1.0}, ...]
//
// Triples may also be written as ["1", "2", 1.0]. Dense rates are taken
// verbatim so that validate() can report a bad diagonal. Sparse files list
// no diagonal, so their diagonal always matches the row sums.

ChainModel parse_chain(const nlohmann::json& doc);
ChainModel parse_chain(const std::string& text);
ChainModel read_chain_file(const std::filesystem::path& path);

/// Canonical form: sparse triples in row-major order, nonzero off-diagonal
/// rates only.
nlohmann::json chain_to_json(const ChainModel& model);
void write_chain_file(const std::filesystem::path& path, const ChainModel& model);

}  // namespace chainglue::cli

#endif  // CHAINGLUE_CLI_CHAIN_FILE_HPP
