#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "jetflow/chain.hpp"

namespace jetflow::cli {

/// Chain-file schema (JSON):
///   {"n": int, "kind": "static|periodic|explicit|generator",
///    "matrices": [[[row], ...], ...], "tail": "repeat-last|cycle|identity",
///    "family": str, "params": {...}, "seed": int}
/// Rows are arrays of decimal numbers; every matrix is validated.
ChainSpec parse_chain_file(const std::string& path, double row_tol = 1e-9);

ChainSpec parse_chain_json(const nlohmann::json& doc, double row_tol = 1e-9);

/// Serializes a spec back into the schema above (generator kinds keep
/// family/params/seed; realized matrices are not materialized).
nlohmann::ordered_json chain_to_json(const ChainSpec& spec);

/// Parse error with file/field context.
class ChainFileError : public Error {
 public:
  using Error::Error;
};

}  // namespace jetflow::cli
