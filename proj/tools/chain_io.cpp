#include "chain_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "jetflow/generators.hpp"

namespace jetflow::cli {

namespace {

using nlohmann::json;

TailPolicy parse_tail(const std::string& s) {
  if (s == "repeat-last") return TailPolicy::kRepeatLast;
  if (s == "cycle") return TailPolicy::kCycle;
  if (s == "identity") return TailPolicy::kIdentity;
  throw ChainFileError("field 'tail' must be repeat-last, cycle, or identity");
}

std::string tail_name(TailPolicy t) {
  switch (t) {
    case TailPolicy::kRepeatLast:
      return "repeat-last";
    case TailPolicy::kCycle:
      return "cycle";
    case TailPolicy::kIdentity:
      return "identity";
  }
  return "repeat-last";
}

StochasticMatrix parse_matrix(const json& m, int n, std::size_t index,
                              double row_tol) {
  if (!m.is_array() || m.size() != static_cast<std::size_t>(n)) {
    throw ChainFileError("matrices[" + std::to_string(index) + "] must have " +
                         std::to_string(n) + " rows");
  }
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = m[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw ChainFileError("matrices[" + std::to_string(index) + "] row " +
                           std::to_string(i) + " must have " +
                           std::to_string(n) + " entries");
    }
    for (int j = 0; j < n; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw ChainFileError("matrices[" + std::to_string(index) + "] entry (" +
                             std::to_string(i) + "," + std::to_string(j) +
                             ") is not a number");
      }
      out(i, j) = v.get<double>();
    }
  }
  try {
    return validate_stochastic(out, row_tol);
  } catch (const Error& e) {
    throw ChainFileError("matrices[" + std::to_string(index) +
                         "]: " + e.what());
  }
}

}  // namespace

ChainSpec parse_chain_json(const nlohmann::json& doc, double row_tol) {
  if (!doc.is_object()) throw ChainFileError("chain file must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ChainFileError("field 'kind' (string) is required");
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ChainFileError("field 'n' (integer) is required");
  }
  const int n = doc["n"].get<int>();
  if (n < 1 || n > 64) throw ChainFileError("'n' must lie in [1, 64]");
  const std::string kind = doc["kind"].get<std::string>();

  if (kind == "generator") {
    if (!doc.contains("family") || !doc["family"].is_string()) {
      throw ChainFileError("generator chains need a 'family' string");
    }
    std::uint64_t seed = 0;
    if (doc.contains("seed")) seed = doc["seed"].get<std::uint64_t>();
    std::map<std::string, double> params;
    if (doc.contains("params")) {
      if (!doc["params"].is_object()) {
        throw ChainFileError("field 'params' must be an object of numbers");
      }
      for (const auto& [key, value] : doc["params"].items()) {
        if (!value.is_number()) {
          throw ChainFileError("params." + key + " is not a number");
        }
        params[key] = value.get<double>();
      }
    }
    return make_chain(doc["family"].get<std::string>(), n, seed, params);
  }

  if (!doc.contains("matrices") || !doc["matrices"].is_array() ||
      doc["matrices"].empty()) {
    throw ChainFileError("field 'matrices' (nonempty array) is required");
  }
  std::vector<StochasticMatrix> mats;
  mats.reserve(doc["matrices"].size());
  for (std::size_t k = 0; k < doc["matrices"].size(); ++k) {
    mats.push_back(parse_matrix(doc["matrices"][k], n, k, row_tol));
  }

  if (kind == "static") {
    if (mats.size() != 1) {
      throw ChainFileError("static chains take exactly one matrix");
    }
    return ChainSpec::constant(std::move(mats.front()));
  }
  if (kind == "periodic") {
    return ChainSpec::periodic(std::move(mats));
  }
  if (kind == "explicit") {
    if (!doc.contains("tail") || !doc["tail"].is_string()) {
      throw ChainFileError("explicit chains require a 'tail' policy");
    }
    return ChainSpec::explicit_list(std::move(mats),
                                    parse_tail(doc["tail"].get<std::string>()));
  }
  throw ChainFileError("unknown chain kind: " + kind);
}

ChainSpec parse_chain_file(const std::string& path, double row_tol) {
  std::ifstream in(path);
  if (!in) throw ChainFileError("cannot open chain file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ChainFileError(path + ": " + e.what());
  }
  try {
    return parse_chain_json(doc, row_tol);
  } catch (const ChainFileError& e) {
    throw ChainFileError(path + ": " + e.what());
  }
}

nlohmann::ordered_json chain_to_json(const ChainSpec& spec) {
  nlohmann::ordered_json doc;
  doc["n"] = spec.agents();
  switch (spec.kind()) {
    case ChainSpec::Kind::kStatic:
      doc["kind"] = "static";
      break;
    case ChainSpec::Kind::kPeriodic:
      doc["kind"] = "periodic";
      break;
    case ChainSpec::Kind::kExplicit:
      doc["kind"] = "explicit";
      doc["tail"] = tail_name(spec.tail());
      break;
    case ChainSpec::Kind::kGenerator: {
      doc["kind"] = "generator";
      doc["family"] = spec.source().family();
      doc["seed"] = spec.source().seed();
      nlohmann::ordered_json params = nlohmann::ordered_json::object();
      for (const auto& [key, value] : spec.source().params()) {
        params[key] = value;
      }
      doc["params"] = params;
      return doc;
    }
  }
  nlohmann::ordered_json mats = nlohmann::ordered_json::array();
  for (const auto& m : spec.matrices()) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.size(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int j = 0; j < m.size(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  doc["matrices"] = mats;
  return doc;
}

}  // namespace jetflow::cli
