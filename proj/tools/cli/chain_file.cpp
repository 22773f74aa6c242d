#include "cli/chain_file.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace chainglue::cli {

using nlohmann::json;

namespace {

std::string label_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("state labels must be strings or integers");
}

double rate_of(const json& v) {
  if (!v.is_number()) throw ParseError("rates must be numbers");
  return v.get<double>();
}

}  // namespace

ChainModel parse_chain(const json& doc) {
  if (!doc.is_object()) throw ParseError("chain file must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw ParseError("missing integer field 'version'");
  }
  if (doc["version"].get<int>() != kChainFileVersion) {
    throw ParseError("unsupported chain file version " + doc["version"].dump());
  }
  if (!doc.contains("states") || !doc["states"].is_array()) {
    throw ParseError("missing array field 'states'");
  }
  if (!doc.contains("rates") || !doc["rates"].is_array()) {
    throw ParseError("missing array field 'rates'");
  }

  std::vector<std::string> labels;
  std::map<std::string, Index> index;
  for (const auto& s : doc["states"]) {
    labels.push_back(label_of(s));
    if (!index.emplace(labels.back(), static_cast<Index>(labels.size() - 1)).second) {
      throw ParseError("duplicate state label '" + labels.back() + "'");
    }
  }
  const auto n = static_cast<Index>(labels.size());
  const json& rates = doc["rates"];

  // A dense matrix is n rows of n numbers. Anything else is a triple list,
  // so [from, to, rate] arrays with integer labels are read as triples
  // unless the whole list is shaped like a matrix.
  auto numeric_row = [n](const json& row) {
    if (!row.is_array() || static_cast<Index>(row.size()) != n) return false;
    for (const auto& x : row) {
      if (!x.is_number()) return false;
    }
    return true;
  };
  const bool dense = static_cast<Index>(rates.size()) == n && n > 0 &&
                     std::all_of(rates.begin(), rates.end(), numeric_row);
  if (dense) {
    Matrix q(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        q(i, j) = rate_of(rates[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      }
    }
    return ChainModel{RateMatrix(std::move(q)), std::move(labels)};
  }
  if (!rates.empty() && rates.front().is_array() && rates.front().size() != 3) {
    throw ParseError("dense rates must be " + std::to_string(n) + " rows of " + std::to_string(n) +
                     " numbers");
  }

  Matrix q = Matrix::Zero(n, n);
  std::set<std::pair<Index, Index>> seen;
  for (const auto& t : rates) {
    std::string from, to;
    double rate = 0.0;
    if (t.is_object()) {
      if (!t.contains("from") || !t.contains("to") || !t.contains("rate")) {
        throw ParseError("rate triple needs 'from', 'to' and 'rate'");
      }
      from = label_of(t["from"]);
      to = label_of(t["to"]);
      rate = rate_of(t["rate"]);
    } else if (t.is_array() && t.size() == 3) {
      from = label_of(t[0]);
      to = label_of(t[1]);
      rate = rate_of(t[2]);
    } else {
      throw ParseError("rate entries must be triples");
    }
    const auto fi = index.find(from);
    const auto ti = index.find(to);
    if (fi == index.end()) throw ParseError("rate references unknown state '" + from + "'");
    if (ti == index.end()) throw ParseError("rate references unknown state '" + to + "'");
    if (fi->second == ti->second) throw ParseError("self-loop on state '" + from + "'");
    if (!seen.emplace(fi->second, ti->second).second) {
      throw ParseError("duplicate rate " + from + " -> " + to);
    }
    q(fi->second, ti->second) = rate;
  }
  return ChainModel{RateMatrix::from_rates(q), std::move(labels)};
}

ChainModel parse_chain(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_chain(doc);
}

ChainModel read_chain_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_chain(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json chain_to_json(const ChainModel& model) {
  json rates = json::array();
  const Matrix& q = model.rates.dense();
  for (Index i = 0; i < q.rows(); ++i) {
    for (Index j = 0; j < q.cols(); ++j) {
      if (i != j && q(i, j) != 0.0) {
        rates.push_back({{"from", model.labels[i]}, {"to", model.labels[j]}, {"rate", q(i, j)}});
      }
    }
  }
  return {{"version", kChainFileVersion}, {"states", model.labels}, {"rates", std::move(rates)}};
}

void write_chain_file(const std::filesystem::path& path, const ChainModel& model) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << chain_to_json(model).dump(2) << '\n';
}

}  // namespace chainglue::cli
