#include "ambicon/io.hpp"

#include <json.hpp>

namespace ambicon::io {

namespace {

using json = nlohmann::ordered_json;

Rational rat_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  if (v.is_number_float())
    throw std::invalid_argument(where +
                                ": non-integer numeric literal; write it as a string "
                                "(\"1/4\" or \"0.25\") to keep arithmetic exact");
  throw std::invalid_argument(where + ": expected an integer or a rational string");
}

json rat_to_json(const Rational& q) { return rational_to_string(q); }

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw std::invalid_argument("malformed JSON");
  return doc;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("costs") || !doc.contains("rewards") ||
      !doc.contains("probs"))
    throw std::invalid_argument("instance JSON needs costs, rewards, and probs");
  const json& jc = doc["costs"];
  const json& jr = doc["rewards"];
  const json& jp = doc["probs"];
  if (!jc.is_array() || jc.empty() || !jr.is_array() || jr.empty() || !jp.is_array())
    throw std::invalid_argument("costs, rewards, and probs must be nonempty arrays");
  const int n = static_cast<int>(jc.size());
  const int m = static_cast<int>(jr.size());
  if (static_cast<int>(jp.size()) != n)
    throw std::invalid_argument("probs must have one row per action");

  RatVec costs(n), rewards(m);
  for (int i = 0; i < n; ++i) {
    costs(i) = rat_from_json(jc[i], "costs[" + std::to_string(i) + "]");
    if (costs(i) < 0)
      throw std::invalid_argument("costs[" + std::to_string(i) + "] is negative");
  }
  for (int j = 0; j < m; ++j) {
    rewards(j) = rat_from_json(jr[j], "rewards[" + std::to_string(j) + "]");
    if (rewards(j) < 0)
      throw std::invalid_argument("rewards[" + std::to_string(j) + "] is negative");
  }
  RatMat probs(n, m);
  for (int i = 0; i < n; ++i) {
    if (!jp[i].is_array() || static_cast<int>(jp[i].size()) != m)
      throw std::invalid_argument("probs row " + std::to_string(i) +
                                  " must have one entry per outcome");
    Rational total = 0;
    for (int j = 0; j < m; ++j) {
      probs(i, j) = rat_from_json(
          jp[i][j], "probs[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      if (probs(i, j) < 0)
        throw std::invalid_argument("probs[" + std::to_string(i) + "][" +
                                    std::to_string(j) + "] is negative");
      total += probs(i, j);
    }
    if (total != 1)
      throw std::invalid_argument("probs row " + std::to_string(i) + " sums to " +
                                  rational_to_string(total) + ", expected 1");
  }
  return Instance(std::move(costs), std::move(rewards), std::move(probs));
}

std::string emit_instance(const Instance& inst) {
  json doc;
  doc["costs"] = json::array();
  for (int i = 0; i < inst.n(); ++i) doc["costs"].push_back(rat_to_json(inst.cost(i)));
  doc["rewards"] = json::array();
  for (int j = 0; j < inst.m(); ++j) doc["rewards"].push_back(rat_to_json(inst.reward(j)));
  doc["probs"] = json::array();
  for (int i = 0; i < inst.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < inst.m(); ++j) row.push_back(rat_to_json(inst.prob(i, j)));
    doc["probs"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

AmbiguousContract parse_tau(const std::string& text, int m) {
  json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("contracts") || !doc["contracts"].is_array() ||
      doc["contracts"].empty())
    throw std::invalid_argument("tau JSON needs a nonempty contracts array");
  AmbiguousContract tau;
  int k = 0;
  for (const json& jt : doc["contracts"]) {
    if (!jt.is_array() || static_cast<int>(jt.size()) != m)
      throw std::invalid_argument("contracts[" + std::to_string(k) +
                                  "] must have one entry per outcome");
    Contract t(m);
    for (int j = 0; j < m; ++j) {
      t(j) = rat_from_json(jt[j], "contracts[" + std::to_string(k) + "][" +
                                      std::to_string(j) + "]");
      if (t(j) < 0)
        throw std::invalid_argument("contracts[" + std::to_string(k) + "][" +
                                    std::to_string(j) + "] is negative");
    }
    tau.add(t);
    ++k;
  }
  return tau;
}

std::string emit_tau(const AmbiguousContract& tau) {
  json doc;
  doc["contracts"] = json::array();
  for (const auto& t : tau.contracts) {
    json row = json::array();
    for (int j = 0; j < t.size(); ++j) row.push_back(rat_to_json(t(j)));
    doc["contracts"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

}  // namespace ambicon::io
