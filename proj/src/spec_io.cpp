#include "cpa/spec_io.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cpa {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SpecError(path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

Severity parse_severity(const json& sev, const std::string& path, const TruncationPolicy& policy) {
  const json& type = require(sev, "type", path);
  if (!type.is_string()) fail(path + ".type", "expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "geometric") {
    const double alpha = number_at(require(sev, "alpha", path), path + ".alpha");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(path + ".alpha", "must lie in (0, 1)");
    return geometric(alpha, policy);
  }
  if (kind == "pmf") {
    const json& probs = require(sev, "probs", path);
    if (!probs.is_array() || probs.size() < 2) fail(path + ".probs", "expected an array of at least 2 numbers");
    if (probs.size() > policy.max_support + 1) {
      fail(path + ".probs", "longer than max_support + 1 = " + std::to_string(policy.max_support + 1));
    }
    std::vector<double> values;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      values.push_back(number_at(probs[k], path + ".probs[" + std::to_string(k) + "]"));
    }
    double tail = 0.0;
    if (sev.contains("tail_mass")) tail = number_at(sev["tail_mass"], path + ".tail_mass");
    try {
      return Severity(Pmf(std::move(values), tail));
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  fail(path + ".type", "unknown severity type '" + kind + "' (expected geometric or pmf)");
}

json number_or_null(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  if (std::isnan(*v)) return "nan";
  return *v;
}

json distance_json(const DistanceResult& d) {
  return {{"value", number_or_null(d.value)}, {"error_budget", d.error_budget}};
}

}  // namespace

SumSpec parse_sum_spec(const std::string& text, const PolicyOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected a top-level object");

  TruncationPolicy policy;
  if (doc.contains("truncation")) {
    const json& t = doc["truncation"];
    if (!t.is_object()) fail("truncation", "expected an object");
    if (t.contains("epsilon")) policy.epsilon = number_at(t["epsilon"], "truncation.epsilon");
    if (t.contains("max_support")) {
      const json& m = t["max_support"];
      if (!m.is_number_integer() || m.get<long long>() < 1) {
        fail("truncation.max_support", "expected a positive integer");
      }
      policy.max_support = m.get<std::size_t>();
    }
  }
  if (overrides.epsilon) policy.epsilon = *overrides.epsilon;
  if (overrides.max_support) policy.max_support = *overrides.max_support;
  try {
    policy.validate();
  } catch (const std::invalid_argument& e) {
    fail("truncation", e.what());
  }
  if (policy.max_support > kMaxSupport) {
    fail("truncation.max_support", "exceeds the desk-scale cap of " + std::to_string(kMaxSupport));
  }

  const json& list = require(doc, "summands", "$");
  if (!list.is_array() || list.empty()) fail("summands", "expected a non-empty array");
  if (list.size() > kMaxSummands) {
    fail("summands", "more than " + std::to_string(kMaxSummands) + " summands is beyond desk scale");
  }
  std::vector<SummandSpec> summands;
  summands.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "summands[" + std::to_string(i) + "]";
    const double p = number_at(require(list[i], "p", path), path + ".p");
    if (!(p > 0.0 && p < 1.0)) fail(path + ".p", "must lie in (0, 1)");
    summands.push_back({p, parse_severity(require(list[i], "severity", path), path + ".severity", policy)});
  }
  return SumSpec(std::move(summands), policy);
}

json to_json(const Pmf& p) {
  return {{"probs", std::vector<double>(p.probs().begin(), p.probs().end())}, {"tail_mass", p.tail_mass()}};
}

json to_json(const BoundReport& r) {
  const auto& b = r.bounds;
  json stein = {{"delta", number_or_null(b.stein.delta)},
                {"h0", b.stein.h0},
                {"h", number_or_null(b.stein.h)},
                {"g", number_or_null(b.stein.g)},
                {"monotone_jq", b.stein.monotone_jq},
                {"vacuous", b.stein.vacuous}};
  return {{"lambda", b.lambda},
          {"q", b.q},
          {"stein", stein},
          {"thm1_kl", number_or_null(b.thm1_kl)},
          {"thm1_tv", number_or_null(b.thm1_tv)},
          {"thm2_tv", number_or_null(b.thm2_tv)},
          {"thm2_j1_tv", number_or_null(r.thm2_j1_tv)},
          {"thm3_tv", number_or_null(b.thm3_tv)},
          {"j2_tv", number_or_null(r.j2_tv)},
          {"lecam", b.lecam},
          {"barbour_hall", number_or_null(b.barbour_hall)},
          {"roos_equal", number_or_null(b.roos_equal)},
          {"roos_general", number_or_null(b.roos_general)},
          {"bcl_stein", number_or_null(b.bcl_stein)},
          {"exact_tv", distance_json(r.exact_tv)},
          {"exact_kl", distance_json(r.exact_kl)},
          {"flags", b.flags}};
}

json to_json(const RegimeResult& r) {
  json fits = json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"bound", f.bound_name},
                    {"slope", f.slope},
                    {"intercept", f.intercept},
                    {"r_squared", f.r_squared},
                    {"points", f.points},
                    {"degenerate", f.degenerate}});
  }
  json values = json::object();
  for (std::size_t b = 0; b < r.bound_names.size(); ++b) {
    json column = json::array();
    for (double v : r.values[b]) column.push_back(number_or_null(v));
    values[r.bound_names[b]] = column;
  }
  return {{"regime", to_string(r.regime)}, {"parameter", r.parameter}, {"n", r.n_values},
          {"values", values},              {"fits", fits}};
}

json to_json(const PropositionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"p", row.p},
                    {"n", row.n},
                    {"thm1_tv", row.thm1_tv},
                    {"lecam", row.lecam},
                    {"barbour_hall", row.barbour_hall},
                    {"roos_equal", number_or_null(row.roos_equal)},
                    {"in_region1", row.in_region1},
                    {"part1", row.part1},
                    {"in_region2", row.in_region2},
                    {"part2", row.part2},
                    {"in_region3", row.in_region3},
                    {"part3", row.part3}});
  }
  return {{"pass", r.pass},
          {"part1_failures", r.part1_failures},
          {"part2_failures", r.part2_failures},
          {"part3_failures", r.part3_failures},
          {"rows", rows}};
}

}  // namespace cpa
