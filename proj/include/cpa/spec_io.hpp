#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cpa/bounds.hpp"
#include "cpa/compound.hpp"
#include "cpa/experiments.hpp"

namespace cpa {

/// Schema violation in a spec file. The message names the offending field
/// (e.g. "summands[2].severity.alpha") or the line and column of a syntax error.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolicyOverrides {
  std::optional<double> epsilon;
  std::optional<std::size_t> max_support;
};

/// Parses
///   {"summands": [{"p": 0.1, "severity": {"type": "geometric", "alpha": 0.2}},
///                 {"p": 0.2, "severity": {"type": "pmf", "probs": [0, 0.5, 0.5]}}],
///    "truncation": {"epsilon": 1e-12, "max_support": 4096}}
/// Command-line overrides win over the file's truncation block.
SumSpec parse_sum_spec(const std::string& text, const PolicyOverrides& overrides = {});

nlohmann::json to_json(const Pmf& p);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const RegimeResult& r);
nlohmann::json to_json(const PropositionReport& r);

}  // namespace cpa
