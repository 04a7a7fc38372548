#ifndef BRS_SYNTH_HPP
#define BRS_SYNTH_HPP

#include <cstdint>
#include <map>

#include <nlohmann/json_fwd.hpp>

#include "brs/granulation.hpp"

namespace brs {

// Synthetic decision table with planted granule structure.
struct SynthSpec {
  Schema schema;
  Granulization planted_cuts;
  std::map<GranuleSignature, double> rule_probs;  // signature -> P(d = 1)
  double default_prob = 0.5;  // signatures absent from rule_probs
  double noise = 0.0;         // label-flip probability, in [0, 0.5)
  std::size_t n_objects = 0;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static SynthSpec from_json(const nlohmann::json& j);
};

struct SynthTruth {
  Granulization cuts;
  std::map<GranuleSignature, double> rule_probs;
  std::map<GranuleSignature, std::size_t> signature_counts;  // realized

  nlohmann::json to_json(const Schema& schema) const;
};

// Attribute values uniform within ranges; decisions drawn from the
// planted rule probabilities, then flipped with probability noise.
std::pair<InformationTable, SynthTruth> generate(const SynthSpec& spec);

// Deterministic planted rule: probability 0 or 1 for every cell of the
// granule grid, drawn from the seed.
std::map<GranuleSignature, double> random_deterministic_rule(
    const Schema& schema, const Granulization& cuts, std::uint64_t seed);

// Six attributes shaped like a demographic survey (race, mothers age,
// education, gravidity, parity, fathers age).
Schema demographic_schema();

}  // namespace brs

#endif  // BRS_SYNTH_HPP
