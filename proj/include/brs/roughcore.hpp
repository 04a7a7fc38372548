#ifndef BRS_ROUGHCORE_HPP
#define BRS_ROUGHCORE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "brs/granulation.hpp"

namespace brs {

// Partition of the object set under the indiscernibility relation over
// an attribute subset B.
struct EquivalenceClasses {
  std::vector<GranuleSignature> signatures;      // one per block
  std::vector<std::vector<std::size_t>> blocks;  // sorted object indices
  std::vector<std::size_t> block_of;             // object -> block id

  std::size_t n_objects() const { return block_of.size(); }
  std::size_t n_blocks() const { return blocks.size(); }
};

struct Approximation {
  std::vector<std::size_t> lower;  // sorted
  std::vector<std::size_t> upper;  // sorted
};

struct Rule {
  GranuleSignature signature;
  int decision = 0;            // majority label; tie -> 0 with tie flag
  double plausibility = 0.0;   // fraction of the class with decision 1
  std::size_t positives = 0;
  std::size_t support = 0;     // class size
  bool tie = false;

  bool certain() const { return plausibility == 0.0 || plausibility == 1.0; }
};

struct RuleSet {
  std::map<GranuleSignature, Rule> rules;

  std::size_t size() const { return rules.size(); }
  nlohmann::json to_json() const;
  static RuleSet from_json(const nlohmann::json& j);
};

// Objects share a block iff their signatures agree on every attribute
// in attrs. Empty attrs -> DomainError.
EquivalenceClasses partition_classes(const GranularTable& gt,
                                     std::span<const std::size_t> attrs);
// B = all attributes.
EquivalenceClasses partition_classes(const GranularTable& gt);

// in_x is a membership mask over the universe (size n_objects).
std::vector<std::size_t> lower_approximation(const EquivalenceClasses& classes,
                                             const std::vector<char>& in_x);
std::vector<std::size_t> upper_approximation(const EquivalenceClasses& classes,
                                             const std::vector<char>& in_x);

// |class(x) ∩ X| / |class(x)|
double rough_membership(const EquivalenceClasses& classes, std::size_t object,
                        const std::vector<char>& in_x);

// |lower| / |upper|; 1 when both are empty.
double approximation_accuracy(const Approximation& approx);

// One rule per equivalence class over all attributes.
RuleSet induce_rules(const GranularTable& gt);

// 2*plausibility - 1 for a matching rule (+1 certainly positive,
// -1 certainly negative); nullopt = abstain on unseen signatures.
std::optional<double> classify(const RuleSet& rules,
                               const GranuleSignature& sig);

}  // namespace brs

#endif  // BRS_ROUGHCORE_HPP
