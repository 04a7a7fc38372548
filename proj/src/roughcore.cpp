#include "brs/roughcore.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "brs/errors.hpp"

namespace brs {

EquivalenceClasses partition_classes(const GranularTable& gt,
                                     std::span<const std::size_t> attrs) {
  if (attrs.empty())
    throw DomainError("partition_classes: attribute subset is empty");

  EquivalenceClasses ec;
  ec.block_of.resize(gt.n_objects());
  std::map<GranuleSignature, std::size_t> index;
  for (std::size_t i = 0; i < gt.n_objects(); ++i) {
    GranuleSignature key(attrs.size());
    for (std::size_t j = 0; j < attrs.size(); ++j)
      key[j] = gt.signatures[i][attrs[j]];
    auto [it, inserted] = index.try_emplace(key, ec.blocks.size());
    if (inserted) {
      ec.signatures.push_back(key);
      ec.blocks.emplace_back();
    }
    ec.block_of[i] = it->second;
    ec.blocks[it->second].push_back(i);
  }
  return ec;
}

EquivalenceClasses partition_classes(const GranularTable& gt) {
  std::vector<std::size_t> all(gt.signatures.empty()
                                   ? 0
                                   : gt.signatures.front().size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return partition_classes(gt, all);
}

std::vector<std::size_t> lower_approximation(const EquivalenceClasses& classes,
                                             const std::vector<char>& in_x) {
  std::vector<std::size_t> out;
  for (const auto& block : classes.blocks) {
    bool contained = std::all_of(block.begin(), block.end(),
                                 [&](std::size_t o) { return in_x[o]; });
    if (contained) out.insert(out.end(), block.begin(), block.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> upper_approximation(const EquivalenceClasses& classes,
                                             const std::vector<char>& in_x) {
  std::vector<std::size_t> out;
  for (const auto& block : classes.blocks) {
    bool intersects = std::any_of(block.begin(), block.end(),
                                  [&](std::size_t o) { return in_x[o]; });
    if (intersects) out.insert(out.end(), block.begin(), block.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

double rough_membership(const EquivalenceClasses& classes, std::size_t object,
                        const std::vector<char>& in_x) {
  const auto& block = classes.blocks[classes.block_of[object]];
  std::size_t overlap = 0;
  for (std::size_t o : block) overlap += in_x[o] ? 1 : 0;
  return static_cast<double>(overlap) / static_cast<double>(block.size());
}

double approximation_accuracy(const Approximation& approx) {
  if (approx.upper.empty()) return 1.0;
  return static_cast<double>(approx.lower.size()) /
         static_cast<double>(approx.upper.size());
}

RuleSet induce_rules(const GranularTable& gt) {
  if (gt.n_objects() == 0)
    throw DomainError("induce_rules: empty table");

  RuleSet rs;
  for (std::size_t i = 0; i < gt.n_objects(); ++i) {
    Rule& r = rs.rules[gt.signatures[i]];
    if (r.support == 0) r.signature = gt.signatures[i];
    ++r.support;
    if (gt.decisions[i] == 1) ++r.positives;
  }
  for (auto& [sig, r] : rs.rules) {
    r.plausibility =
        static_cast<double>(r.positives) / static_cast<double>(r.support);
    std::size_t negatives = r.support - r.positives;
    r.tie = (r.positives == negatives);
    r.decision = (r.positives > negatives) ? 1 : 0;
  }
  return rs;
}

std::optional<double> classify(const RuleSet& rules,
                               const GranuleSignature& sig) {
  auto it = rules.rules.find(sig);
  if (it == rules.rules.end()) return std::nullopt;
  return 2.0 * it->second.plausibility - 1.0;
}

nlohmann::json RuleSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [sig, r] : rules) {
    arr.push_back({{"signature", sig},
                   {"decision", r.decision},
                   {"plausibility", r.plausibility},
                   {"positives", r.positives},
                   {"support", r.support},
                   {"tie", r.tie}});
  }
  return arr;
}

RuleSet RuleSet::from_json(const nlohmann::json& j) {
  RuleSet rs;
  for (const auto& jr : j) {
    Rule r;
    r.signature = jr.at("signature").get<GranuleSignature>();
    r.decision = jr.at("decision").get<int>();
    r.plausibility = jr.at("plausibility").get<double>();
    r.positives = jr.at("positives").get<std::size_t>();
    r.support = jr.at("support").get<std::size_t>();
    r.tie = jr.at("tie").get<bool>();
    rs.rules[r.signature] = std::move(r);
  }
  return rs;
}

}  // namespace brs
