#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "brs/posterior.hpp"
#include "brs/synth.hpp"

using namespace brs;

namespace {

SynthSpec three_attr_spec() {
  SynthSpec spec;
  spec.schema.attributes = {{"x", AttributeKind::Numeric, 0.0, 10.0},
                            {"y", AttributeKind::Numeric, 0.0, 10.0},
                            {"z", AttributeKind::Numeric, 0.0, 10.0}};
  spec.schema.decision_name = "d";
  spec.planted_cuts = Granulization{{{3.0, 7.0}, {2.5, 6.0}, {4.0, 8.0}}};
  spec.rule_probs = random_deterministic_rule(spec.schema, spec.planted_cuts,
                                              /*seed=*/101);
  spec.n_objects = 2000;
  spec.seed = 11;
  return spec;
}

}  // namespace

TEST_CASE("deterministic rule map covers the full granule grid") {
  auto spec = three_attr_spec();
  CHECK(spec.rule_probs.size() == 27);  // 3^3 cells
  for (const auto& [sig, p] : spec.rule_probs) CHECK((p == 0.0 || p == 1.0));
}

TEST_CASE("noise-free generation is consistent under the planted cuts") {
  auto spec = three_attr_spec();
  spec.noise = 0.0;
  auto [table, truth] = generate(spec);
  auto gt = granulate_table(table, truth.cuts);
  CHECK(predictive_accuracy(induce_rules(gt), gt) == 1.0);
}

TEST_CASE("generated signatures match the ground truth record") {
  auto spec = three_attr_spec();
  auto [table, truth] = generate(spec);
  auto gt = granulate_table(table, truth.cuts);
  std::map<GranuleSignature, std::size_t> counts;
  for (const auto& s : gt.signatures) ++counts[s];
  CHECK(counts == truth.signature_counts);
}

TEST_CASE("zero objects yields an empty table") {
  auto spec = three_attr_spec();
  spec.n_objects = 0;
  auto [table, truth] = generate(spec);
  CHECK(table.n_objects() == 0);
  CHECK(truth.signature_counts.empty());
}

TEST_CASE("generation is seed-deterministic") {
  auto spec = three_attr_spec();
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(a.first.values == b.first.values);
  CHECK(a.first.decisions == b.first.decisions);
}

TEST_CASE("10% label noise puts planted-cut training accuracy near 0.9") {
  auto spec = three_attr_spec();
  spec.noise = 0.10;
  spec.n_objects = 10000;
  for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
    spec.seed = seed;
    auto [table, truth] = generate(spec);
    auto gt = granulate_table(table, truth.cuts);
    double acc = predictive_accuracy(induce_rules(gt), gt);
    CHECK(acc >= 0.88);
    CHECK(acc <= 0.92);
  }
}

TEST_CASE("decision marginals track the planted probabilities") {
  auto spec = three_attr_spec();
  spec.noise = 0.0;
  spec.n_objects = 20000;
  auto [table, truth] = generate(spec);
  auto gt = granulate_table(table, truth.cuts);
  std::map<GranuleSignature, std::pair<std::size_t, std::size_t>> tally;
  for (std::size_t i = 0; i < gt.n_objects(); ++i) {
    auto& [pos, n] = tally[gt.signatures[i]];
    pos += table.decisions[i];
    ++n;
  }
  for (const auto& [sig, t] : tally) {
    auto [pos, n] = t;
    if (n < 30) continue;
    double p = truth.rule_probs.at(sig);
    double phat = static_cast<double>(pos) / n;
    double se = std::sqrt(std::max(p * (1 - p), 1e-9) / n);
    CHECK(std::abs(phat - p) <= std::max(3 * se, 1e-12));
  }
}

TEST_CASE("spec validation") {
  auto spec = three_attr_spec();
  spec.noise = 0.6;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = three_attr_spec();
  spec.rule_probs[{0, 0, 0}] = 1.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("synth spec JSON round-trip") {
  auto spec = three_attr_spec();
  auto j = spec.to_json();
  auto back = SynthSpec::from_json(j);
  CHECK(back.rule_probs == spec.rule_probs);
  CHECK(back.planted_cuts.cuts == spec.planted_cuts.cuts);
  CHECK(back.n_objects == spec.n_objects);
}

TEST_CASE("demographic preset has six named attributes") {
  auto s = demographic_schema();
  CHECK(s.size() == 6);
  s.validate();
  CHECK(s.has("gravidity"));
  CHECK(s.has("parity"));
}
