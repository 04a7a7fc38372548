#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "brs/granulation.hpp"

using namespace brs;

namespace {

Schema two_attr_schema() {
  Schema s;
  s.attributes = {{"a", AttributeKind::Numeric, 0.0, 100.0},
                  {"b", AttributeKind::Numeric, -1.0, 1.0}};
  s.decision_name = "d";
  return s;
}

}  // namespace

TEST_CASE("discretize_value follows the half-open convention") {
  std::vector<double> cuts = {20.0, 27.0, 33.0};
  CHECK(discretize_value(25.0, cuts) == 1);
  CHECK(discretize_value(5.0, cuts) == 0);
  CHECK(discretize_value(27.0, cuts) == 2);  // boundary goes right
  CHECK(discretize_value(33.0, cuts) == 3);
  CHECK(discretize_value(1000.0, cuts) == 3);
}

TEST_CASE("discretize_value is monotone and interval-consistent") {
  std::vector<double> cuts = {1.0, 2.5, 7.25};
  int prev = 0;
  for (double v = -2.0; v <= 10.0; v += 0.03125) {
    int g = discretize_value(v, cuts);
    CHECK(g >= prev);
    prev = g;
    // v lands in granule i iff cut_{i-1} <= v < cut_i
    if (g > 0) CHECK(cuts[g - 1] <= v);
    if (g < static_cast<int>(cuts.size())) CHECK(v < cuts[g]);
  }
}

TEST_CASE("granulate_table computes signatures attribute-wise") {
  Schema s = two_attr_schema();
  InformationTable t;
  t.schema = s;
  t.object_ids = {"o1", "o2"};
  t.values = {{5.0, -0.9}, {95.0, 0.9}};
  t.decisions = {0, 1};

  Granulization g{{{10.0, 50.0}, {0.0}}};
  auto gt = granulate_table(t, g);
  CHECK(gt.signatures[0] == GranuleSignature{0, 0});
  CHECK(gt.signatures[1] == GranuleSignature{2, 1});

  SUBCASE("re-granulating reproduces stored signatures") {
    auto gt2 = granulate_table(t, gt.granulization);
    CHECK(gt2.signatures == gt.signatures);
  }
  SUBCASE("granulization must cover the schema") {
    Granulization partial{{{10.0}}};
    CHECK_THROWS_AS(granulate_table(t, partial), SchemaError);
  }
}

TEST_CASE("random_granulization is seed-deterministic") {
  Schema s = two_attr_schema();
  std::mt19937_64 r1(42), r2(42);
  auto g1 = random_granulization(s, 4, r1);
  auto g2 = random_granulization(s, 4, r2);
  CHECK(g1.cuts == g2.cuts);
  g1.validate(s);
}

TEST_CASE("random_granulization with k=2 yields one cut per attribute") {
  Schema s = two_attr_schema();
  std::mt19937_64 rng(7);
  auto g = random_granulization(s, 2, rng);
  CHECK(g.cuts[0].size() == 1);
  CHECK(g.cuts[1].size() == 1);
}

TEST_CASE("random_granulization rejects k < 2 and too-narrow ranges") {
  Schema s = two_attr_schema();
  std::mt19937_64 rng(7);
  CHECK_THROWS_AS(random_granulization(s, 1, rng), ConfigError);
}

TEST_CASE("sorted-uniform cut means match order statistics") {
  // k = 4 on [0, 100]: sorted-uniform means are 25/50/75, so the
  // overall cut mean sits at 50
  Schema s;
  s.attributes = {{"a", AttributeKind::Numeric, 0.0, 100.0}};
  s.decision_name = "d";
  std::mt19937_64 rng(123);
  double sum = 0.0, sum_first = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto g = random_granulization(s, 4, rng);
    for (double c : g.cuts[0]) sum += c;
    sum_first += g.cuts[0][0];
  }
  double mean = sum / (3.0 * n);
  CHECK(mean > 45.0);
  CHECK(mean < 55.0);
  // first order statistic of 3 uniforms has mean 25
  CHECK(sum_first / n > 22.0);
  CHECK(sum_first / n < 28.0);
}

TEST_CASE("perturb keeps invariants over a large random sweep") {
  Schema s = two_attr_schema();
  std::mt19937_64 rng(99);
  Granulization g = random_granulization(s, 4, rng);
  for (int i = 0; i < 100000; ++i) {
    g = perturb(g, s, 0.05, rng);
  }
  g.validate(s);
}

TEST_CASE("perturb changes exactly one attribute's cut vector") {
  Schema s = two_attr_schema();
  std::mt19937_64 rng(5);
  Granulization g = random_granulization(s, 4, rng);
  for (int i = 0; i < 200; ++i) {
    auto h = perturb(g, s, 0.05, rng);
    int changed = 0;
    for (std::size_t a = 0; a < g.cuts.size(); ++a)
      if (g.cuts[a] != h.cuts[a]) ++changed;
    CHECK(changed <= 1);
  }
}

TEST_CASE("perturb with zero step is the identity") {
  Schema s = two_attr_schema();
  std::mt19937_64 rng(5);
  Granulization g = random_granulization(s, 4, rng);
  auto h = perturb(g, s, 0.0, rng);
  CHECK(h.cuts == g.cuts);
}

TEST_CASE("perturb displacement is symmetric about zero") {
  Schema s;
  s.attributes = {{"a", AttributeKind::Numeric, 0.0, 1000.0}};
  s.decision_name = "d";
  Granulization g{{{500.0}}};
  std::mt19937_64 rng(31);
  int up = 0, down = 0;
  for (int i = 0; i < 20000; ++i) {
    auto h = perturb(g, s, 0.01, rng);
    if (h.cuts[0][0] > 500.0) ++up;
    if (h.cuts[0][0] < 500.0) ++down;
  }
  // two-sided: |up - down| small relative to sqrt(n)
  CHECK(std::abs(up - down) < 600);
}

TEST_CASE("granule labels") {
  CHECK(granule_label(0, 4) == "Low");
  CHECK(granule_label(1, 4) == "Med");
  CHECK(granule_label(2, 4) == "High");
  CHECK(granule_label(3, 4) == "Very High");
  CHECK(granule_label(0, 2) == "Low");
  CHECK(granule_label(1, 2) == "High");
  CHECK(granule_label(2, 3) == "High");
  CHECK(granule_label(4, 5) == "G4");
}

TEST_CASE("granulization JSON round-trips by attribute name") {
  Schema s = two_attr_schema();
  Granulization g{{{10.0, 50.0}, {0.0}}};
  auto j = g.to_json(s);
  auto back = Granulization::from_json(j, s);
  CHECK(back.cuts == g.cuts);
}
