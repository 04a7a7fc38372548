#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brs/predictive.hpp"
#include "brs/synth.hpp"

using namespace brs;
namespace fs = std::filesystem;

namespace {

Schema one_attr_schema() {
  Schema s;
  s.attributes = {{"a", AttributeKind::Numeric, 0.0, 10.0}};
  s.decision_name = "d";
  return s;
}

// Hand-built chain with prescribed rule sets, bypassing run_chain.
Chain chain_with_models(std::vector<RoughModel> models) {
  Chain chain;
  chain.schema = one_attr_schema();
  chain.config.granules = 2;
  chain.retained = std::move(models);
  return chain;
}

RoughModel model_with_rule(double cut, GranuleSignature sig,
                           std::size_t positives, std::size_t support,
                           double log_post = 0.0) {
  RoughModel m;
  m.g = Granulization{{{cut}}};
  Rule r;
  r.signature = sig;
  r.positives = positives;
  r.support = support;
  r.plausibility = static_cast<double>(positives) / support;
  r.decision = positives * 2 > support ? 1 : 0;
  m.rules.rules[sig] = r;
  m.rule_count = 1;
  m.log_posterior = log_post;
  return m;
}

}  // namespace

TEST_CASE("predict_mean averages mapped plausibilities") {
  SUBCASE("all models certain positive") {
    auto chain = chain_with_models({model_with_rule(5.0, {0}, 3, 3),
                                    model_with_rule(4.0, {0}, 2, 2)});
    double q[] = {1.0};
    CHECK(predict_mean(chain, q) == 1.0);
  }
  SUBCASE("mean of -1/3 and +1 is 1/3") {
    auto chain = chain_with_models({model_with_rule(5.0, {0}, 1, 3),
                                    model_with_rule(4.0, {0}, 2, 2)});
    double q[] = {1.0};
    CHECK(predict_mean(chain, q) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("abstaining model contributes zero") {
    auto chain = chain_with_models({model_with_rule(5.0, {1}, 2, 2),
                                    model_with_rule(4.0, {0}, 2, 2)});
    double q[] = {1.0};  // granule 0 under both cuts
    CHECK(predict_mean(chain, q) == 0.5);
  }
  SUBCASE("out-of-range query is rejected") {
    auto chain = chain_with_models({model_with_rule(5.0, {0}, 2, 2)});
    double q[] = {11.0};
    CHECK_THROWS_AS(predict_mean(chain, q), DomainError);
  }
}

TEST_CASE("predict_distribution") {
  SUBCASE("all models abstain") {
    auto chain = chain_with_models({model_with_rule(5.0, {1}, 2, 2),
                                    model_with_rule(6.0, {1}, 2, 2)});
    Query q{"q1", {1.0}};
    auto dist = predict_distribution(chain, q, 10);
    CHECK(dist.coverage == 0.0);
    CHECK(dist.mean == 0.0);
    CHECK(dist.no_support);
    CHECK(dist.abstentions == 2);
  }
  SUBCASE("outcome count equals the retained count") {
    std::vector<RoughModel> models;
    for (int i = 0; i < 20; ++i)
      models.push_back(model_with_rule(5.0, {i % 2}, 1, 2));
    auto chain = chain_with_models(std::move(models));
    Query q{"q2", {7.0}};  // granule 1
    auto dist = predict_distribution(chain, q, 5);
    CHECK(dist.outputs.size() + dist.abstentions == 20);
    CHECK(dist.hist.total() == dist.outputs.size());
  }
  SUBCASE("mean agrees with predict_mean bitwise") {
    std::vector<RoughModel> models;
    for (int i = 0; i < 7; ++i)
      models.push_back(model_with_rule(1.0 + i, {0}, i % 3, 3));
    auto chain = chain_with_models(std::move(models));
    Query q{"q3", {0.5}};
    auto dist = predict_distribution(chain, q, 5);
    CHECK(dist.mean == predict_mean(chain, q.values));
  }
}

TEST_CASE("adding a certain-positive model never decreases the mean") {
  std::vector<RoughModel> models;
  for (int i = 0; i < 5; ++i)
    models.push_back(model_with_rule(2.0 + i, {0}, i % 2, 2));
  auto chain = chain_with_models(models);
  double q[] = {0.5};
  double before = predict_mean(chain, q);
  models.push_back(model_with_rule(5.0, {0}, 2, 2));  // outputs +1
  auto bigger = chain_with_models(models);
  CHECK(predict_mean(bigger, q) >= before);
}

TEST_CASE("MAP model is the earliest argmax of the log posterior") {
  auto chain = chain_with_models({model_with_rule(5.0, {0}, 2, 2, -0.5),
                                  model_with_rule(5.0, {0}, 2, 2, -0.1),
                                  model_with_rule(5.0, {0}, 2, 2, -0.1)});
  CHECK(map_model_index(chain) == 1);
}

TEST_CASE("rule report splits certain and possible sections") {
  GranularTable gt;
  gt.signatures = {{0}, {0}, {0}, {1}, {1}};
  gt.decisions = {1, 0, 0, 1, 1};
  auto rs = induce_rules(gt);
  std::vector<int> granules = {2};
  Schema s = one_attr_schema();
  auto text = format_rule_report(rs, s, granules);
  CHECK(text.find("Lower Approximation Rules") != std::string::npos);
  CHECK(text.find("Upper Approximation Rules") != std::string::npos);
  CHECK(text.find("Most Probably Positive") != std::string::npos);
  CHECK(text.find("plausibility = 0.33333") != std::string::npos);
  CHECK(text.find("a = High") != std::string::npos);
}

TEST_CASE("emit_report writes the full bundle") {
  std::vector<RoughModel> models;
  for (int i = 0; i < 10; ++i) {
    auto m = model_with_rule(3.0 + 0.2 * i, {0}, i % 3, 3, -0.01 * i);
    m.accuracy = 0.5 + 0.02 * i;
    models.push_back(m);
  }
  auto chain = chain_with_models(std::move(models));
  std::vector<Query> queries = {{"qa", {1.0}}};

  fs::path dir = fs::temp_directory_path() / "brs_report_test";
  fs::remove_all(dir);
  emit_report(chain, queries, dir);

  CHECK(fs::exists(dir / "rules_map.txt"));
  CHECK(fs::exists(dir / "hist_rules.csv"));
  CHECK(fs::exists(dir / "hist_accuracy.csv"));
  CHECK(fs::exists(dir / "pred_qa.csv"));
  CHECK(fs::exists(dir / "summary.json"));

  SUBCASE("histogram CSV round-trips counts exactly") {
    std::ifstream f(dir / "hist_accuracy.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "bin_lo,bin_hi,count");
    std::size_t total = 0;
    std::string line;
    while (std::getline(f, line)) {
      auto pos = line.rfind(',');
      total += std::stoul(line.substr(pos + 1));
    }
    CHECK(total == 10);
  }
  fs::remove_all(dir);
}

TEST_CASE("query CSV loader") {
  Schema s = one_attr_schema();
  SUBCASE("with id column") {
    std::istringstream in("id,a\nfirst,3\nsecond,8\n");
    auto qs = load_queries(in, s);
    REQUIRE(qs.size() == 2);
    CHECK(qs[0].id == "first");
    CHECK(qs[1].values[0] == 8.0);
  }
  SUBCASE("without id column, ids are generated") {
    std::istringstream in("a\n3\n");
    auto qs = load_queries(in, s);
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].id == "q1");
  }
  SUBCASE("empty file yields no queries") {
    std::istringstream in("");
    CHECK(load_queries(in, s).empty());
  }
  SUBCASE("missing column is a schema error") {
    std::istringstream in("b\n3\n");
    CHECK_THROWS_AS(load_queries(in, s), SchemaError);
  }
}
