#include <doctest.h>

#include <algorithm>
#include <random>

#include "brs/posterior.hpp"

using namespace brs;

namespace {

GranularTable table_of(std::vector<GranuleSignature> sigs,
                       std::vector<int> decisions) {
  GranularTable gt;
  gt.signatures = std::move(sigs);
  gt.decisions = std::move(decisions);
  return gt;
}

}  // namespace

TEST_CASE("predictive accuracy") {
  SUBCASE("consistent table classified by its own rules is perfect") {
    auto gt = table_of({{0}, {1}, {2}, {0}}, {1, 0, 1, 1});
    CHECK(predictive_accuracy(induce_rules(gt), gt) == 1.0);
  }
  SUBCASE("inconsistent pair scores one half") {
    // tie rule decides 0, matching exactly one of the two objects
    auto gt = table_of({{0}, {0}}, {1, 0});
    CHECK(predictive_accuracy(induce_rules(gt), gt) == 0.5);
    // a 2:1 class matches the majority members only
    auto gt2 = table_of({{0}, {0}, {0}}, {1, 1, 0});
    CHECK(predictive_accuracy(induce_rules(gt2), gt2) ==
          doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("disjoint signatures abstain everywhere") {
    auto train = table_of({{0}}, {1});
    auto test = table_of({{5}, {6}}, {1, 0});
    CHECK(predictive_accuracy(induce_rules(train), test) == 0.0);
  }
  SUBCASE("empty table is rejected") {
    auto train = table_of({{0}}, {1});
    GranularTable empty;
    CHECK_THROWS_AS(predictive_accuracy(induce_rules(train), empty),
                    DomainError);
  }
}

TEST_CASE("log likelihood, prior, posterior values") {
  CHECK(log_likelihood(1.0) == 0.0);
  CHECK(log_likelihood(0.0) == -1.0);
  CHECK(log_likelihood(0.58) == doctest::Approx(-0.42));
  CHECK_THROWS_AS(log_likelihood(1.5), DomainError);
  CHECK_THROWS_AS(log_likelihood(-0.1), DomainError);

  CHECK(log_prior(0, 0.5) == 0.0);
  CHECK(log_prior(1000, 0.0) == 0.0);
  CHECK(log_prior(222, 0.001) == doctest::Approx(-0.222));

  CHECK(log_posterior(1.0, 0, 0.001) == 0.0);
  CHECK(log_posterior(0.58, 222, 0.001) == doctest::Approx(-0.642));
}

TEST_CASE("log posterior is additive to machine precision") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(0.0, 1.0), ul(0.0, 0.01);
  std::uniform_int_distribution<std::size_t> un(0, 4096);
  for (int i = 0; i < 10000; ++i) {
    double a = ua(rng);
    double l = ul(rng);
    std::size_t n = un(rng);
    CHECK(log_posterior(a, n, l) == log_likelihood(a) + log_prior(n, l));
  }
}

TEST_CASE("log posterior is monotone in accuracy and rule count") {
  CHECK(log_posterior(0.7, 100, 0.01) > log_posterior(0.6, 100, 0.01));
  CHECK(log_posterior(0.7, 100, 0.01) > log_posterior(0.7, 101, 0.01));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.0, 0.999);
  for (int i = 0; i < 1000; ++i) {
    double a = ua(rng);
    std::size_t n = rng() % 1000;
    CHECK(log_posterior(a + 0.001, n, 0.01) > log_posterior(a, n, 0.01));
    CHECK(log_posterior(a, n, 0.01) > log_posterior(a, n + 1, 0.01));
  }
}

TEST_CASE("lambda = 0 ranks models purely by accuracy") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> acc(10);
    std::vector<std::size_t> nrules(10);
    for (int i = 0; i < 10; ++i) {
      acc[i] = ua(rng);
      nrules[i] = rng() % 500;
    }
    auto best_by_acc =
        std::max_element(acc.begin(), acc.end()) - acc.begin();
    std::size_t best_by_post = 0;
    for (std::size_t i = 1; i < acc.size(); ++i)
      if (log_posterior(acc[i], nrules[i], 0.0) >
          log_posterior(acc[best_by_post], nrules[best_by_post], 0.0))
        best_by_post = i;
    CHECK(static_cast<std::size_t>(best_by_acc) == best_by_post);
  }
}
