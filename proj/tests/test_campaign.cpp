#include <doctest.h>

#include "flowlab/campaign.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/rng.hpp"

using namespace flowlab;
using namespace flowlab::lab;

TEST_CASE("counter rng is a pure function of key and counter") {
  CounterRng a(7, 3), b(7, 3), c(7, 4);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CounterRng u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    const double l = u.log_uniform(1e-3, 1e3);
    CHECK(l >= 1e-3);
    CHECK(l <= 1e3);
    const int k = u.integer(2, 5);
    CHECK(k >= 2);
    CHECK(k <= 5);
  }
}

TEST_CASE("registered lemma ids") {
  for (const char* id : {"sigprop", "Dmk", "ak", "det-identity", "key-inequality", "condition", "lamij", "rigidity",
                         "cs", "condmin", "thm63", "sk-loghess"}) {
    CHECK(is_lemma_id(id));
    CHECK_FALSE(default_sweep(id).empty());
  }
  CHECK(lemma_ids().size() == 12);
  CHECK_FALSE(is_lemma_id("nope"));
  CHECK_THROWS_AS(run_campaign("nope", {}, 10, 1), ArgumentError);
}

TEST_CASE("reports do not depend on the thread count") {
  CampaignParams p;
  p.n = 4;
  p.k = 2;
  for (const char* id : {"key-inequality", "Dmk", "rigidity", "condmin"}) {
    const auto one = to_json(run_campaign(id, p, 3000, 9, 1)).dump();
    const auto three = to_json(run_campaign(id, p, 3000, 9, 3)).dump();
    const auto again = to_json(run_campaign(id, p, 3000, 9, 2)).dump();
    CHECK(one == three);
    CHECK(one == again);
  }
  const auto s1 = to_json(run_campaign("key-inequality", p, 3000, 10, 1)).dump();
  CHECK(s1 != to_json(run_campaign("key-inequality", p, 3000, 9, 1)).dump());
}

TEST_CASE("key inequality campaign passes") {
  CampaignParams p;
  p.n = 4;
  p.k = 2;
  const auto r = run_campaign("key-inequality", p, 20000, 7);
  CHECK(r.samples == 20000);
  CHECK(r.violations == 0);
  CHECK(r.worst_margin >= -1e-12);
}

TEST_CASE("condition campaign flags a signed combination") {
  CampaignParams p;
  p.n = 2;
  p.F = "1*sigma(1)^2 - 3*sigma(2)";
  const auto r = run_campaign("condition", p, 1000, 1);
  CHECK(r.violations > 0);
  CHECK(r.worst_margin < 0);
  CHECK(r.worst_sample.contains("lambda"));
  const auto j = to_json(r);
  CHECK(j["lemma_id"] == "condition");
  CHECK(j["seed"] == 1);
  CHECK(j["samples"] == 1000);
  CHECK(j.contains("parameters"));
}

TEST_CASE("suite aggregation") {
  const auto sweep = default_sweep("thm63");
  const auto s = run_suite("thm63", sweep, 100, 3);
  CHECK(s.configurations.size() == sweep.size());
  CHECK(s.samples() == static_cast<std::int64_t>(100 * sweep.size()));
  CHECK(s.violations() == 0);
}
