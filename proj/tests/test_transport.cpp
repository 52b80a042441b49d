#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "orlicz_ot/transport.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace orlicz_ot;
using Catch::Approx;

namespace {

ExtendedMetric line_metric(const std::vector<double>& xs) {
  std::vector<std::vector<double>> d(xs.size(), std::vector<double>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) d[i][j] = std::abs(xs[i] - xs[j]);
  return ExtendedMetric::from_matrix(d);
}

}  // namespace

TEST_CASE("discrete measures: construction and canonical form") {
  auto mu = DiscreteMeasure::create({2, 0}, {0.5, 0.5});
  CHECK(mu.support() == std::vector<std::size_t>{0, 2});  // sorted
  CHECK(mu.weight_of(2) == Approx(0.5));
  CHECK(mu.weight_of(7) == 0.0);
  CHECK_THROWS_AS(DiscreteMeasure::create({0}, {0.5}), std::invalid_argument);  // mass != 1
  CHECK_THROWS_AS(DiscreteMeasure::create({0, 0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure::create({0, 1}, {1.5, -0.5}), std::invalid_argument);
  auto nu = DiscreteMeasure::normalized({1, 3}, {2.0, 6.0});
  CHECK(nu.weight_of(1) == Approx(0.25));
  auto d = DiscreteMeasure::dirac(4);
  CHECK(d.support() == std::vector<std::size_t>{4});
  CHECK(d.weight_of(4) == 1.0);
  // zero atoms are dropped
  auto z = DiscreteMeasure::create({0, 1, 2}, {0.5, 0.0, 0.5});
  CHECK(z.support() == std::vector<std::size_t>{0, 2});
  CHECK(DiscreteMeasure::uniform({5, 6}).weight_of(5) == Approx(0.5));
}

TEST_CASE("couplings: factories and admissibility audit") {
  auto mu = DiscreteMeasure::create({0, 1}, {0.3, 0.7});
  auto nu = DiscreteMeasure::create({2, 3}, {0.4, 0.6});
  auto prod = Coupling::product(mu, nu);
  CHECK(prod.at(0, 0) == Approx(0.12));
  CHECK(prod.at(1, 1) == Approx(0.42));
  auto rep = admissible_check(prod, mu, nu);
  CHECK(rep.ok);
  CHECK(rep.max_deviation <= 1e-15);

  auto diag = Coupling::diagonal(mu);
  CHECK(diag.at(0, 0) == Approx(0.3));
  CHECK(diag.at(0, 1) == 0.0);
  CHECK(admissible_check(diag, mu, mu).ok);

  Coupling bad({0, 1}, {2, 3}, {0.5, 0.0, 0.0, 0.5});
  auto brep = admissible_check(bad, mu, nu);
  CHECK_FALSE(brep.ok);
  CHECK(brep.max_deviation == Approx(0.2));
}

TEST_CASE("min-cost transportation agrees with the MODI simplex oracle") {
  auto g = testgen::rng(201);
  std::uniform_int_distribution<int> nd(1, 6);
  std::uniform_real_distribution<double> cd(0.0, 10.0);
  for (int rep = 0; rep < 150; ++rep) {
    int m = nd(g), k = nd(g);
    std::vector<double> supply(m), demand(k);
    std::exponential_distribution<double> ed(1.0);
    double s = 0.0, t = 0.0;
    for (auto& v : supply) s += (v = ed(g) + 1e-3);
    for (auto& v : demand) t += (v = ed(g) + 1e-3);
    for (auto& v : supply) v /= s;
    for (auto& v : demand) v /= t;
    std::vector<double> cost(m * k);
    for (auto& c : cost) c = cd(g);
    auto res = detail::solve_transportation(supply, demand, cost);
    REQUIRE(res.feasible);
    double oracle = oracles::modi_min_cost(supply, demand, cost);
    INFO("instance " << rep);
    CHECK(res.cost == Approx(oracle).epsilon(1e-9).margin(1e-12));
    // flow really is a coupling of (supply, demand)
    for (int i = 0; i < m; ++i) {
      double rs = 0.0;
      for (int j = 0; j < k; ++j) rs += res.flow[i * k + j];
      CHECK(rs == Approx(supply[i]).margin(1e-11));
    }
  }
}

TEST_CASE("forbidden arcs: solvable and unsolvable patterns") {
  // two sources, two sinks, diagonal forbidden: antidiagonal routing works
  auto r = detail::solve_transportation({0.5, 0.5}, {0.5, 0.5}, {kInf, 1.0, 1.0, kInf});
  REQUIRE(r.feasible);
  CHECK(r.cost == Approx(1.0));
  CHECK(r.flow[0 * 2 + 1] == Approx(0.5));
  // sink 1 unreachable
  auto bad = detail::solve_transportation({0.5, 0.5}, {0.4, 0.6}, {1.0, kInf, 1.0, kInf});
  CHECK_FALSE(bad.feasible);
}

TEST_CASE("frozen line example: uniform{0,1} to uniform{2,3} under x^2") {
  auto metric = line_metric({0.0, 1.0, 2.0, 3.0});
  auto mu = DiscreteMeasure::uniform({0, 1});
  auto nu = DiscreteMeasure::uniform({2, 3});
  YoungFunction p2 = YoungFunction::power(2.0);

  // monotone pairing 0->2, 1->3 has modular (psi(2/l) + psi(2/l))/2; at l = 2 this is 1
  auto sol = wasserstein_orlicz(mu, nu, metric, p2, 1e-10);
  CHECK(sol.w == Approx(2.0).epsilon(1e-9));
  REQUIRE(sol.plan.has_value());
  CHECK(sol.plan->at(0, 0) == Approx(0.5).margin(1e-10));  // 0 -> 2
  CHECK(sol.plan->at(1, 1) == Approx(0.5).margin(1e-10));  // 1 -> 3

  // at lambda = 2 the crossing plan pays psi(3/2)/2 + psi(1/2)/2 = 1.25 > 1
  auto mm = min_modular_plan(mu, nu, metric, p2, 2.0);
  CHECK(mm.value == Approx(1.0).epsilon(1e-12));
  Coupling cross({0, 1}, {2, 3}, {0.0, 0.5, 0.5, 0.0});
  WeightedSamples terms({metric.dist(0, 3) / 2.0, metric.dist(1, 2) / 2.0}, {0.5, 0.5});
  CHECK(modular(terms, p2, 1.0) == Approx(1.25));

  auto cert = optimality_certificate(*sol.plan, mu, nu, metric, p2, sol.w);
  CHECK(cert.ok);
  CHECK(cert.modular_at_w == Approx(1.0).epsilon(1e-8));
  auto jb = jensen_bound_check(*sol.plan, metric, p2, sol.w);
  CHECK(jb.ok);
  CHECK(jb.mean_cost == Approx(2.0).epsilon(1e-9));
  CHECK(jb.bound == Approx(2.0).epsilon(1e-9));  // psi^{-1}(1) = 1 for x^2
}

TEST_CASE("dirac pairs: W = d / psi^{-1}(1) across the catalog") {
  auto metric = ExtendedMetric::from_matrix({{0.0, 3.0}, {3.0, 0.0}});
  auto mu = DiscreteMeasure::dirac(0);
  auto nu = DiscreteMeasure::dirac(1);
  for (const auto& named : testgen::catalog()) {
    auto sol = wasserstein_orlicz(mu, nu, metric, named.psi, 1e-10);
    INFO(named.name);
    CHECK(sol.w == Approx(3.0 / named.psi.pseudo_inverse(1.0)).epsilon(1e-8));
  }
}

TEST_CASE("power psi reproduces the p-Wasserstein distance") {
  auto g = testgen::rng(202);
  for (double p : {1.5, 2.0, 3.0}) {
    YoungFunction psi = YoungFunction::power(p);
    for (int rep = 0; rep < 25; ++rep) {
      auto pts = testgen::random_points(g, 7, 2);
      auto metric = ExtendedMetric::from_point_cloud(pts);
      auto mu = testgen::random_measure(g, 7, 4);
      auto nu = testgen::random_measure(g, 7, 4);
      auto sol = wasserstein_orlicz(mu, nu, metric, psi, 1e-11);

      // oracle: min sum gamma d^p over couplings, then take the p-th root
      std::vector<double> supply, demand;
      for (auto i : mu.support()) supply.push_back(mu.weight_of(i));
      for (auto j : nu.support()) demand.push_back(nu.weight_of(j));
      std::size_t kb = nu.support().size();
      std::vector<double> cost(mu.support().size() * kb);
      for (std::size_t a = 0; a < mu.support().size(); ++a)
        for (std::size_t b = 0; b < kb; ++b)
          cost[a * kb + b] = std::pow(metric.dist(mu.support()[a], nu.support()[b]), p);
      double lp = std::pow(oracles::modi_min_cost(supply, demand, cost), 1.0 / p);
      INFO("p = " << p << " rep " << rep);
      CHECK(sol.w == Approx(lp).epsilon(1e-7).margin(1e-10));
    }
  }
}

TEST_CASE("indicator psi computes the bottleneck distance") {
  auto g = testgen::rng(203);
  YoungFunction l = YoungFunction::linf();
  for (int rep = 0; rep < 25; ++rep) {
    std::uniform_int_distribution<int> nd(2, 6);
    int n = nd(g);
    // uniform-to-uniform with equal atom counts: the optimum sits on a permutation
    auto all = testgen::random_points(g, 2 * n, 2);
    auto big = ExtendedMetric::from_point_cloud(all);
    std::vector<std::size_t> left(n), right(n);
    for (int i = 0; i < n; ++i) {
      left[i] = static_cast<std::size_t>(i);
      right[i] = static_cast<std::size_t>(n + i);
    }
    auto mu = DiscreteMeasure::uniform(left);
    auto nu = DiscreteMeasure::uniform(right);
    double oracle = oracles::bottleneck_permutation(
        static_cast<std::size_t>(n),
        [&](std::size_t i, std::size_t j) { return big.dist(left[i], right[j]); });
    auto bn = wasserstein_orlicz(mu, nu, big, l, 1e-11);
    INFO("rep " << rep << " n " << n);
    CHECK(bn.w == Approx(oracle).epsilon(1e-8).margin(1e-10));
  }
}

TEST_CASE("identical measures give zero with the diagonal plan") {
  auto metric = line_metric({0.0, 1.0, 2.5});
  auto mu = DiscreteMeasure::create({0, 2}, {0.25, 0.75});
  auto sol = wasserstein_orlicz(mu, mu, metric, YoungFunction::power(2.0));
  CHECK(sol.w == 0.0);
  REQUIRE(sol.plan.has_value());
  CHECK(sol.plan->at(0, 0) == 0.25);
  CHECK(sol.plan->at(1, 1) == 0.75);
  auto cert = optimality_certificate(*sol.plan, mu, mu, metric, YoungFunction::power(2.0), 0.0);
  CHECK(cert.ok);
  CHECK(cert.modular_at_w == 0.0);
}

TEST_CASE("fully blocked pairs make the distance infinite") {
  auto metric = ExtendedMetric::from_matrix({{0.0, 1.0, kInf, kInf},
                                             {1.0, 0.0, kInf, kInf},
                                             {kInf, kInf, 0.0, 1.0},
                                             {kInf, kInf, 1.0, 0.0}});
  auto mu = DiscreteMeasure::uniform({0, 1});
  auto nu = DiscreteMeasure::uniform({2, 3});
  auto sol = wasserstein_orlicz(mu, nu, metric, YoungFunction::power(2.0));
  CHECK(is_inf(sol.w));
  CHECK_FALSE(sol.plan.has_value());

  // partial mass on the far cluster still blocks every coupling
  auto mixed = DiscreteMeasure::create({0, 2}, {0.5, 0.5});
  auto target = DiscreteMeasure::uniform({0, 1});
  auto sol2 = wasserstein_orlicz(mixed, target, metric, YoungFunction::power(2.0));
  CHECK(is_inf(sol2.w));

  // same-cluster mass transports fine even with inf entries elsewhere
  auto near = wasserstein_orlicz(DiscreteMeasure::dirac(0), DiscreteMeasure::dirac(1), metric,
                                 YoungFunction::power(2.0));
  CHECK(near.w == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certificates on random instances") {
  auto g = testgen::rng(204);
  for (const auto& named : testgen::catalog()) {
    for (int rep = 0; rep < 10; ++rep) {
      auto pts = testgen::random_points(g, 6, 2);
      auto metric = ExtendedMetric::from_point_cloud(pts);
      auto mu = testgen::random_measure(g, 6, 3);
      auto nu = testgen::random_measure(g, 6, 3);
      auto sol = wasserstein_orlicz(mu, nu, metric, named.psi, 1e-10);
      if (sol.w == 0.0) continue;
      REQUIRE(sol.plan.has_value());
      auto cert = optimality_certificate(*sol.plan, mu, nu, metric, named.psi, sol.w);
      INFO(named.name << " rep " << rep << " modular " << cert.modular_at_w);
      CHECK(cert.ok);
      auto jb = jensen_bound_check(*sol.plan, metric, named.psi, sol.w);
      CHECK(jb.ok);
    }
  }
}

TEST_CASE("certificate rejects bad inputs and bad plans") {
  auto metric = line_metric({0.0, 1.0, 2.0, 3.0});
  auto mu = DiscreteMeasure::uniform({0, 1});
  auto nu = DiscreteMeasure::uniform({2, 3});
  YoungFunction p2 = YoungFunction::power(2.0);
  auto sol = wasserstein_orlicz(mu, nu, metric, p2);
  REQUIRE(sol.plan.has_value());
  CHECK_THROWS_AS(optimality_certificate(*sol.plan, mu, nu, metric, p2, -1.0), std::domain_error);
  CHECK_THROWS_AS(optimality_certificate(*sol.plan, mu, nu, metric, p2, 0.0), std::domain_error);
  // understated w: modular exceeds 1
  auto under = optimality_certificate(*sol.plan, mu, nu, metric, p2, 1.0);
  CHECK_FALSE(under.ok);
  CHECK(under.modular_at_w == Approx(4.0));
  // crossing plan at the true w is not optimal
  Coupling cross({0, 1}, {2, 3}, {0.0, 0.5, 0.5, 0.0});
  auto cc = optimality_certificate(cross, mu, nu, metric, p2, sol.w);
  CHECK_FALSE(cc.ok);
  CHECK(cc.modular_at_w == Approx(1.25).epsilon(1e-8));
}

TEST_CASE("solver rejects profiles that fail validation") {
  auto metric = line_metric({0.0, 1.0});
  auto mu = DiscreteMeasure::dirac(0);
  auto nu = DiscreteMeasure::dirac(1);
  // a tabulated profile that never leaves zero is not a Young function
  auto flat = YoungFunction::tabulated({{0.0, 0.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(wasserstein_orlicz(mu, nu, metric, flat), std::invalid_argument);
}

TEST_CASE("instance size cap") {
  std::size_t n = 513;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  auto metric = ExtendedMetric::from_matrix(d);
  std::vector<std::size_t> s0(n), s1(n);
  for (std::size_t i = 0; i < n; ++i) s0[i] = s1[i] = i;
  auto mu = DiscreteMeasure::uniform(s0);
  std::vector<double> w(n, 1.0);
  w[0] = 2.0;
  auto nu = DiscreteMeasure::normalized(s1, w);
  CHECK_THROWS_AS(wasserstein_orlicz(mu, nu, metric, YoungFunction::power(2.0)),
                  std::invalid_argument);
}

TEST_CASE("gluing pairwise plans yields a lexicographic path measure") {
  // mu0 = mu1 = mu2 = uniform{0,1}; step 1 identity, step 2 swap
  auto mu = DiscreteMeasure::uniform({0, 1});
  Coupling identity({0, 1}, {0, 1}, {0.5, 0.0, 0.0, 0.5});
  Coupling swap({0, 1}, {0, 1}, {0.0, 0.5, 0.5, 0.0});
  auto pm = glue({identity, swap}, {mu, mu, mu});
  REQUIRE(pm.paths.size() == 2);
  CHECK(pm.grid == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(pm.paths[0].nodes == std::vector<std::size_t>{0, 0, 1});
  CHECK(pm.paths[0].weight == Approx(0.5));
  CHECK(pm.paths[1].nodes == std::vector<std::size_t>{1, 1, 0});
  CHECK(pm.paths[1].weight == Approx(0.5));

  // marginals of the path measure recover the rung measures
  for (std::size_t k = 0; k < 3; ++k) CHECK(pm.node_marginal(k) == mu);

  auto pair01 = pm.pair_marginal(0, 1);
  CHECK(pair01.at(0, 0) == Approx(0.5));
  CHECK(pair01.at(0, 1) == 0.0);
  auto pair02 = pm.pair_marginal(0, 2);
  CHECK(pair02.at(0, 1) == Approx(0.5));  // identity then swap composes to swap

  SECTION("custom times pass through") {
    auto t = glue({identity, swap}, {mu, mu, mu}, {0.0, 0.25, 1.0});
    CHECK(t.grid == std::vector<double>{0.0, 0.25, 1.0});
  }
  SECTION("marginal interlock is enforced") {
    auto other = DiscreteMeasure::create({0, 1}, {0.3, 0.7});
    CHECK_THROWS_AS(glue({identity, swap}, {mu, other, mu}), std::domain_error);
    CHECK_THROWS_AS(glue({identity}, {mu, mu, mu}), std::invalid_argument);
  }
}

TEST_CASE("gluing with branching uses conditional weights") {
  // mu0 = dirac at 0, mu1 = uniform{0,1}; step 1 splits, step 2 keeps each half
  auto mu0 = DiscreteMeasure::dirac(0);
  auto mu1 = DiscreteMeasure::uniform({0, 1});
  Coupling split({0}, {0, 1}, {0.5, 0.5});
  Coupling keep({0, 1}, {0, 1}, {0.5, 0.0, 0.0, 0.5});
  auto pm = glue({split, keep}, {mu0, mu1, mu1});
  REQUIRE(pm.paths.size() == 2);
  CHECK(pm.paths[0].nodes == std::vector<std::size_t>{0, 0, 0});
  CHECK(pm.paths[0].weight == Approx(0.5));
  CHECK(pm.paths[1].nodes == std::vector<std::size_t>{0, 1, 1});
  CHECK(pm.paths[1].weight == Approx(0.5));
  CHECK(pm.node_marginal(2) == mu1);
}
