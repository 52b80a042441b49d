#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "orlicz_ot/orlicz.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace orlicz_ot;
using Catch::Approx;

TEST_CASE("weighted samples validation") {
  CHECK_THROWS_AS(WeightedSamples({1.0, 2.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedSamples({1.0}, {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedSamples({1.0, 2.0}, {0.0, 0.0}), std::invalid_argument);
  WeightedSamples u({1.0, -2.0, 3.0}, {0.5, 0.0, 0.5});
  CHECK(u.size() == 3);
  CHECK(u.total_weight() == Approx(1.0));
  CHECK(u.max_abs() == 3.0);
  // zero-weight entries do not count towards max_abs
  WeightedSamples v({9.0, 1.0}, {0.0, 1.0});
  CHECK(v.max_abs() == 1.0);
}

TEST_CASE("modular evaluation") {
  YoungFunction p2 = YoungFunction::power(2.0);
  WeightedSamples u({1.0, 2.0}, {0.5, 0.5});
  CHECK(modular(u, p2, 1.0) == Approx(2.5));
  CHECK(modular(u, p2, 2.0) == Approx(0.625));
  CHECK_THROWS_AS(modular(u, p2, 0.0), std::domain_error);
  CHECK_THROWS_AS(modular(u, p2, -1.0), std::domain_error);

  WeightedSamples w({kInf, 1.0}, {0.25, 0.75});
  CHECK(is_inf(modular(w, p2, 5.0)));
  WeightedSamples w0({kInf, 1.0}, {0.0, 1.0});  // 0 * psi(inf) = 0 convention
  CHECK(modular(w0, p2, 1.0) == Approx(1.0));
}

TEST_CASE("luxemburg norm: frozen values") {
  YoungFunction p2 = YoungFunction::power(2.0);
  WeightedSamples u({1.0, 2.0}, {0.5, 0.5});
  // sum w (u/lambda)^2 = 1  =>  lambda = sqrt(2.5)
  CHECK(luxemburg_norm(u, p2) == Approx(std::sqrt(2.5)).epsilon(1e-9));
  CHECK(luxemburg_norm(u, p2) == Approx(1.5811388300841898).epsilon(1e-9));

  WeightedSamples z({0.0, 0.0}, {0.5, 0.5});
  CHECK(luxemburg_norm(z, p2) == 0.0);

  WeightedSamples inf_sample({kInf, 0.0}, {0.5, 0.5});
  CHECK(is_inf(luxemburg_norm(inf_sample, p2)));
}

TEST_CASE("luxemburg norm: indicator profile reduces to a scaled sup") {
  YoungFunction l = YoungFunction::linf();
  WeightedSamples u({0.5, -3.0, 2.0}, {0.2, 0.3, 0.5});
  CHECK(luxemburg_norm(u, l) == 3.0);  // exact, no bisection involved
  YoungFunction ind = YoungFunction::tabulated({{0.0, 0.0}, {2.0, 0.0}}, 2.0);
  CHECK(luxemburg_norm(u, ind) == 1.5);  // sup / r1
}

TEST_CASE("luxemburg norm matches a fixed-bracket oracle on random data") {
  auto g = testgen::rng(101);
  std::uniform_real_distribution<double> val(-4.0, 4.0);
  for (const auto& named : testgen::catalog()) {
    for (int rep = 0; rep < 40; ++rep) {
      std::uniform_int_distribution<int> nd(1, 6);
      int n = nd(g);
      std::vector<double> vs(n), ws(n);
      std::exponential_distribution<double> ed(1.0);
      for (int i = 0; i < n; ++i) {
        vs[i] = val(g);
        ws[i] = ed(g) + 1e-3;
      }
      double total = 0.0;
      for (double w : ws) total += w;
      for (double& w : ws) w /= total;
      WeightedSamples u(vs, ws);
      double lib = luxemburg_norm(u, named.psi, 1e-10);
      double ora = oracles::luxemburg_oracle(
          vs, ws, [&](double x) { return named.psi.eval(x); });
      INFO(named.name << " rep " << rep);
      CHECK(lib == Approx(ora).epsilon(1e-7).margin(1e-12));
    }
  }
}

TEST_CASE("luxemburg norm properties: scaling and triangle") {
  auto g = testgen::rng(102);
  std::uniform_real_distribution<double> val(0.0, 3.0);
  for (const auto& named : testgen::catalog()) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> a(4), b(4), ab(4);
      std::vector<double> ws = {0.25, 0.25, 0.25, 0.25};
      for (int i = 0; i < 4; ++i) {
        a[i] = val(g);
        b[i] = val(g);
        ab[i] = a[i] + b[i];
      }
      WeightedSamples ua(a, ws), ub(b, ws), uab(ab, ws);
      double na = luxemburg_norm(ua, named.psi), nb = luxemburg_norm(ub, named.psi);
      double nab = luxemburg_norm(uab, named.psi);
      INFO(named.name);
      CHECK(nab <= na + nb + 1e-8);

      std::vector<double> scaled(4);
      for (int i = 0; i < 4; ++i) scaled[i] = 3.0 * a[i];
      CHECK(luxemburg_norm(WeightedSamples(scaled, ws), named.psi) ==
            Approx(3.0 * na).epsilon(1e-7).margin(1e-12));
    }
  }
}

TEST_CASE("unit modular at the norm when psi is finite everywhere") {
  auto g = testgen::rng(103);
  std::uniform_real_distribution<double> val(0.1, 3.0);
  for (const auto& named : testgen::catalog()) {
    if (named.psi.kind() == YoungKind::linf) continue;
    std::vector<double> vs = {val(g), val(g), val(g)};
    WeightedSamples u(vs, {0.3, 0.3, 0.4});
    double n = luxemburg_norm(u, named.psi, 1e-11);
    CHECK(modular(u, named.psi, n) == Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("holder inequality with the factor-2 constant") {
  YoungFunction p2 = YoungFunction::power(2.0);
  SECTION("frozen example") {
    // u = v = 1 with unit mass: lhs = 1, |u|_psi = 1, |v|_psi* = 1/2
    WeightedSamples u({1.0}, {1.0});
    auto rep = holder_check(u, u, p2);
    CHECK(rep.lhs == Approx(1.0));
    CHECK(rep.rhs == Approx(1.0));
    CHECK(rep.ok);
  }
  SECTION("weights must match") {
    WeightedSamples u({1.0}, {1.0});
    WeightedSamples v({1.0, 2.0}, {0.5, 0.5});
    CHECK_THROWS_AS(holder_check(u, v, p2), std::invalid_argument);
  }
  SECTION("random instances never violate the bound") {
    auto g = testgen::rng(104);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (const auto& named : testgen::catalog()) {
      for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> a(5), b(5), ws = {0.2, 0.2, 0.2, 0.2, 0.2};
        for (int i = 0; i < 5; ++i) {
          a[i] = val(g);
          b[i] = val(g);
        }
        WeightedSamples u(a, ws), v(b, ws);
        auto r = holder_check(u, v, named.psi, 1e-9);
        INFO(named.name);
        CHECK(r.ok);
      }
    }
  }
}

TEST_CASE("duality bracket encloses the norm") {
  YoungFunction p2 = YoungFunction::power(2.0);
  SECTION("frozen L2 example") {
    // |u|_psi = |u|_2 for unit-mass weights; pairing with v = u rescaled to
    // |v|_psi* = 1 gives 2 |u|_2, so the bracket is [|u|_2, 4 |u|_2].
    WeightedSamples u({1.0, 3.0}, {0.5, 0.5});
    double l2 = std::sqrt(0.5 * 1.0 + 0.5 * 9.0);  // sqrt(5)
    auto br = dual_bracket(u, p2, {u}, p2.conjugate(), 1e-10);
    CHECK(br.best_pairing == Approx(2.0 * l2).epsilon(1e-8));
    CHECK(br.lower == Approx(l2).epsilon(1e-8));
    CHECK(br.upper == Approx(4.0 * l2).epsilon(1e-8));
    double norm = luxemburg_norm(u, p2);
    CHECK(norm == Approx(l2).epsilon(1e-9));
    CHECK(br.lower <= norm + 1e-9);
    CHECK(norm <= br.upper + 1e-9);
  }
  SECTION("single atom") {
    WeightedSamples u({5.0}, {1.0});
    WeightedSamples ones({1.0}, {1.0});
    auto br = dual_bracket(u, p2, {ones}, p2.conjugate(), 1e-10);
    CHECK(br.best_pairing == Approx(10.0).epsilon(1e-8));  // |1|_psi* = 1/2
    CHECK(br.lower == Approx(5.0).epsilon(1e-8));
    CHECK(br.upper == Approx(20.0).epsilon(1e-8));
  }
  SECTION("empty trial list throws") {
    WeightedSamples u({1.0}, {1.0});
    CHECK_THROWS_AS(dual_bracket(u, p2, {}, p2.conjugate(), 1e-10), std::invalid_argument);
  }
}
