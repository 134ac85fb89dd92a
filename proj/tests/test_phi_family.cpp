#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tensorforge/phi_family.hpp"

using namespace tensorforge;

TEST_CASE("derive_parameters") {
  // the worked example: A=C^3, B=C^4, C=C^2, r=3
  auto p = derive_parameters(3, 4, 2, 3);
  CHECK(p.rho == 49);
  CHECK(p.theta == 2);
  CHECK(p.sigma == 14406);
  CHECK_FALSE(p.theta_degenerate);

  auto q = derive_parameters(1, 1, 1, 1);
  CHECK(q.rho == 3);
  CHECK(q.theta == 0);
  CHECK(q.sigma == 18);
  CHECK(q.theta_degenerate);

  auto s = derive_parameters(2, 2, 2, 2);
  CHECK(s.rho == 17);
  CHECK(s.theta == 1);
  CHECK(s.sigma == 1156);
}

TEST_CASE("digits") {
  const u64 sigma = 14406;
  auto [u1, u2] = digits(2 * sigma + 1, sigma);
  CHECK(u1 == 3);
  CHECK(u2 == 2);
  CHECK(digits(0, sigma) == std::pair<u64, u64>{1, 1});
  CHECK(digits(sigma * sigma - 1, sigma) == std::pair<u64, u64>{sigma, sigma});
  CHECK_THROWS_AS(digits(sigma * sigma, sigma), DomainError);
}

TEST_CASE("phi_tensor reproduces the worked example supports") {
  // pi1 = (1,1), pi2 = (2,2), pi3 = (1,2); Phi(1) = 2s+1, Phi(2) = 4s+3
  const u64 sigma = 14406;
  PhiParams params(3, 2, sigma, {{1, 1}, {2, 2}, {1, 2}});
  PhiFunction phi{{2 * sigma + 1, 4 * sigma + 3}};
  FactoredMatrix m = phi_tensor(params, phi, 3, 4);
  // left: e1 (x) phi_{3,5} + e2 (x) phi_{2,4} + e3 (x) phi_{3,4} (1-based digits)
  auto multi = [&](u64 d1, u64 d2) { return (d1 - 1) * sigma + (d2 - 1); };
  REQUIRE(m.left.size() == 3);
  CHECK(m.left.count(0 * m.side + multi(3, 5)) == 1);
  CHECK(m.left.count(1 * m.side + multi(2, 4)) == 1);
  CHECK(m.left.count(2 * m.side + multi(3, 4)) == 1);
  // right: e1 (x) psi_{2,4} + e2 (x) psi_{3,5} + e3 (x) psi_{2,5}
  REQUIRE(m.right.size() == 3);
  CHECK(m.right.count(0 * m.side + multi(2, 4)) == 1);
  CHECK(m.right.count(1 * m.side + multi(3, 5)) == 1);
  CHECK(m.right.count(2 * m.side + multi(2, 5)) == 1);
  for (const auto& [k, v] : m.left) CHECK(v == 1);
  for (const auto& [k, v] : m.right) CHECK(v == 1);
}

TEST_CASE("phi_tensor at theta = 0 is the all-ones support on the first r coordinates") {
  PhiParams params = PhiParams::with_default_pi(1, 0, 5);
  FactoredMatrix m = phi_tensor(params, PhiFunction{{}}, 3, 3);
  CHECK(m.side == 1);
  CHECK(m.left.size() == 1);
  CHECK(m.right.size() == 1);
  CHECK(m.left.count(0) == 1);
}

TEST_CASE("each block of a phi tensor holds exactly one unit entry") {
  PhiParams params = PhiParams::with_default_pi(3, 2, 3);
  PhiFunction phi{{4, 7}};
  FactoredMatrix m = phi_tensor(params, phi, 3, 3);
  for (u64 i = 0; i < 3; ++i)
    for (u64 j = 0; j < 3; ++j) {
      int count = 0;
      for (const auto& [lk, lv] : m.left) {
        if (lk / m.side != i) continue;
        for (const auto& [rk, rv] : m.right) {
          if (rk / m.side != j) continue;
          CHECK(lv * rv == 1);
          ++count;
        }
      }
      CHECK(count == 1);
    }
}

TEST_CASE("enumerate_family sizes and budget error") {
  PhiParams p22 = PhiParams::with_default_pi(2, 1, 2);
  CHECK(enumerate_family(p22, 100).size() == 4);

  PhiParams p42 = PhiParams::with_default_pi(3, 2, 4);
  CHECK(enumerate_family(p42, 1000).size() == 256);

  PhiParams big(3, 2, 14406, {{1, 1}, {2, 2}, {1, 2}});
  CHECK(big.family_size() == Integer("43069878018202896"));
  CHECK_THROWS_WITH_AS(enumerate_family(big, 1000000),
                       doctest::Contains("family size 43069878018202896 exceeds budget"),
                       DomainError);
}

TEST_CASE("pi functions must be pairwise distinct") {
  CHECK_THROWS_AS(PhiParams(2, 1, 2, {{1}, {1}}), DomainError);
  CHECK_THROWS_AS(PhiParams(3, 1, 2, {{1}, {2}, {1}}), DomainError);  // 2^theta < r
}

TEST_CASE("unit_set closed form equals brute force") {
  for (auto [r, theta, sigma] : std::vector<std::array<u64, 3>>{
           {2, 1, 2}, {2, 2, 2}, {3, 2, 4}, {4, 2, 3}, {2, 1, 5}}) {
    PhiParams params = PhiParams::with_default_pi(r, theta, sigma);
    auto closed = unit_set(params, UnitMethod::ClosedForm);
    auto brute = unit_set(params, UnitMethod::BruteForce);
    CHECK(closed == brute);
    for (const auto& u : closed) CHECK(u.i != u.j);
  }
  // worked small case: r=2, theta=1, sigma=2, pi1 = 1, pi2 = 2
  PhiParams p(2, 1, 2, {{1}, {2}});
  auto units = unit_set(p, UnitMethod::ClosedForm);
  CHECK(units.size() == 4);  // two ordered pairs x two positions with phi = psi
}

TEST_CASE("verify_family_structure passes at the two acceptance parameter sets") {
  for (auto [r, theta, sigma] :
       std::vector<std::array<u64, 3>>{{2, 1, 2}, {3, 2, 4}}) {
    PhiParams params = PhiParams::with_default_pi(r, theta, sigma);
    StructureReport rep = verify_family_structure(params, 1u << 20, 7, 20);
    CHECK(rep.coverage_exactly_once);
    CHECK(rep.all_rank_one);
    CHECK(rep.off_diagonal_block_diagonal);
    CHECK(rep.unit_sets_agree);
    CHECK(rep.clone_membership);
    CHECK(rep.pass());
    CHECK(rep.witnesses.empty());
  }
}

TEST_CASE("theta = 0 degenerates cleanly") {
  // r = 1 forces theta = 0: a single Phi (the empty function), no units,
  // side length 1, and w^Sigma = E00 a member with coefficient 1
  PhiParams params = PhiParams::with_default_pi(1, 0, 5);
  CHECK(params.side_len() == 1);
  CHECK(params.family_size() == 1);
  CHECK(enumerate_family(params, 10).size() == 1);
  CHECK(unit_set(params, UnitMethod::ClosedForm).empty());
  CHECK(unit_set(params, UnitMethod::BruteForce).empty());
  StructureReport rep = verify_family_structure(params, 10, 3, 5);
  CHECK(rep.pass());
}

TEST_CASE("structure is independent of the pi assignment") {
  PhiParams a = PhiParams::with_default_pi(3, 2, 3);
  PhiParams b(3, 2, 3, {{2, 2}, {1, 2}, {2, 1}});
  for (const auto& params : {a, b}) {
    StructureReport rep = verify_family_structure(params, 1u << 20, 11, 10);
    CHECK(rep.pass());
  }
}

TEST_CASE("membership_in_M") {
  PhiParams params = PhiParams::with_default_pi(2, 1, 2);
  // w^Sigma_theta is a member with coefficient 1 on every family element
  MatrixQ w = w_sigma_clone(params, 2, 2);
  auto sol = membership_in_M(params, w, 1u << 20);
  REQUIRE(sol.has_value());
  int family_coeffs = 0;
  for (const auto& [key, v] : *sol)
    if (key.rfind("phi:", 0) == 0) {
      CHECK(v == 1);
      ++family_coeffs;
    }
  CHECK(family_coeffs == 4);

  // zero matrix: member with zero coefficients
  MatrixQ zero(4, 4);
  auto zsol = membership_in_M(params, zero, 1u << 20);
  REQUIRE(zsol.has_value());
  CHECK(zsol->empty());

  // a unit at an off-diagonal position outside U is not in the span:
  // block (0,1) positions need phi_1 = psi_1, so (alpha,beta) = (0,1) is out
  MatrixQ bad(4, 4);
  bad.set(0, 2 + 1, 1);  // block (0,1), alpha=0, beta=1
  CHECK_FALSE(membership_in_M(params, bad, 1u << 20).has_value());

  // an entry outside the r x r block structure is out as well
  MatrixQ outside(6, 6);
  outside.set(5, 5, 1);
  PhiParams p2 = PhiParams::with_default_pi(2, 1, 2);
  CHECK_FALSE(membership_in_M(p2, outside, 1u << 20).has_value());
}

TEST_CASE("membership over a factored-matrix list target") {
  PhiParams params = PhiParams::with_default_pi(2, 1, 2);
  auto family = enumerate_family(params, 100);
  std::vector<FactoredMatrix> target = {phi_tensor(params, family[0], 2, 2),
                                        phi_tensor(params, family[3], 2, 2)};
  auto sol = membership_in_M(params, target, 1u << 20);
  REQUIRE(sol.has_value());
  // coefficients 1 on the two summed family elements, nothing else on F
  int ones = 0;
  for (const auto& [key, v] : *sol)
    if (key.rfind("phi:", 0) == 0) {
      CHECK(v == 1);
      ++ones;
    }
  CHECK(ones == 2);
}

TEST_CASE("membership solution re-sums to the target") {
  PhiParams params = PhiParams::with_default_pi(3, 2, 2);
  MatrixQ w = w_sigma_clone(params, 3, 3);
  auto sol = membership_in_M(params, w, 1u << 20);
  REQUIRE(sol.has_value());
  // rebuild sum c_Phi M^Phi + sum c_u unit and compare
  const u64 side = params.side_len();
  MatrixQ acc(w.rows(), w.cols());
  for (const auto& phi : enumerate_family(params, 1u << 20)) {
    std::string key = "phi:" + std::to_string(phi.values[0]) + "," + std::to_string(phi.values[1]);
    auto it = sol->find(key);
    if (it == sol->end()) continue;
    FactoredMatrix m = phi_tensor(params, phi, 3, 3);
    for (const auto& [lk, lv] : m.left)
      for (const auto& [rk, rv] : m.right)
        acc.add(static_cast<std::int64_t>(lk), static_cast<std::int64_t>(rk), it->second * lv * rv);
  }
  for (const auto& [key, v] : *sol) {
    if (key.rfind("unit:", 0) != 0) continue;
    u64 vals[4]{};
    std::sscanf(key.c_str(), "unit:%lu,%lu,%lu,%lu", &vals[0], &vals[1], &vals[2], &vals[3]);
    acc.add(static_cast<std::int64_t>(vals[0] * side + vals[1]),
            static_cast<std::int64_t>(vals[2] * side + vals[3]), v);
  }
  CHECK(acc == w);
}

TEST_CASE("find_clear_class") {
  // r=2, omega=4: universe {0..7}, S_0 = {0..3}, S_1 = {4..7}
  std::vector<std::vector<u64>> classes = {{0, 4}, {1, 5}, {2, 6}, {3, 7}};
  std::vector<std::vector<u64>> excluded = {{1}, {6}};
  u64 d = find_clear_class(2, 4, classes, excluded);
  CHECK(d == 0);  // class {0,4} avoids {1,6}
  CHECK(classes[d].size() == 2);

  // all excluded sets empty: first class wins
  CHECK(find_clear_class(2, 4, classes, {{}, {}}) == 0);

  // |Z_1| = omega / r violates the strict inequality
  CHECK_THROWS_AS(find_clear_class(2, 4, classes, {{0, 1}, {}}), DomainError);
  // non-partition classes rejected
  CHECK_THROWS_AS(find_clear_class(2, 4, {{0, 4}, {1, 5}, {2, 6}, {3, 6}}, {{}, {}}), DomainError);
}
