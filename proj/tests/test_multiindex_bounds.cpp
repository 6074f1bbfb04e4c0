#include <doctest.h>

#include <cmath>

#include "splitbound/multiindex_bounds.hpp"

using namespace splitbound;

TEST_CASE("multi-index enumeration") {
  auto m1 = multi_indices(1);
  REQUIRE(m1.size() == 1);
  CHECK(m1[0] == MultiIndex{1});

  auto m3 = multi_indices(3);
  REQUIRE(m3.size() == 4);  // 2^{n-1}
  CHECK(m3[0] == MultiIndex{1, 1, 1});
  CHECK(m3[1] == MultiIndex{1, 2});
  CHECK(m3[2] == MultiIndex{2, 1});
  CHECK(m3[3] == MultiIndex{3});

  CHECK(multi_indices(6).size() == 32);
}

TEST_CASE("epsilon table is 1/m! on all-ones indices") {
  auto eps = epsilon_table(4);
  CHECK(eps.at({1, 1, 1}) == Scalar::rational(1, 6));
  CHECK(eps.at({1, 1, 1, 1}) == Scalar::rational(1, 24));
  CHECK(eps.at({2, 1}).is_zero());
  CHECK(eps.at({4}).is_zero());
}

TEST_CASE("weight bounds are enforced") {
  CHECK_THROWS_AS(epsilon_table(0), std::domain_error);
  CHECK_THROWS_AS(epsilon_table(kMaxWeight + 1), std::domain_error);
  CHECK_THROWS_AS(w_table({Scalar(1)}, kMaxWeight + 1), std::domain_error);
}

TEST_CASE("w table basics for the Strang alphas") {
  std::vector<Scalar> alphas = {Scalar::rational(1, 2),
                                Scalar::rational(1, 2)};
  auto w = w_table(alphas, 3);
  // weight 1: consistency sum alpha = 1
  CHECK(w.at({1}) == Scalar(1));
  // order 2: every delta of weight <= 2 vanishes, so w = epsilon there
  CHECK(w.at({2}).is_zero());
  CHECK(w.at({1, 1}) == Scalar::rational(1, 2));
  // all entries stay exact rationals
  for (const auto& [idx, val] : w.entries) CHECK(val.exact());
}

TEST_CASE("delta vanishes up to the order and the order is detected") {
  auto lt = delta_table(composition_alphas(catalog("lie_trotter")), 4);
  CHECK(order_of(lt, 4) == 1);
  CHECK(lt.at({1}).is_zero());

  auto st = strang_delta_table({Scalar(1)}, 5);
  CHECK(order_of(st, 5) == 2);
  for (int n = 1; n <= 2; ++n)
    for (const auto& idx : multi_indices(n)) CHECK(st.at(idx).is_zero());

  CHECK(order_of(catalog("triple_jump"), 6) == 4);
  CHECK(order_of(catalog("quintuple_jump"), 6) == 4);
}

TEST_CASE("d_n vanishes up to the order and is nonnegative beyond") {
  auto st = strang_delta_table({Scalar(1)}, 5);
  CHECK(d_n(st, 1) == doctest::Approx(0.0));
  CHECK(d_n(st, 2) == doctest::Approx(0.0));
  CHECK(d_n(st, 3) > 0);
  CHECK(d_n(st, 3) == doctest::Approx(0.25));
}

TEST_CASE("half sequence of a palindromic scheme") {
  auto half = phi_half(catalog("strang"));
  REQUIRE(half.size() == 1);
  CHECK(half[0] == Scalar::rational(1, 2));
  CHECK_THROWS_AS(phi_half(catalog("lie_trotter")), not_symmetric_error);
}

TEST_CASE("symmetric coefficients for the Strang splitting") {
  auto v = v_table(phi_half(catalog("strang")), 10);
  // d_3^sym = 2(1/48 + 1/16 + 1/24) = 1/4, assembled from exact entries
  CHECK(v.at({3}) == Scalar::rational(1, 8));
  CHECK(v.at({2, 1}) == Scalar::rational(-1, 8));
  CHECK(v.at({1, 2}).is_zero());
  CHECK(v.at({1, 1, 1}) == Scalar::rational(1, 24));
  CHECK(d_n_sym(v, 3) == doctest::Approx(0.25));
  // even weights contribute nothing to the odd-part error expansion
  for (int n = 2; n <= 10; n += 2) CHECK(d_n_sym(v, n) == 0.0);
  for (const auto& [idx, val] : v.entries) CHECK(val.exact());
}

TEST_CASE("refined bound structure, symmetric route") {
  auto b = refined_bound(catalog("strang"), 5);
  CHECK(b.p == 2);
  CHECK(b.q == 5);
  CHECK(b.symmetric);
  REQUIRE(b.d.count(3) == 1);
  CHECK(b.d.at(3) == doctest::Approx(0.25));
  CHECK(b.d.count(4) == 0);  // even terms absent
  // tail = (1 + sum|gamma|)^{q+1} / ((q+1)! 2^q)
  CHECK(b.tail == doctest::Approx(std::pow(2.0, 6) / (720.0 * 32.0)));
  CHECK(b.evaluate(0.0) == doctest::Approx(0.0));
  CHECK(b.evaluate(0.5) < b.evaluate(1.0));
}

TEST_CASE("refined bound structure, generic route") {
  auto b = refined_bound(catalog("lie_trotter"), 3);
  CHECK(b.p == 1);
  CHECK_FALSE(b.symmetric);
  CHECK(b.d.count(2) == 1);
  CHECK(b.d.count(3) == 1);
  // tail = (1 + 2 (sum|alpha|)^{q+1}) / (q+1)! with sum|alpha| = 1
  CHECK(b.tail == doctest::Approx(3.0 / 24.0));
}

TEST_CASE("refined bound rejects bad depths") {
  CHECK_THROWS_AS(refined_bound(catalog("strang"), kMaxWeight + 1),
                  std::domain_error);
}

TEST_CASE("json rendering of the bound polynomial") {
  auto b = refined_bound(catalog("strang"), 3);
  auto j = b.to_json();
  CHECK(j.find("\"p\": 2") != std::string::npos);
  CHECK(j.find("\"symmetric\": true") != std::string::npos);
}

TEST_CASE("order detection tolerates round-off on real coefficients") {
  // triple jump gammas are doubles; weight-4 deltas are ~1e-17, not 0
  auto delta = delta_table(composition_alphas(catalog("triple_jump")), 5);
  CHECK(order_of(delta, 5) == 4);
  bool exactly_zero = true;
  for (const auto& idx : multi_indices(4))
    if (delta.at(idx).value() != 0.0) exactly_zero = false;
  CHECK_FALSE(exactly_zero);
}
