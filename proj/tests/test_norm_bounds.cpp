#include <doctest.h>

#include <cmath>

#include "splitbound/norm_bounds.hpp"

using namespace splitbound;

TEST_CASE("general splitting bound, hand-evaluated cases") {
  SplittingScheme lt;
  lt.variant = SchemeVariant::general_splitting;
  lt.num_operators = 2;
  lt.claimed_order = 1;
  lt.stage_coeffs = {{Scalar(1), Scalar(1)}};
  // (1/2)(2^2 + 2^2) = 4
  CHECK(general_splitting_bound(lt, {1, 1}, 1) == doctest::Approx(4.0));
  CHECK(general_splitting_bound(lt, {0, 0}, 1) == doctest::Approx(0.0));

  SplittingScheme st;
  st.variant = SchemeVariant::general_splitting;
  st.num_operators = 2;
  st.claimed_order = 2;
  st.stage_coeffs = {{Scalar::rational(1, 2), Scalar(1)},
                     {Scalar::rational(1, 2), Scalar(0)}};
  // (1/6)(8 + 8) = 8/3
  CHECK(general_splitting_bound(st, {1, 1}, 1) == doctest::Approx(8.0 / 3));
  CHECK_THROWS_AS(general_splitting_bound(st, {-1, 1}, 1), std::domain_error);
  CHECK_THROWS_AS(general_splitting_bound(st, {1, 1}, -0.5), std::domain_error);
}

TEST_CASE("Strang composition constants are exactly 1/3") {
  auto st = catalog("strang");
  auto generic = composition_bound(st, BoundKind::strang);
  CHECK(generic.order_exponent == 3);
  CHECK(generic.constant == Scalar::rational(1, 3));
  auto sym = composition_bound(st, BoundKind::strang_symmetric);
  CHECK(sym.constant == Scalar::rational(1, 3));
}

TEST_CASE("two-term symmetric constant for Strang is 5/96") {
  auto b = composition_bound(as_twoterm(catalog("strang")),
                             BoundKind::twoterm_symmetric);
  CHECK(b.constant == Scalar::rational(5, 96));
  CHECK(b.order_exponent == 3);
}

TEST_CASE("Lie-Trotter composition constant") {
  auto b = composition_bound(catalog("lie_trotter"), BoundKind::trotter);
  CHECK(b.order_exponent == 2);
  CHECK(b.constant == Scalar(1));  // (1 + 1^2)/2!
}

TEST_CASE("triple jump symmetric constant matches direct substitution") {
  auto b = composition_bound(catalog("triple_jump"),
                             BoundKind::strang_symmetric);
  double g = 1.0 / (2.0 - std::cbrt(2.0));
  double expect = std::pow(2.0, -4) * std::pow(1.0 + (4 * g - 1), 5) / 120.0;
  CHECK(b.constant.value() == doctest::Approx(expect));
}

TEST_CASE("symmetric kinds reject non-palindromic schemes") {
  CHECK_THROWS_AS(
      composition_bound(catalog("lie_trotter"), BoundKind::trotter_symmetric),
      not_symmetric_error);
}

TEST_CASE("bound evaluation scales as lambda^{p+1}") {
  auto b = composition_bound(catalog("strang"), BoundKind::strang);
  CHECK(b.evaluate(2.0, 0.0) == doctest::Approx(0.0));
  CHECK(b.evaluate(2.0, 0.5) ==
        doctest::Approx(b.constant.value() * std::pow(1.0, 3)));
  CHECK(b.evaluate(1.0, 0.1) < b.evaluate(1.0, 0.2));  // monotone in h
  CHECK(b.evaluate(1.0, 0.1) < b.evaluate(2.0, 0.1));  // monotone in norms
}

TEST_CASE("applicable bounds reflect palindromy") {
  auto lt = applicable_bounds(catalog("lie_trotter"));
  auto st = applicable_bounds(catalog("strang"));
  CHECK(st.size() > lt.size());  // symmetric variants only when palindromic
  for (const auto& b : st) CHECK(b.constant > Scalar(0));
  for (const auto& b : st) CHECK(b.order_exponent == 3);
  for (const auto& b : lt) CHECK(b.order_exponent == 2);
}

TEST_CASE("symmetric constants never exceed generic ones on the catalog") {
  for (const char* name : {"strang", "triple_jump", "quintuple_jump"}) {
    auto s = catalog(name);
    auto gen = composition_bound(s, BoundKind::strang);
    auto sym = composition_bound(s, BoundKind::strang_symmetric);
    CHECK(sym.constant.value() <= gen.constant.value() * (1 + 1e-14));
  }
}

TEST_CASE("effective error reproduces the reference figures") {
  auto tj = effective_error(catalog("triple_jump"));
  CHECK(tj.stages == 3);
  CHECK(tj.ef_table == doctest::Approx(2.892).epsilon(2e-3));
  auto qj = effective_error(catalog("quintuple_jump"));
  CHECK(qj.stages == 5);
  CHECK(qj.ef_table == doctest::Approx(2.166).epsilon(2e-3));
  // the two formulas disagree for the triple jump; both must be reported
  CHECK(std::fabs(tj.ef_caption - tj.ef_table) > 0.1);

  auto st = effective_error(catalog("strang"));
  CHECK(st.ef_table == doctest::Approx(std::sqrt(1.0 / 12)));
}

TEST_CASE("global error bound is k times the local one") {
  CHECK(global_error_bound(0.01, 10) == doctest::Approx(0.1));
  CHECK(global_error_bound(0.0, 100) == doctest::Approx(0.0));
  CHECK_THROWS_AS(global_error_bound(0.01, 0), std::domain_error);
  CHECK_THROWS_AS(global_error_bound(-0.01, 1), std::domain_error);
}

TEST_CASE("bound kind names round trip") {
  for (auto k : {BoundKind::trotter, BoundKind::strang,
                 BoundKind::trotter_symmetric, BoundKind::strang_symmetric,
                 BoundKind::twoterm, BoundKind::twoterm_symmetric})
    CHECK(bound_kind_from_name(bound_kind_name(k)) == k);
  CHECK_THROWS(bound_kind_from_name("bogus"));
}
