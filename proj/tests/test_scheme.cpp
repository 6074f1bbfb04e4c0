#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "splitbound/scheme.hpp"

using namespace splitbound;

namespace {

Scalar half() { return Scalar::rational(1, 2); }

bool seq_equals(const ExponentSequence& seq,
                const std::vector<std::pair<int, Scalar>>& expect) {
  if (seq.size() != expect.size()) return false;
  for (size_t i = 0; i < seq.size(); ++i)
    if (seq[i].op != expect[i].first || !(seq[i].coeff == expect[i].second))
      return false;
  return true;
}

}  // namespace

TEST_CASE("catalog schemes") {
  CHECK(catalog_names().size() == 4);
  CHECK(catalog("lie_trotter").claimed_order == 1);
  CHECK(catalog("strang").claimed_order == 2);
  CHECK(catalog("triple_jump").claimed_order == 4);
  CHECK(catalog("quintuple_jump").claimed_order == 4);
  CHECK_THROWS_AS(catalog("nope"), invalid_scheme_error);
  for (const auto& n : catalog_names()) CHECK(check_consistency(catalog(n)).ok);
}

TEST_CASE("stages per variant") {
  CHECK(catalog("lie_trotter").stages() == 1);
  CHECK(catalog("strang").stages() == 1);
  CHECK(catalog("triple_jump").stages() == 3);
  CHECK(catalog("quintuple_jump").stages() == 5);
}

TEST_CASE("consistency flags coefficient sums away from one") {
  SplittingScheme s;
  s.variant = SchemeVariant::strang_composition;
  s.gammas = {half()};
  auto rep = check_consistency(s);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].find("sum gamma") != std::string::npos);

  SplittingScheme g;
  g.variant = SchemeVariant::general_splitting;
  g.num_operators = 2;
  g.stage_coeffs = {{half(), Scalar(1)}, {half(), Scalar(0)}};
  CHECK(check_consistency(g).ok);
}

TEST_CASE("palindromy") {
  CHECK_FALSE(is_palindromic(catalog("lie_trotter")));
  CHECK(is_palindromic(catalog("strang")));
  CHECK(is_palindromic(catalog("triple_jump")));
  CHECK(is_palindromic(catalog("quintuple_jump")));

  SplittingScheme g;
  g.variant = SchemeVariant::general_splitting;
  g.num_operators = 2;
  g.stage_coeffs = {{half(), Scalar(1)}, {half(), Scalar(0)}};
  CHECK(is_palindromic(g));  // flattens to the Strang product
}

TEST_CASE("flatten drops zeros and merges adjacent factors") {
  // Lie-Trotter alphas (0, 1): only the chi factor survives, A_N first
  auto lt = flatten(catalog("lie_trotter"));
  CHECK(seq_equals(lt, {{2, Scalar(1)}, {1, Scalar(1)}}));

  auto st = flatten(catalog("strang"));
  CHECK(seq_equals(st, {{1, half()}, {2, Scalar(1)}, {1, half()}}));

  SplittingScheme g;
  g.variant = SchemeVariant::general_splitting;
  g.num_operators = 2;
  g.stage_coeffs = {{half(), Scalar(1)}, {half(), Scalar(0)}};
  CHECK(seq_equals(flatten(g), {{1, half()}, {2, Scalar(1)}, {1, half()}}));
}

TEST_CASE("flatten merges across chi/chi* boundaries") {
  SplittingScheme s;
  s.variant = SchemeVariant::trotter_composition;
  Scalar q = Scalar::rational(1, 4);
  s.alphas = {q, q, q, q};
  // chi*(q) -> A,B ; chi(q) -> B,A ; chi*(q) -> A,B ; chi(q) -> B,A
  auto seq = flatten(s);
  CHECK(seq_equals(seq, {{1, q},
                         {2, half()},
                         {1, half()},
                         {2, half()},
                         {1, q}}));
}

TEST_CASE("composition/two-term conversions invert each other") {
  auto st = composition_alphas(catalog("strang"));
  REQUIRE(st.size() == 2);
  CHECK(st[0] == half());
  CHECK(st[1] == half());

  auto tt = composition_to_twoterm(st);
  REQUIRE(tt.c.size() == 2);
  REQUIRE(tt.d.size() == 1);
  CHECK(tt.c[0] == half());
  CHECK(tt.c[1] == half());
  CHECK(tt.d[0] == Scalar(1));

  auto back = twoterm_to_composition(tt.c, tt.d);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == half());
  CHECK(back[1] == half());
}

TEST_CASE("triple jump round-trips through the two-term form") {
  auto alphas = composition_alphas(catalog("triple_jump"));
  auto tt = composition_to_twoterm(alphas);
  auto back = twoterm_to_composition(tt.c, tt.d);
  // trailing (0, 0) pairs may be trimmed; compare flattened sequences
  SplittingScheme a, b;
  a.variant = b.variant = SchemeVariant::trotter_composition;
  a.alphas = alphas;
  b.alphas = back;
  auto fa = flatten(a), fb = flatten(b);
  REQUIRE(fa.size() == fb.size());
  for (size_t i = 0; i < fa.size(); ++i) {
    CHECK(fa[i].op == fb[i].op);
    CHECK(fa[i].coeff.value() == doctest::Approx(fb[i].coeff.value()));
  }
}

TEST_CASE("two-term to composition requires matching sums") {
  std::vector<Scalar> c = {half(), half()};
  std::vector<Scalar> d = {half()};
  CHECK_THROWS_AS(twoterm_to_composition(c, d), invalid_scheme_error);
}

TEST_CASE("theta sequence for the Strang splitting") {
  auto seq = flatten_theta(catalog("strang"));
  // C_1 = -(A+B)/2, then a_1 A with a_1 = 1/2, then (b_1/2) B with b_1 = 1
  CHECK(seq_equals(seq, {{0, Scalar::rational(-1, 2)},
                         {1, half()},
                         {2, half()}}));
  CHECK_THROWS_AS(flatten_theta(catalog("lie_trotter")), not_symmetric_error);
}

TEST_CASE("theta sequence splits an even two-term stage count") {
  // palindromic two_term with |d| = 2: central A exponential is halved
  SplittingScheme s;
  s.variant = SchemeVariant::two_term;
  s.c = {Scalar::rational(1, 4), half(), Scalar::rational(1, 4)};
  s.d = {half(), half()};
  auto seq = flatten_theta(s);
  CHECK(seq_equals(seq, {{0, Scalar::rational(-1, 2)},
                         {1, Scalar::rational(1, 4)},
                         {2, half()},
                         {1, Scalar::rational(1, 4)},
                         {2, Scalar(0)}}));
}

TEST_CASE("json round trip for every variant") {
  for (const auto& n : catalog_names()) {
    auto s = catalog(n);
    auto t = scheme_from_json(scheme_to_json(s));
    CHECK(t.variant == s.variant);
    CHECK(t.claimed_order == s.claimed_order);
    CHECK(t.name == s.name);
    auto fs = flatten(s), ft = flatten(t);
    REQUIRE(fs.size() == ft.size());
    for (size_t i = 0; i < fs.size(); ++i)
      CHECK(fs[i].coeff.value() == doctest::Approx(ft[i].coeff.value()));
  }
}

TEST_CASE("json keeps rationals exact") {
  SplittingScheme s;
  s.variant = SchemeVariant::two_term;
  s.c = {Scalar::rational(1, 3), Scalar::rational(2, 3)};
  s.d = {Scalar(1)};
  auto t = scheme_from_json(scheme_to_json(s));
  REQUIRE(t.c.size() == 2);
  CHECK(t.c[0].exact());
  CHECK(t.c[0] == Scalar::rational(1, 3));
}

TEST_CASE("json parsing errors") {
  CHECK_THROWS_AS(scheme_from_json("not json"), invalid_scheme_error);
  CHECK_THROWS_AS(scheme_from_json("{\"variant\":\"strang_composition\"}"),
                  invalid_scheme_error);
  CHECK_THROWS_AS(
      scheme_from_json(
          "{\"variant\":\"bogus\",\"coefficients\":[1],\"order\":1}"),
      invalid_scheme_error);
}

TEST_CASE("scheme files load from disk") {
  const char* path = "test_scheme_tmp.json";
  {
    std::ofstream out(path);
    out << scheme_to_json(catalog("triple_jump"));
  }
  auto s = load_scheme_file(path);
  CHECK(s.claimed_order == 4);
  CHECK(s.gammas.size() == 3);
  std::remove(path);
  CHECK_THROWS_AS(load_scheme_file("does_not_exist.json"),
                  invalid_scheme_error);
}
