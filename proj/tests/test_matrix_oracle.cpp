#include <doctest.h>

#include <cmath>

#include "splitbound/matrix_oracle.hpp"

using namespace splitbound;
using Mat = Eigen::MatrixXcd;

TEST_CASE("random stream is deterministic per seed") {
  Xoshiro256pp a(42), b(42), c(43);
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());
  bool differs = false;
  Xoshiro256pp a2(42);
  for (int i = 0; i < 16; ++i)
    if (a2.next() != c.next()) differs = true;
  CHECK(differs);
  Xoshiro256pp u(7);
  for (int i = 0; i < 100; ++i) {
    double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("random problems are skew-Hermitian with the requested norms") {
  auto prob = random_problem(6, 2, 11, {1.0, 0.5});
  CHECK(prob.dim == 6);
  REQUIRE(prob.ops.size() == 2);
  for (const auto& op : prob.ops)
    CHECK((op + op.adjoint()).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(prob.norms[0] == doctest::Approx(1.0));
  CHECK(prob.norms[1] == doctest::Approx(0.5));
  CHECK(spectral_norm(prob.ops[0]) == doctest::Approx(1.0));
  CHECK(spectral_norm(prob.ops[1]) == doctest::Approx(0.5));
  CHECK(prob.norm_sum() == doctest::Approx(1.5));

  auto again = random_problem(6, 2, 11, {1.0, 0.5});
  CHECK((prob.ops[0] - again.ops[0]).norm() == doctest::Approx(0.0));
}

TEST_CASE("matrix exponential of a skew-Hermitian operator is unitary") {
  auto prob = random_problem(5, 2, 3, {1.0, 1.0});
  Mat U = matexp(prob.ops[0], 0.7);
  Mat I = Mat::Identity(5, 5);
  CHECK((U * U.adjoint() - I).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((matexp(prob.ops[0], 0.0) - I).norm() == doctest::Approx(0.0));
  // series check at small t
  double t = 1e-4;
  Mat S = prob.ops[0];
  Mat approx = I + t * S + 0.5 * t * t * S * S;
  CHECK(spectral_norm(matexp(S, t) - approx) < 1e-11);
}

TEST_CASE("scheme application matches a hand-built Strang product") {
  auto prob = random_problem(4, 2, 5, {1.0, 1.0});
  double h = 0.3;
  Mat manual = matexp(prob.ops[0], h / 2) * matexp(prob.ops[1], h) *
               matexp(prob.ops[0], h / 2);
  Mat applied = apply_scheme(catalog("strang"), prob, h);
  CHECK(spectral_norm(manual - applied) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("commuting operators make every splitting exact") {
  UnitaryProblem prob;
  prob.dim = 4;
  Mat d1 = Mat::Zero(4, 4), d2 = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    d1(i, i) = std::complex<double>(0, 0.1 * (i + 1));
    d2(i, i) = std::complex<double>(0, -0.2 * (i + 1));
  }
  prob.ops = {d1, d2};
  prob.norms = {spectral_norm(d1), spectral_norm(d2)};
  CHECK(local_error(catalog("lie_trotter"), prob, 0.5) < 1e-14);
  CHECK(local_error(catalog("strang"), prob, 0.5) < 1e-14);
}

TEST_CASE("basis elements evaluate to the nested commutators") {
  HallBasis basis;
  auto prob = random_problem(4, 2, 9, {1.0, 1.0});
  const Mat &A = prob.ops[0], &B = prob.ops[1];
  Mat e3 = A * B - B * A;
  CHECK(spectral_norm(eval_basis_element(basis, 3, A, B) - e3) < 1e-13);
  Mat e4 = e3 * B - B * e3;
  CHECK(spectral_norm(eval_basis_element(basis, 4, A, B) - e4) < 1e-13);

  LiePoly poly{{3, Scalar(2)}, {4, Scalar::rational(-1, 2)}};
  Mat expect = 2.0 * e3 - 0.5 * e4;
  CHECK(spectral_norm(eval_lie_poly(poly, basis, A, B) - expect) < 1e-13);
}

TEST_CASE("symbolic commutator expressions evaluate correctly") {
  auto prob = random_problem(4, 3, 2, {1.0, 1.0, 1.0});
  auto expr = CommExpr::comm_of(
      CommExpr::operator_(3),
      CommExpr::sum_of({CommExpr::operator_(1), CommExpr::operator_(2)}));
  Mat s = prob.ops[0] + prob.ops[1];
  Mat expect = prob.ops[2] * s - s * prob.ops[2];
  CHECK(spectral_norm(eval_comm_expr(expr, prob) - expect) < 1e-13);
}

TEST_CASE("bound values scale with the advertised power of h") {
  HallBasis basis;
  auto prob = random_problem(4, 2, 7, {1.0, 1.0});
  auto cb = product_comm_bound(basis, flatten(catalog("strang")), 2,
                               CommMode::aggregated);
  double v1 = comm_bound_value(cb, basis, prob, 0.1);
  double v2 = comm_bound_value(cb, basis, prob, 0.2);
  CHECK(v2 / v1 == doctest::Approx(8.0));  // h^3

  auto mb = lie_trotter_bound_N(2);
  double m = multiop_bound_value(mb, prob, 0.5);
  Mat comm = prob.ops[1] * prob.ops[0] - prob.ops[0] * prob.ops[1];
  CHECK(m == doctest::Approx(0.25 * 0.5 * spectral_norm(comm)));
}

TEST_CASE("h grid is capped by the normalized step") {
  auto grid = h_grid(2.0, 1.0);
  REQUIRE_FALSE(grid.empty());
  for (double h : grid) CHECK(h * 2.0 <= 1.0 + 1e-9);
  for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  // 20 points per decade: consecutive ratio 10^{1/20}
  CHECK(grid[1] / grid[0] == doctest::Approx(std::pow(10.0, 0.05)));
}

TEST_CASE("slope fitting") {
  std::vector<double> h, e3;
  for (double x = 1e-3; x <= 1.0; x *= 2) {
    h.push_back(x);
    e3.push_back(5.0 * x * x * x);
  }
  CHECK(fit_slope(h, e3) == doctest::Approx(3.0).epsilon(1e-6));
  // points under the noise floor are dropped, not fitted
  std::vector<double> noisy = e3;
  noisy[0] = 1e-15;
  CHECK(fit_slope(h, noisy) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK_THROWS(fit_slope({1e-3, 2e-3}, {1e-15, 2e-15}));
}

TEST_CASE("measured local orders match the scheme orders") {
  auto prob = random_problem(4, 2, 1, {1.0, 1.0});
  CHECK(local_order_slope(catalog("lie_trotter"), prob) ==
        doctest::Approx(2.0).epsilon(0.05));
  CHECK(local_order_slope(catalog("strang"), prob) ==
        doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("series expansions have the expected residual order") {
  auto prob = random_problem(4, 2, 4, {1.0, 1.0});
  auto st = catalog("strang");
  CHECK(delta_series_slope(st, prob, 2) >= 2.8);
  CHECK(delta_series_slope(st, prob, 4) >= 4.8);
  HallBasis basis;
  auto seq = flatten(st);
  CHECK(z_series_slope(seq, basis, prob, 1) >= 1.8);
  CHECK(z_series_slope(seq, basis, prob, 2) >= 2.8);
}

TEST_CASE("multi-step error stays within k times the local bound") {
  auto prob = random_problem(4, 2, 6, {1.0, 1.0});
  auto st = catalog("strang");
  auto nb = composition_bound(st, BoundKind::strang_symmetric);
  double h = 0.05;
  double local = nb.evaluate(prob.norm_sum(), h);
  for (int k : {1, 10, 100})
    CHECK(global_error(st, prob, h, k) <=
          global_error_bound(local, k) * (1 + 1e-9));
}

TEST_CASE("verification report dominates and serializes") {
  auto prob = random_problem(4, 2, 1, {1.0, 1.0});
  HallBasis basis;
  auto report = verify_scheme(catalog("strang"), prob, basis);
  CHECK(report.dominated());
  CHECK(report.min_margin() >= 1.0);
  CHECK(report.slope == doctest::Approx(3.0).epsilon(0.05));
  REQUIRE_FALSE(report.rows.empty());
  // commutator and refined bounds should be present alongside norm bounds
  bool has_comm = false, has_refined = false;
  for (const auto& b : report.rows[0].bounds) {
    if (b.name.rfind("comm", 0) == 0) has_comm = true;
    if (b.name.rfind("refined", 0) == 0) has_refined = true;
  }
  CHECK(has_comm);
  CHECK(has_refined);
  auto csv = report.to_csv();
  CHECK(csv.find("h,lambda,true_error,bound_name,bound_value,margin") !=
        std::string::npos);
  auto json = report.to_json();
  CHECK(json.find("\"slope\"") != std::string::npos);
}

TEST_CASE("round-off-level errors do not count against the bounds") {
  ErrorReport rep;
  rep.rows.push_back({1e-3, 1e-3, 1e-15, {{"b", 1e-16}}});
  CHECK(rep.dominated());  // below the measurement floor
  rep.rows.push_back({1e-2, 1e-2, 1e-6, {{"b", 1e-7}}});
  CHECK_FALSE(rep.dominated());
  CHECK(rep.min_margin() == doctest::Approx(0.1));
}
