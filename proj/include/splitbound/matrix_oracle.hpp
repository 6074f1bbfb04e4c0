#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splitbound/lie_engine.hpp"
#include "splitbound/multiindex_bounds.hpp"
#include "splitbound/norm_bounds.hpp"
#include "splitbound/scheme.hpp"

namespace splitbound {

/// xoshiro256++ seeded through splitmix64; fixed constants so seeds
/// reproduce across implementations.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(uint64_t seed);
  uint64_t next();
  double uniform();         // [0, 1)
  double gaussian();        // Box-Muller, deterministic call pairing

 private:
  uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0;
};

struct UnitaryProblem {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> ops;  // skew-Hermitian A_1..A_N
  std::vector<double> norms;          // spectral norms a_j
  uint64_t seed = 0;

  double norm_sum() const;
};

UnitaryProblem random_problem(int d, int N, uint64_t seed,
                              const std::vector<double>& norm_targets);

double spectral_norm(const Eigen::MatrixXcd& m);

/// e^{tS} for skew-Hermitian S, via eigendecomposition of iS.
Eigen::MatrixXcd matexp(const Eigen::MatrixXcd& S, double t);

Eigen::MatrixXcd exact_evolution(const UnitaryProblem& prob, double h);
Eigen::MatrixXcd apply_scheme(const SplittingScheme& scheme,
                              const UnitaryProblem& prob, double h);

double local_error(const SplittingScheme& scheme, const UnitaryProblem& prob,
                   double h);
double global_error(const SplittingScheme& scheme, const UnitaryProblem& prob,
                    double h, int k);

/// Nested-commutator matrix of a Hall-basis element / Lie polynomial,
/// with E_1 = A, E_2 = B.
Eigen::MatrixXcd eval_basis_element(const HallBasis& basis, int i,
                                    const Eigen::MatrixXcd& A,
                                    const Eigen::MatrixXcd& B);
Eigen::MatrixXcd eval_lie_poly(const LiePoly& poly, const HallBasis& basis,
                               const Eigen::MatrixXcd& A,
                               const Eigen::MatrixXcd& B);
Eigen::MatrixXcd eval_comm_expr(const CommExpr& expr,
                                const UnitaryProblem& prob);

/// Numeric value of a two-operator commutator bound at step h.
double comm_bound_value(const CommutatorBound& bound, const HallBasis& basis,
                        const UnitaryProblem& prob, double h);
/// Numeric value of a closed-form multi-operator bound at step h.
double multiop_bound_value(const MultiOpBound& bound,
                           const UnitaryProblem& prob, double h);

/// 20 log-spaced points per decade over [1e-3, 1], truncated to
/// h * norm_sum <= lambda_cap.
std::vector<double> h_grid(double norm_sum, double lambda_cap = 1.0);

/// Least-squares slope of log(err) vs log(h), dropping points below the
/// noise floor.
double fit_slope(const std::vector<double>& h, const std::vector<double>& err,
                 double floor = 1e-12);

/// Fitted order of the one-step error over the h grid.
double local_order_slope(const SplittingScheme& scheme,
                         const UnitaryProblem& prob);

/// Slope of || Psi(h) - e^{hA} - sum_{n<=q} h^n sum_I delta_I X_I ||.
double delta_series_slope(const SplittingScheme& scheme,
                          const UnitaryProblem& prob, int q);

/// Slope of || M(t) - sum_{n=0}^{q} t^n Z_{r,n} || for a two-operator
/// exponent sequence; M(t) is evaluated exactly from its product form.
double z_series_slope(const ExponentSequence& seq, HallBasis& basis,
                      const UnitaryProblem& prob, int q);

struct BoundEntry {
  std::string name;
  double value = 0;
};

struct ErrorRow {
  double h = 0;
  double lambda = 0;
  double true_error = 0;
  std::vector<BoundEntry> bounds;
};

struct ErrorReport {
  std::string scheme;
  uint64_t seed = 0;
  int dim = 0;
  std::vector<ErrorRow> rows;
  double slope = 0;

  /// Smallest bound/error ratio across rows and bounds (inf if empty).
  double min_margin() const;
  bool dominated(double slack = 1e-9) const;
  std::string to_csv() const;
  std::string to_json() const;
};

struct VerifyOptions {
  std::vector<int> refined_depths{1, 3};  // q offsets from the order p
  bool commutator_bounds = true;
  double lambda_cap = 1.0;
};

/// Evaluate the true local error and every applicable bound over the h
/// grid for one seeded problem.
ErrorReport verify_scheme(const SplittingScheme& scheme,
                          const UnitaryProblem& prob, HallBasis& basis,
                          const VerifyOptions& opts = {});

}  // namespace splitbound
