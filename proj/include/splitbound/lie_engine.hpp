#pragma once

#include <map>
#include <string>
#include <vector>

#include "splitbound/hall_basis.hpp"
#include "splitbound/scheme.hpp"

namespace splitbound {

/// Polynomial in sigma with Scalar coefficients, coeffs[k] ~ sigma^k.
struct SigmaPoly {
  std::vector<Scalar> coeffs;

  bool is_zero() const;
  int degree() const;
  void add_scaled(const Scalar& c, const SigmaPoly& other);
  SigmaPoly scaled(const Scalar& c) const;
  SigmaPoly derivative() const;
  SigmaPoly antiderivative() const;
  Scalar eval(const Scalar& x) const;
  double eval(double x) const;
  std::string str() const;
};

/// Exact value of the integral of |p(sigma)| over [0,1]: exact rational
/// when the polynomial is rational with rational sign changes in (0,1),
/// a real within 1e-12 otherwise.
Scalar integrate_abs(const SigmaPoly& p);

/// Sparse Lie element with sigma-polynomial coefficients.
using LieSigmaPoly = std::map<int, SigmaPoly>;

/// Z_{k,n} tables: z[k][n], k = 1..r (index 0 unused), n = 0..n_max.
using ZTable = std::vector<std::vector<LiePoly>>;

/// ad_{coeff * gen(op)} f, where op 0 is the pseudo-operator A + B.
LiePoly ad_step(HallBasis& basis, const ExponentStep& step, const LiePoly& f);

/// Z-recursion over the exponent sequence: Z_{k,0} = C_1 + ... + C_k,
/// Z_{k,n} = sum_j ad^j_{C_k} Z_{k-1,n-j} / j!.
ZTable z_coefficients(HallBasis& basis, const ExponentSequence& seq,
                      int n_max);

/// Remainder densities: for each k = 2..r, the degree-(q+1) element
/// I_{k,q}(sigma) = sum_{n=1}^{q} sigma^{n-1}/(n-1)! ad_{C_k}^n Z_{k-1,q-n}.
/// Index 0 of the result corresponds to k = 2.
std::vector<LieSigmaPoly> omega_polys(HallBasis& basis,
                                      const ExponentSequence& seq, int q,
                                      const ZTable& z);

enum class CommMode { aggregated, triangle };

struct CommutatorBound {
  int order_exponent = 0;           // error ~ h^{order_exponent}
  std::map<int, Scalar> terms;      // basis index -> coefficient
  std::map<int, LiePoly> series;    // n -> Z_{r,n}/(n+1), h^{n+1} terms
  bool filtered = false;

  /// Drop terms whose basis element lies in the ideal generated by
  /// [[[A,B],B],B] (valid when that commutator vanishes).
  CommutatorBound filter_ideal(const HallBasis& basis) const;
  std::string to_json(const HallBasis& basis) const;
};

/// Error bound for e^{hC_r}...e^{hC_1} vs e^{h sum C_k}:
/// sum_{n=1}^{q-1} h^{n+1}/(n+1) ||Z_{r,n}|| + h^{q+1} sum_i c_i ||E_i||.
CommutatorBound product_comm_bound(HallBasis& basis,
                                   const ExponentSequence& seq, int q,
                                   CommMode mode);

/// Theta-route bound for a palindromic two-operator scheme of even
/// order 2p: c_i = (2/(2p+1)) sum_k integral |omega_{k,i}|.
CommutatorBound symmetric_twoterm_bound(HallBasis& basis,
                                        const SplittingScheme& scheme);

/// Symbolic nested-commutator expression over operators A_1..A_N.
struct CommExpr {
  enum class Kind { op, sum, comm };
  Kind kind = Kind::op;
  int index = 0;  // operator index for Kind::op
  std::vector<CommExpr> children;

  static CommExpr operator_(int i);
  static CommExpr sum_of(std::vector<CommExpr> parts);
  static CommExpr comm_of(CommExpr a, CommExpr b);
  std::string str() const;
};

struct MultiOpTerm {
  Scalar coeff;
  CommExpr expr;
};

/// Bound of the form h^{order_exponent} sum coeff_t ||expr_t||.
struct MultiOpBound {
  int order_exponent = 0;
  std::vector<MultiOpTerm> terms;
};

/// (h^2/2) sum_{k=2}^N || sum_{j<k} [A_k, A_j] ||.
MultiOpBound lie_trotter_bound_N(int N);

/// (h^3/12) sum_{k=2}^{N+1} ( ||[A_{k-1}, sum_j [A_j, A_{j+1}+...+A_N]]||
///   + (1/2) ||[A_{k-1}, [A_{k-1}, A_k+...+A_N]]|| ).
MultiOpBound strang_bound_N(int N);

}  // namespace splitbound
