#pragma once

#include <map>
#include <string>
#include <vector>

#include "splitbound/scheme.hpp"

namespace splitbound {

/// Composition of a positive integer: ordered multi-index (i_1,...,i_m).
using MultiIndex = std::vector<int>;

/// All multi-indices of weight n, lexicographic (2^{n-1} of them).
std::vector<MultiIndex> multi_indices(int n);

enum class CoeffKind { w, epsilon, delta, v };

struct CoeffTable {
  CoeffKind kind = CoeffKind::w;
  std::map<MultiIndex, Scalar> entries;

  Scalar at(const MultiIndex& idx) const;  // 0 if absent
};

/// Practical cap on the truncation depth (cost doubles per weight).
inline constexpr int kMaxWeight = 14;

/// 1/m! on all-ones indices, 0 elsewhere.
CoeffTable epsilon_table(int n_max);

/// Series coefficients w_{i_1..i_m}(alpha_1..alpha_{2s}) for all weights
/// <= n_max, via the prefix recursion (odd prefixes padded with a zero).
CoeffTable w_table(const std::vector<Scalar>& alphas, int n_max);

CoeffTable delta_table(const std::vector<Scalar>& alphas, int n_max);

/// Strang-composition tables: gammas halved and doubled first.
CoeffTable strang_delta_table(const std::vector<Scalar>& gammas, int n_max);

/// Largest p <= n_max with all weight-<=p deltas zero (exact on
/// rationals, |.| <= 1e-12 on reals). 0 if even weight 1 fails.
int order_of(const CoeffTable& delta, int n_max);
int order_of(const SplittingScheme& scheme, int n_max);

/// Sum over weight-n indices of |delta_I| / prod(i_k!), compensated.
double d_n(const CoeffTable& delta, int n);

/// Half-sequence coefficients of the palindromic factorization: first s
/// entries of the 2s-entry composition alpha list.
std::vector<Scalar> phi_half(const SplittingScheme& scheme);

/// v-coefficients on the half sequence, weights <= n_max.
CoeffTable v_table(const std::vector<Scalar>& half, int n_max);

/// 2 * sum |v_I| / prod(i_k!) for odd n, 0 for even n.
double d_n_sym(const CoeffTable& v, int n);

struct BoundPolynomial {
  int p = 0;
  int q = 0;
  std::map<int, double> d;  // n -> d_n, n = p+1..q
  double tail = 0;          // coefficient of lambda^{q+1}
  bool symmetric = false;

  double evaluate(double lambda) const;
  std::string to_json() const;
};

/// Refined polynomial-in-lambda local error bound; symmetric route when
/// the scheme is palindromic, generic otherwise.
BoundPolynomial refined_bound(const SplittingScheme& scheme, int q);

}  // namespace splitbound
