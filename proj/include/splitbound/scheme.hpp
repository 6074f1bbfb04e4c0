#pragma once

#include <string>
#include <vector>

#include "splitbound/scalar.hpp"

namespace splitbound {

enum class SchemeVariant {
  general_splitting,   // stage matrix alpha_i^{(j)}
  trotter_composition, // chi / chi* composition, coefficients alpha_1..alpha_2s
  strang_composition,  // S_2 composition, coefficients gamma_1..gamma_s
  two_term             // e^{c A} e^{d B} splitting, two operators
};

std::string variant_name(SchemeVariant v);
SchemeVariant variant_from_name(const std::string& name);

struct SplittingScheme {
  SchemeVariant variant = SchemeVariant::strang_composition;
  int num_operators = 2;  // N
  int claimed_order = 1;  // p
  std::string name;

  // general_splitting: stage_coeffs[j][i] = alpha_i^{(j)}, j = 0..s-1, i = 0..N-1
  std::vector<std::vector<Scalar>> stage_coeffs;
  // trotter_composition
  std::vector<Scalar> alphas;
  // strang_composition
  std::vector<Scalar> gammas;
  // two_term: c has s+1 entries, d has s
  std::vector<Scalar> c, d;

  int stages() const;
};

struct ExponentStep {
  int op;        // 1..N; 0 encodes the pseudo-operator A_1 + ... + A_N
  Scalar coeff;
};
using ExponentSequence = std::vector<ExponentStep>;

struct ConsistencyReport {
  bool ok = true;
  std::vector<std::string> violations;
};

class invalid_scheme_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class not_symmetric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ConsistencyReport check_consistency(const SplittingScheme& s);
bool is_palindromic(const SplittingScheme& s);

/// Exponent list in application order: index 0 of the result is the
/// rightmost (first-applied) factor. Adjacent factors with the same
/// operator are merged; zero-coefficient factors are dropped.
ExponentSequence flatten(const SplittingScheme& s);

/// Symmetric two-operator sequence C_1 = -(A+B)/2, C_2 = a_1 A, ...,
/// C_{2s+1} = (b_s/2) B used by the commutator-bound engine. Requires a
/// palindromic two_term scheme.
ExponentSequence flatten_theta(const SplittingScheme& s);

/// chi/chi* composition coefficients -> two-term splitting
/// (c_1 = alpha_1, c_{j+1} = alpha_{2j} + alpha_{2j+1}, d_j = alpha_{2j-1} + alpha_{2j}).
SplittingScheme composition_to_twoterm(const std::vector<Scalar>& alphas);
/// Inverse direction; requires sum(c) == sum(d).
std::vector<Scalar> twoterm_to_composition(const std::vector<Scalar>& c,
                                           const std::vector<Scalar>& d);

/// Composition coefficients alpha_1..alpha_2s of the scheme viewed as a
/// chi/chi* composition (Strang gammas are halved and doubled; two_term
/// goes through twoterm_to_composition).
std::vector<Scalar> composition_alphas(const SplittingScheme& s);

/// Two-operator view of a composition scheme (requires N == 2 for
/// trotter/strang variants).
SplittingScheme as_twoterm(const SplittingScheme& s);

SplittingScheme catalog(const std::string& name);
std::vector<std::string> catalog_names();

std::string scheme_to_json(const SplittingScheme& s);
SplittingScheme scheme_from_json(const std::string& text);
SplittingScheme load_scheme_file(const std::string& path);

}  // namespace splitbound
