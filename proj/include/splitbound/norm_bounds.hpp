#pragma once

#include <string>
#include <vector>

#include "splitbound/scheme.hpp"

namespace splitbound {

/// Closed-form operator-norm bound with a factorable constant:
/// error <= constant * (a_1 + ... + a_N)^{p+1} h^{p+1}.
struct NormBound {
  int order_exponent = 0;  // p + 1
  Scalar constant;
  std::string provenance;

  double evaluate(double norm_sum, double h) const;
};

enum class BoundKind {
  trotter,            // generic chi/chi* composition
  strang,             // generic Strang composition
  trotter_symmetric,  // palindromic chi/chi* composition
  strang_symmetric,   // palindromic Strang composition
  twoterm,            // two-term splitting, generic form
  twoterm_symmetric   // two-term splitting, time-symmetric form
};

std::string bound_kind_name(BoundKind k);
BoundKind bound_kind_from_name(const std::string& name);

/// Non-factorable general-splitting estimate
/// (h^{p+1}/(p+1)!)[(Sum a_i)^{p+1} + (Sum_i a_i Sum_j |alpha_i^(j)|)^{p+1}].
double general_splitting_bound(const SplittingScheme& scheme,
                               const std::vector<double>& norms, double h);

NormBound composition_bound(const SplittingScheme& scheme, BoundKind kind);

/// All bound kinds applicable to the scheme (generic always; symmetric
/// variants only when palindromic; two-term forms when N = 2 and a
/// two-term representation exists).
std::vector<NormBound> applicable_bounds(const SplittingScheme& scheme);

struct EffectiveError {
  int stages = 0;
  double C = 0;         // generic composition constant
  double C_sym = 0;     // symmetric composition constant
  double ef_caption = 0;  // s * C_sym^{1/p}
  double ef_table = 0;    // s * (2^{-p} C)^{1/p}
};

EffectiveError effective_error(const SplittingScheme& scheme);

double global_error_bound(double local, long long k);

}  // namespace splitbound
