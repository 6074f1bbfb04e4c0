#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "splitbound/scalar.hpp"

namespace splitbound {

/// Sparse Lie-algebra element: basis index -> coefficient.
using LiePoly = std::map<int, Scalar>;

class extend_basis_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hall basis of the free Lie algebra on A, B. E_1 = A, E_2 = B,
/// E_i = [E_{ell(i)}, E_{r(i)}]. Rows 1..41 (degree <= 7) are fixed
/// data; higher degrees (up to 11) are generated on demand by scanning
/// bracket candidates and keeping the linearly independent ones.
class HallBasis {
 public:
  static constexpr int kMaxDegree = 11;

  explicit HallBasis(int max_degree = 7);

  int size() const { return int(ell_.size()) - 1; }
  int max_degree() const { return built_degree_; }
  int ell(int i) const { return ell_.at(i); }
  int r(int i) const { return r_.at(i); }
  int deg(int i) const { return deg_.at(i); }
  bool in_ideal(int i) const { return in_ideal_.at(i); }

  /// Indices with deg(i) == n (requires n <= max_degree()).
  std::vector<int> degree_indices(int n) const;

  /// Nested-commutator string, e.g. "[[A,B],B]".
  std::string expression(int i) const;

  /// [E_i, E_j] in the basis, exact rational coefficients.
  LiePoly bracket(int i, int j);

  /// [E_g, F] for a degree-homogeneous F; g is 1 (A) or 2 (B).
  LiePoly ad(int g, const LiePoly& f);

  /// Associative-word expansion of E_i: word bitmask -> coefficient
  /// (bit k = letter at position k, 0 = A, 1 = B; length = deg(i)).
  const std::map<uint32_t, long long>& words(int i);

  void extend_to(int max_degree);

  std::string to_csv();

 private:
  void push_row(int l, int rr);
  std::map<uint32_t, Scalar> word_bracket(const std::map<uint32_t, Scalar>& x,
                                          int dx,
                                          const std::map<uint32_t, Scalar>& y,
                                          int dy) const;
  /// Express a degree-n word combination in the basis (exact echelon).
  LiePoly reduce_words(const std::map<uint32_t, Scalar>& expansion, int n);
  void build_echelon(int n);

  std::vector<int> ell_, r_, deg_;
  std::vector<bool> in_ideal_;
  int built_degree_ = 0;
  std::vector<std::map<uint32_t, long long>> words_;  // per element
  // per-degree echelon rows: (word expansion, basis-coordinate combo)
  struct EchelonRow {
    std::map<uint32_t, Scalar> row;
    LiePoly combo;
    uint32_t pivot;
  };
  std::map<int, std::vector<EchelonRow>> echelon_;
  std::map<std::pair<int, int>, LiePoly> bracket_cache_;
};

/// Dimension of the degree-n component of the free Lie algebra on two
/// generators.
int witt_dimension(int n);

}  // namespace splitbound
