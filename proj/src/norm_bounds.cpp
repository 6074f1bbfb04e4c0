#include "splitbound/norm_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace splitbound {

namespace {

Scalar abs_sum(const std::vector<Scalar>& v, size_t count) {
  Scalar s(0);
  for (size_t i = 0; i < count && i < v.size(); ++i) s += v[i].abs();
  return s;
}

Scalar abs_sum(const std::vector<Scalar>& v) { return abs_sum(v, v.size()); }

Scalar half_pow(int p) { return Scalar::rational(1, 2).pow(p); }  // 2^{-p}

}  // namespace

double NormBound::evaluate(double norm_sum, double h) const {
  if (norm_sum < 0 || h < 0) throw std::domain_error("negative norm or step");
  return constant.value() * std::pow(norm_sum * h, order_exponent);
}

std::string bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::trotter: return "trotter";
    case BoundKind::strang: return "strang";
    case BoundKind::trotter_symmetric: return "trotter_symmetric";
    case BoundKind::strang_symmetric: return "strang_symmetric";
    case BoundKind::twoterm: return "twoterm";
    case BoundKind::twoterm_symmetric: return "twoterm_symmetric";
  }
  throw std::logic_error("unreachable");
}

BoundKind bound_kind_from_name(const std::string& name) {
  for (BoundKind k :
       {BoundKind::trotter, BoundKind::strang, BoundKind::trotter_symmetric,
        BoundKind::strang_symmetric, BoundKind::twoterm,
        BoundKind::twoterm_symmetric})
    if (bound_kind_name(k) == name) return k;
  throw std::domain_error("unknown bound kind: " + name);
}

double general_splitting_bound(const SplittingScheme& scheme,
                               const std::vector<double>& norms, double h) {
  if (scheme.variant != SchemeVariant::general_splitting)
    throw std::domain_error("scheme is not a general splitting");
  if (int(norms.size()) != scheme.num_operators)
    throw std::domain_error("norm count does not match operator count");
  if (h < 0) throw std::domain_error("negative step");
  double norm_sum = 0, weighted = 0;
  for (int i = 0; i < scheme.num_operators; ++i) {
    if (norms[i] < 0) throw std::domain_error("negative operator norm");
    norm_sum += norms[i];
    double col = 0;
    for (const auto& stage : scheme.stage_coeffs)
      col += std::fabs(stage[i].value());
    weighted += norms[i] * col;
  }
  int p = scheme.claimed_order;
  return std::pow(h, p + 1) / factorial(p + 1).value() *
         (std::pow(norm_sum, p + 1) + std::pow(weighted, p + 1));
}

NormBound composition_bound(const SplittingScheme& scheme, BoundKind kind) {
  const int p = scheme.claimed_order;
  const Scalar fact = factorial(p + 1);
  NormBound b;
  b.order_exponent = p + 1;

  auto require_palindromic = [&] {
    if (!is_palindromic(scheme))
      throw not_symmetric_error("symmetric bound requires a palindromic scheme");
  };

  switch (kind) {
    case BoundKind::trotter: {
      Scalar sa = abs_sum(composition_alphas(scheme));
      b.constant = (Scalar(1) + sa.pow(p + 1)) / fact;
      b.provenance = "composition, generic";
      break;
    }
    case BoundKind::strang: {
      if (scheme.variant != SchemeVariant::strang_composition)
        throw std::domain_error("strang bound kind needs a Strang composition");
      Scalar sg = abs_sum(scheme.gammas);
      b.constant = (Scalar(1) + sg.pow(p + 1)) / fact;
      b.provenance = "Strang composition, generic";
      break;
    }
    case BoundKind::trotter_symmetric: {
      require_palindromic();
      auto alphas = composition_alphas(scheme);
      Scalar half = abs_sum(alphas, alphas.size() / 2);
      b.constant =
          half_pow(p) * (Scalar(1) + Scalar(2) * half).pow(p + 1) / fact;
      b.provenance = "composition, time-symmetric";
      break;
    }
    case BoundKind::strang_symmetric: {
      if (scheme.variant != SchemeVariant::strang_composition)
        throw std::domain_error("strang bound kind needs a Strang composition");
      require_palindromic();
      Scalar sg = abs_sum(scheme.gammas);
      b.constant = half_pow(p) * (Scalar(1) + sg).pow(p + 1) / fact;
      b.provenance = "Strang composition, time-symmetric";
      break;
    }
    case BoundKind::twoterm: {
      Scalar sa = abs_sum(composition_alphas(as_twoterm(scheme)));
      b.constant = (Scalar(1) + sa.pow(p + 1)) / fact;
      b.provenance = "two-term splitting, generic";
      break;
    }
    case BoundKind::twoterm_symmetric: {
      require_palindromic();
      auto alphas = composition_alphas(as_twoterm(scheme));
      Scalar half = abs_sum(alphas, alphas.size() / 2);
      b.constant =
          half_pow(p) * (Scalar(1) + Scalar(2) * half.pow(p + 1)) / fact;
      b.provenance = "two-term splitting, time-symmetric";
      break;
    }
  }
  return b;
}

std::vector<NormBound> applicable_bounds(const SplittingScheme& scheme) {
  std::vector<NormBound> out;
  auto add = [&](BoundKind k) { out.push_back(composition_bound(scheme, k)); };
  bool pal = is_palindromic(scheme);
  switch (scheme.variant) {
    case SchemeVariant::general_splitting:
      break;  // only the raw-form bound applies; handled separately
    case SchemeVariant::strang_composition:
      add(BoundKind::strang);
      add(BoundKind::trotter);
      if (pal) {
        add(BoundKind::strang_symmetric);
        add(BoundKind::trotter_symmetric);
      }
      if (scheme.num_operators == 2) {
        add(BoundKind::twoterm);
        if (pal) add(BoundKind::twoterm_symmetric);
      }
      break;
    case SchemeVariant::trotter_composition:
      add(BoundKind::trotter);
      if (pal) add(BoundKind::trotter_symmetric);
      if (scheme.num_operators == 2) {
        add(BoundKind::twoterm);
        if (pal) add(BoundKind::twoterm_symmetric);
      }
      break;
    case SchemeVariant::two_term:
      add(BoundKind::trotter);
      add(BoundKind::twoterm);
      if (pal) {
        add(BoundKind::trotter_symmetric);
        add(BoundKind::twoterm_symmetric);
      }
      break;
  }
  return out;
}

EffectiveError effective_error(const SplittingScheme& scheme) {
  if (scheme.variant != SchemeVariant::strang_composition)
    throw std::domain_error("effective error is defined for Strang compositions");
  EffectiveError e;
  e.stages = int(scheme.gammas.size());
  int p = scheme.claimed_order;
  double sg = abs_sum(scheme.gammas).value();
  double fact = factorial(p + 1).value();
  e.C = (1.0 + std::pow(sg, p + 1)) / fact;
  e.C_sym = std::pow(2.0, -p) * std::pow(1.0 + sg, p + 1) / fact;
  e.ef_caption = e.stages * std::pow(e.C_sym, 1.0 / p);
  e.ef_table = e.stages * std::pow(std::pow(2.0, -p) * e.C, 1.0 / p);
  return e;
}

double global_error_bound(double local, long long k) {
  if (k < 1) throw std::domain_error("step count must be positive");
  if (local < 0) throw std::domain_error("negative local error");
  return double(k) * local;
}

}  // namespace splitbound
