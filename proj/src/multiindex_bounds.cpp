#include "splitbound/multiindex_bounds.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace splitbound {

namespace {

bool table_entry_zero(const Scalar& x) {
  if (x.exact()) return x.is_zero();
  return std::fabs(x.value()) <= 1e-12;
}

double inv_factorial_product(const MultiIndex& idx) {
  double f = 1.0;
  for (int i : idx) f *= factorial(i).value();
  return 1.0 / f;
}

bool all_ones(const MultiIndex& idx, size_t count) {
  for (size_t j = 0; j < count; ++j)
    if (idx[j] != 1) return false;
  return true;
}

/// w recursion memoized on (multi-index, prefix length in alphas).
class WCalculator {
 public:
  explicit WCalculator(std::vector<Scalar> alphas)
      : alphas_(std::move(alphas)) {}

  Scalar w(const MultiIndex& idx, int t) {
    auto key = std::make_pair(idx, t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Scalar result(0);
    const int pairs = (t + 1) / 2;  // odd prefixes padded with a trailing 0
    const int m = int(idx.size());
    for (int j = 1; j <= pairs; ++j) {
      Scalar term = at(2 * j, t).pow(idx[m - 1]) -
                    (-at(2 * j - 1, t)).pow(idx[m - 1]);
      if (term.is_zero()) continue;
      if (m > 1) {
        MultiIndex head(idx.begin(), idx.end() - 1);
        term *= w(head, 2 * j - 1);
      }
      result += term;
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  int full_length() const { return int(alphas_.size()); }

 private:
  Scalar at(int k, int t) const {  // 1-based, zero beyond the prefix
    if (k > t || k > int(alphas_.size())) return Scalar(0);
    return alphas_[k - 1];
  }

  std::vector<Scalar> alphas_;
  std::map<std::pair<MultiIndex, int>, Scalar> memo_;
};

void check_weight(int n_max) {
  if (n_max < 1 || n_max > kMaxWeight)
    throw std::domain_error("weight must be between 1 and " +
                            std::to_string(kMaxWeight));
}

}  // namespace

std::vector<MultiIndex> multi_indices(int n) {
  std::vector<MultiIndex> out;
  MultiIndex cur;
  // lexicographic enumeration of the 2^{n-1} compositions of n
  auto rec = [&](auto&& self, int rest) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int i = 1; i <= rest; ++i) {
      cur.push_back(i);
      self(self, rest - i);
      cur.pop_back();
    }
  };
  rec(rec, n);
  return out;
}

Scalar CoeffTable::at(const MultiIndex& idx) const {
  auto it = entries.find(idx);
  return it == entries.end() ? Scalar(0) : it->second;
}

CoeffTable epsilon_table(int n_max) {
  check_weight(n_max);
  CoeffTable t;
  t.kind = CoeffKind::epsilon;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& idx : multi_indices(n))
      if (all_ones(idx, idx.size()))
        t.entries[idx] = factorial(int(idx.size())).inverse();
  return t;
}

CoeffTable w_table(const std::vector<Scalar>& alphas, int n_max) {
  check_weight(n_max);
  WCalculator calc(alphas);
  CoeffTable t;
  t.kind = CoeffKind::w;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& idx : multi_indices(n))
      t.entries[idx] = calc.w(idx, calc.full_length());
  return t;
}

CoeffTable delta_table(const std::vector<Scalar>& alphas, int n_max) {
  CoeffTable t = w_table(alphas, n_max);
  t.kind = CoeffKind::delta;
  for (auto& [idx, val] : t.entries)
    if (all_ones(idx, idx.size()))
      val -= factorial(int(idx.size())).inverse();
  return t;
}

CoeffTable strang_delta_table(const std::vector<Scalar>& gammas, int n_max) {
  SplittingScheme s;
  s.variant = SchemeVariant::strang_composition;
  s.gammas = gammas;
  return delta_table(composition_alphas(s), n_max);
}

int order_of(const CoeffTable& delta, int n_max) {
  int p = 0;
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& idx : multi_indices(n))
      if (!table_entry_zero(delta.at(idx))) return p;
    p = n;
  }
  return p;
}

int order_of(const SplittingScheme& scheme, int n_max) {
  return order_of(delta_table(composition_alphas(scheme), n_max), n_max);
}

double d_n(const CoeffTable& delta, int n) {
  double sum = 0, comp = 0;  // Kahan
  for (const auto& idx : multi_indices(n)) {
    double term =
        std::fabs(delta.at(idx).value()) * inv_factorial_product(idx);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::vector<Scalar> phi_half(const SplittingScheme& scheme) {
  if (!is_palindromic(scheme))
    throw not_symmetric_error(
        "half-sequence factorization requires a palindromic scheme");
  auto alphas = composition_alphas(scheme);
  return std::vector<Scalar>(alphas.begin(),
                             alphas.begin() + alphas.size() / 2);
}

CoeffTable v_table(const std::vector<Scalar>& half, int n_max) {
  check_weight(n_max);
  WCalculator calc(half);
  const int t = calc.full_length();
  CoeffTable out;
  out.kind = CoeffKind::v;
  Scalar mhalf = Scalar::rational(-1, 2);
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& idx : multi_indices(n)) {
      const int m = int(idx.size());
      Scalar v = calc.w(idx, t);
      if (all_ones(idx, m)) v += mhalf.pow(n) * factorial(m).inverse();
      // epsilon vanishes unless the prefix is all ones, so the split-index
      // sum collapses to (-1/2)^j / j! times w of the suffix
      for (int j = 1; j < m && idx[j - 1] == 1; ++j) {
        if (!all_ones(idx, j)) break;
        MultiIndex suffix(idx.begin() + j, idx.end());
        v += mhalf.pow(j) * factorial(j).inverse() * calc.w(suffix, t);
      }
      out.entries[idx] = v;
    }
  }
  return out;
}

double d_n_sym(const CoeffTable& v, int n) {
  if (n % 2 == 0) return 0.0;
  double sum = 0, comp = 0;
  for (const auto& idx : multi_indices(n)) {
    double term = std::fabs(v.at(idx).value()) * inv_factorial_product(idx);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return 2.0 * sum;
}

double BoundPolynomial::evaluate(double lambda) const {
  double val = 0;
  for (const auto& [n, dn] : d) val += dn * std::pow(lambda, n);
  return val + tail * std::pow(lambda, q + 1);
}

std::string BoundPolynomial::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["q"] = q;
  nlohmann::json dd = nlohmann::json::object();
  for (const auto& [n, dn] : d) dd[std::to_string(n)] = dn;
  j["d"] = dd;
  j["tail"] = tail;
  j["symmetric"] = symmetric;
  return j.dump(2);
}

BoundPolynomial refined_bound(const SplittingScheme& scheme, int q) {
  if (scheme.variant != SchemeVariant::trotter_composition &&
      scheme.variant != SchemeVariant::strang_composition)
    throw std::domain_error(
        "refined bound requires a composition-form scheme");
  check_weight(q);
  auto alphas = composition_alphas(scheme);
  CoeffTable delta = delta_table(alphas, q);
  BoundPolynomial b;
  b.p = order_of(delta, q);
  b.q = q;
  if (q < b.p) throw std::domain_error("truncation depth below scheme order");

  bool strang = scheme.variant == SchemeVariant::strang_composition;
  double coeff_sum = 0;  // sum |gamma| or sum |alpha| depending on variant
  if (strang)
    for (const auto& g : scheme.gammas) coeff_sum += std::fabs(g.value());
  else
    for (const auto& a : scheme.alphas) coeff_sum += std::fabs(a.value());

  double fact = factorial(q + 1).value();
  if (is_palindromic(scheme)) {
    b.symmetric = true;
    CoeffTable v = v_table(phi_half(scheme), q);
    for (int n = b.p + 1; n <= q; ++n) {
      if (n % 2 == 0) continue;
      double dn = d_n_sym(v, n);
      if (dn != 0) b.d[n] = dn;
    }
    double half_sum = strang ? coeff_sum : [&] {
      double s = 0;
      for (size_t i = 0; i < alphas.size() / 2; ++i)
        s += std::fabs(alphas[i].value());
      return 2 * s;
    }();
    b.tail = std::pow(1.0 + half_sum, q + 1) / (fact * std::pow(2.0, q));
  } else {
    for (int n = b.p + 1; n <= q; ++n) {
      double dn = d_n(delta, n);
      if (dn != 0) b.d[n] = dn;
    }
    if (strang)
      b.tail = (1.0 + std::pow(coeff_sum, q + 1)) / fact;
    else
      b.tail = (1.0 + 2.0 * std::pow(coeff_sum, q + 1)) / fact;
  }
  return b;
}

}  // namespace splitbound
