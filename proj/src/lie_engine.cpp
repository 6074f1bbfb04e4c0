#include "splitbound/lie_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "splitbound/multiindex_bounds.hpp"

namespace splitbound {

namespace {

void lie_add_scaled(LiePoly& dst, const Scalar& c, const LiePoly& src) {
  for (const auto& [i, v] : src) {
    Scalar nv = dst.count(i) ? dst[i] + c * v : c * v;
    if (nv.is_zero())
      dst.erase(i);
    else
      dst[i] = nv;
  }
}

}  // namespace

// ---------------------------------------------------------------- SigmaPoly

bool SigmaPoly::is_zero() const {
  for (const auto& c : coeffs)
    if (!c.is_zero()) return false;
  return true;
}

int SigmaPoly::degree() const {
  for (int k = int(coeffs.size()) - 1; k >= 0; --k)
    if (!coeffs[k].is_zero()) return k;
  return -1;
}

void SigmaPoly::add_scaled(const Scalar& c, const SigmaPoly& other) {
  if (other.coeffs.size() > coeffs.size()) coeffs.resize(other.coeffs.size());
  for (size_t k = 0; k < other.coeffs.size(); ++k)
    coeffs[k] += c * other.coeffs[k];
}

SigmaPoly SigmaPoly::scaled(const Scalar& c) const {
  SigmaPoly out = *this;
  for (auto& x : out.coeffs) x *= c;
  return out;
}

SigmaPoly SigmaPoly::derivative() const {
  SigmaPoly out;
  for (size_t k = 1; k < coeffs.size(); ++k)
    out.coeffs.push_back(Scalar(int(k)) * coeffs[k]);
  return out;
}

SigmaPoly SigmaPoly::antiderivative() const {
  SigmaPoly out;
  out.coeffs.push_back(Scalar(0));
  for (size_t k = 0; k < coeffs.size(); ++k)
    out.coeffs.push_back(coeffs[k] / Scalar(int(k) + 1));
  return out;
}

Scalar SigmaPoly::eval(const Scalar& x) const {
  Scalar acc(0);
  for (int k = int(coeffs.size()) - 1; k >= 0; --k) acc = acc * x + coeffs[k];
  return acc;
}

double SigmaPoly::eval(double x) const {
  double acc = 0;
  for (int k = int(coeffs.size()) - 1; k >= 0; --k)
    acc = acc * x + coeffs[k].value();
  return acc;
}

std::string SigmaPoly::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << coeffs[k].str() << ")";
    if (k == 1) os << "*s";
    if (k > 1) os << "*s^" << k;
    first = false;
  }
  return first ? "0" : os.str();
}

// ----------------------------------------------------------- integrate_abs

namespace {

std::vector<double> poly_doubles(const SigmaPoly& p) {
  std::vector<double> c;
  for (const auto& x : p.coeffs) c.push_back(x.value());
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

double eval_doubles(const std::vector<double>& c, double x) {
  double acc = 0;
  for (int k = int(c.size()) - 1; k >= 0; --k) acc = acc * x + c[k];
  return acc;
}

double coeff_scale(const std::vector<double>& c) {
  double s = 0;
  for (double x : c) s = std::max(s, std::fabs(x));
  return s > 0 ? s : 1.0;
}

/// Roots of p in (0,1), via monotone-interval bisection on the critical
/// points of p.
void roots01(const std::vector<double>& c, std::vector<double>& out) {
  if (c.size() <= 1) return;
  if (c.size() == 2) {
    double x = -c[0] / c[1];
    if (x > 1e-15 && x < 1.0 - 1e-15) out.push_back(x);
    return;
  }
  std::vector<double> dc;
  for (size_t k = 1; k < c.size(); ++k) dc.push_back(double(k) * c[k]);
  std::vector<double> crit;
  roots01(dc, crit);
  std::vector<double> pts = {0.0};
  pts.insert(pts.end(), crit.begin(), crit.end());
  pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  double scale = coeff_scale(c);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    double fa = eval_doubles(c, a), fb = eval_doubles(c, b);
    if (std::fabs(fa) <= 1e-14 * scale) {
      if (a > 1e-15 && a < 1.0 - 1e-15) out.push_back(a);
      continue;  // sign change, if any, belongs to the open interval
    }
    if (fa * fb >= 0) continue;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      double fm = eval_doubles(c, m);
      if (fm == 0) {
        a = b = m;
        break;
      }
      if ((fa < 0) == (fm < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    double x = 0.5 * (a + b);
    if (x > 1e-15 && x < 1.0 - 1e-15) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
            out.end());
}

/// Rational roots of an exact polynomial in (0,1), via the rational root
/// theorem on the primitive integer form. Returns false when the
/// coefficients are too large to factor cheaply.
bool rational_roots01(const SigmaPoly& p, std::vector<Scalar>& out) {
  std::vector<Scalar> c = p.coeffs;
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  size_t low = 0;  // factor out sigma^low (vanishes only at 0)
  while (low < c.size() && c[low].is_zero()) ++low;
  c.erase(c.begin(), c.begin() + low);
  if (c.size() <= 1) return true;
  long long lcm = 1;
  for (const auto& x : c) {
    long long d = x.den();
    __int128 l = __int128(lcm) / std::gcd(lcm, d) * d;
    if (l > (__int128)4000000000000LL) return false;
    lcm = (long long)l;
  }
  std::vector<long long> ic;
  long long g = 0;
  for (const auto& x : c) {
    long long v = x.num() * (lcm / x.den());
    ic.push_back(v);
    g = std::gcd(g, v < 0 ? -v : v);
  }
  if (g > 1)
    for (auto& v : ic) v /= g;
  long long a0 = std::llabs(ic.front()), an = std::llabs(ic.back());
  if (a0 > 4000000000000LL || an > 4000000000000LL) return false;
  auto divisors = [](long long v) {
    std::vector<long long> d;
    for (long long k = 1; k * k <= v; ++k) {
      if (v % k) continue;
      d.push_back(k);
      if (k != v / k) d.push_back(v / k);
    }
    return d;
  };
  auto dnum = divisors(a0), dden = divisors(an);
  for (long long pn : dnum)
    for (long long qd : dden) {
      if (pn >= qd) continue;  // only candidates strictly inside (0,1)
      Scalar x = Scalar::rational(pn, qd);
      SigmaPoly probe;
      probe.coeffs = c;
      if (probe.eval(x).is_zero()) out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return true;
}

}  // namespace

Scalar integrate_abs(const SigmaPoly& p) {
  if (p.is_zero()) return Scalar(0);
  if (p.coeffs.size() > 33)
    throw std::domain_error("sigma polynomial degree above 32");
  auto cd = poly_doubles(p);
  std::vector<double> roots;
  roots01(cd, roots);

  bool exact = true;
  for (const auto& x : p.coeffs) exact = exact && x.exact();
  if (exact) {
    std::vector<Scalar> rat;
    if (rational_roots01(p, rat)) {
      bool matched = true;
      for (double x : roots) {
        bool hit = false;
        for (const auto& rx : rat) hit = hit || std::fabs(rx.value() - x) < 1e-9;
        matched = matched && hit;
      }
      if (matched) {
        SigmaPoly F = p.antiderivative();
        std::vector<Scalar> pts = {Scalar(0)};
        pts.insert(pts.end(), rat.begin(), rat.end());
        pts.push_back(Scalar(1));
        Scalar total(0);
        for (size_t i = 0; i + 1 < pts.size(); ++i)
          total += (F.eval(pts[i + 1]) - F.eval(pts[i])).abs();
        return total;
      }
    }
  }
  // real path: panels between sign changes, guarded against edge roots
  SigmaPoly F = p.antiderivative();
  std::vector<double> pts = {0.0};
  for (double x : roots)
    pts.push_back(std::min(1.0 - 1e-15, std::max(1e-15, x)));
  pts.push_back(1.0);
  double total = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    total += std::fabs(F.eval(pts[i + 1]) - F.eval(pts[i]));
  return Scalar::real(total);
}

// ------------------------------------------------------------- Z recursion

LiePoly ad_step(HallBasis& basis, const ExponentStep& step, const LiePoly& f) {
  LiePoly out;
  if (step.op == 0) {
    lie_add_scaled(out, step.coeff, basis.ad(1, f));
    lie_add_scaled(out, step.coeff, basis.ad(2, f));
  } else if (step.op == 1 || step.op == 2) {
    lie_add_scaled(out, step.coeff, basis.ad(step.op, f));
  } else {
    throw std::domain_error("exponent sequence must use operators A, B");
  }
  return out;
}

namespace {

LiePoly step_poly(const ExponentStep& step) {
  LiePoly out;
  if (step.coeff.is_zero()) return out;
  if (step.op == 0) {
    out[1] = step.coeff;
    out[2] = step.coeff;
  } else if (step.op == 1 || step.op == 2) {
    out[step.op] = step.coeff;
  } else {
    throw std::domain_error("exponent sequence must use operators A, B");
  }
  return out;
}

}  // namespace

ZTable z_coefficients(HallBasis& basis, const ExponentSequence& seq,
                      int n_max) {
  if (seq.empty()) throw std::domain_error("empty exponent sequence");
  if (n_max < 0) throw std::domain_error("negative expansion depth");
  basis.extend_to(std::min(HallBasis::kMaxDegree, n_max + 1));
  const int r = int(seq.size());
  ZTable z(r + 1, std::vector<LiePoly>(n_max + 1));
  z[1][0] = step_poly(seq[0]);
  for (int k = 2; k <= r; ++k) {
    z[k][0] = z[k - 1][0];
    lie_add_scaled(z[k][0], Scalar(1), step_poly(seq[k - 1]));
    for (int n = 1; n <= n_max; ++n) {
      LiePoly acc = z[k - 1][n];  // j = 0 term
      for (int j = 1; j <= n; ++j) {
        LiePoly adj = ad_step(basis, seq[k - 1], z[k - 1][n - j]);
        for (int extra = 1; extra < j; ++extra)
          adj = ad_step(basis, seq[k - 1], adj);
        lie_add_scaled(acc, factorial(j).inverse(), adj);
      }
      z[k][n] = std::move(acc);
    }
  }
  return z;
}

std::vector<LieSigmaPoly> omega_polys(HallBasis& basis,
                                      const ExponentSequence& seq, int q,
                                      const ZTable& z) {
  if (q < 1) throw std::domain_error("expansion depth must be >= 1");
  const int r = int(seq.size());
  std::vector<LieSigmaPoly> out;
  for (int k = 2; k <= r; ++k) {
    LieSigmaPoly lsp;
    for (int n = 1; n <= q; ++n) {
      LiePoly term = z[k - 1][q - n];
      for (int j = 0; j < n; ++j) term = ad_step(basis, seq[k - 1], term);
      Scalar fac = factorial(n - 1).inverse();
      for (const auto& [i, c] : term) {
        SigmaPoly& sp = lsp[i];
        if (int(sp.coeffs.size()) < n) sp.coeffs.resize(n);
        sp.coeffs[n - 1] += fac * c;
      }
    }
    std::erase_if(lsp, [](const auto& kv) { return kv.second.is_zero(); });
    out.push_back(std::move(lsp));
  }
  return out;
}

// -------------------------------------------------------- CommutatorBound

CommutatorBound CommutatorBound::filter_ideal(const HallBasis& basis) const {
  CommutatorBound out = *this;
  std::erase_if(out.terms, [&](const auto& kv) {
    return basis.in_ideal(kv.first);
  });
  out.filtered = true;
  return out;
}

std::string CommutatorBound::to_json(const HallBasis& basis) const {
  nlohmann::json j;
  j["order"] = order_exponent;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [i, c] : terms) {
    nlohmann::json t;
    t["basis_index"] = i;
    t["expression"] = basis.expression(i);
    t["coefficient"] = c.value();
    if (c.exact()) t["exact"] = c.str();
    t["in_ideal"] = basis.in_ideal(i);
    arr.push_back(t);
  }
  j["terms"] = arr;
  j["filtered"] = filtered;
  if (!series.empty()) {
    nlohmann::json ser = nlohmann::json::array();
    for (const auto& [n, poly] : series) {
      nlohmann::json e;
      e["power"] = n + 1;
      nlohmann::json comps = nlohmann::json::array();
      for (const auto& [i, c] : poly) {
        nlohmann::json t;
        t["basis_index"] = i;
        t["expression"] = basis.expression(i);
        t["coefficient"] = c.value();
        comps.push_back(t);
      }
      e["element"] = comps;
      ser.push_back(e);
    }
    j["series"] = ser;
  }
  return j.dump(2);
}

CommutatorBound product_comm_bound(HallBasis& basis,
                                   const ExponentSequence& seq, int q,
                                   CommMode mode) {
  if (q < 1) throw std::domain_error("expansion depth must be >= 1");
  CommutatorBound out;
  out.order_exponent = q + 1;
  if (seq.size() <= 1) return out;  // single exponential is exact
  ZTable z = z_coefficients(basis, seq, q - 1);
  const int r = int(seq.size());
  for (int n = 1; n <= q - 1; ++n) {
    if (z[r][n].empty()) continue;
    LiePoly scaled;
    lie_add_scaled(scaled, Scalar::rational(1, n + 1), z[r][n]);
    out.series[n] = std::move(scaled);
  }
  Scalar inv_q1 = Scalar::rational(1, q + 1);
  if (mode == CommMode::aggregated) {
    for (const auto& lsp : omega_polys(basis, seq, q, z))
      for (const auto& [i, poly] : lsp) {
        Scalar add = inv_q1 * integrate_abs(poly);
        if (!add.is_zero()) out.terms[i] += add;
      }
  } else {
    for (int k = 2; k <= r; ++k)
      for (int n = 1; n <= q; ++n) {
        LiePoly term = z[k - 1][q - n];
        for (int j = 0; j < n; ++j) term = ad_step(basis, seq[k - 1], term);
        Scalar fac = inv_q1 * factorial(n).inverse();
        for (const auto& [i, c] : term) {
          Scalar add = fac * c.abs();
          if (!add.is_zero()) out.terms[i] += add;
        }
      }
  }
  std::erase_if(out.terms, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

CommutatorBound symmetric_twoterm_bound(HallBasis& basis,
                                        const SplittingScheme& scheme) {
  SplittingScheme tt = as_twoterm(scheme);
  if (!is_palindromic(tt))
    throw std::domain_error("theta-route bound requires a palindromic scheme");
  int order = order_of(tt, std::min(kMaxWeight, 10));
  if (order < 2 || order % 2 != 0)
    throw std::domain_error("theta-route bound requires even order >= 2");
  const int q = order;  // 2p
  ExponentSequence seq = flatten_theta(tt);
  ZTable z = z_coefficients(basis, seq, q - 1);
  CommutatorBound out;
  out.order_exponent = q + 1;
  Scalar factor = Scalar::rational(2, q + 1);
  for (const auto& lsp : omega_polys(basis, seq, q, z))
    for (const auto& [i, poly] : lsp) {
      Scalar add = factor * integrate_abs(poly);
      if (!add.is_zero()) out.terms[i] += add;
    }
  std::erase_if(out.terms, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

// ---------------------------------------------------------- multi-operator

CommExpr CommExpr::operator_(int i) {
  CommExpr e;
  e.kind = Kind::op;
  e.index = i;
  return e;
}

CommExpr CommExpr::sum_of(std::vector<CommExpr> parts) {
  if (parts.size() == 1) return parts.front();
  CommExpr e;
  e.kind = Kind::sum;
  e.children = std::move(parts);
  return e;
}

CommExpr CommExpr::comm_of(CommExpr a, CommExpr b) {
  CommExpr e;
  e.kind = Kind::comm;
  e.children = {std::move(a), std::move(b)};
  return e;
}

std::string CommExpr::str() const {
  switch (kind) {
    case Kind::op: return "A_" + std::to_string(index);
    case Kind::sum: {
      std::string s = "(";
      for (size_t i = 0; i < children.size(); ++i) {
        if (i) s += "+";
        s += children[i].str();
      }
      return s + ")";
    }
    case Kind::comm:
      return "[" + children[0].str() + "," + children[1].str() + "]";
  }
  return "";
}

MultiOpBound lie_trotter_bound_N(int N) {
  if (N < 2) throw std::domain_error("need at least two operators");
  MultiOpBound b;
  b.order_exponent = 2;
  for (int k = 2; k <= N; ++k) {
    std::vector<CommExpr> inner;
    for (int j = 1; j < k; ++j)
      inner.push_back(
          CommExpr::comm_of(CommExpr::operator_(k), CommExpr::operator_(j)));
    b.terms.push_back({Scalar::rational(1, 2), CommExpr::sum_of(inner)});
  }
  return b;
}

MultiOpBound strang_bound_N(int N) {
  if (N < 2) throw std::domain_error("need at least two operators");
  MultiOpBound b;
  b.order_exponent = 3;
  auto op_range = [](int from, int to) {
    std::vector<CommExpr> v;
    for (int i = from; i <= to; ++i) v.push_back(CommExpr::operator_(i));
    return v;
  };
  for (int k = 2; k <= N + 1; ++k) {
    if (k - 2 >= 1) {
      std::vector<CommExpr> inner;
      for (int j = 1; j <= k - 2; ++j)
        inner.push_back(CommExpr::comm_of(CommExpr::operator_(j),
                                          CommExpr::sum_of(op_range(j + 1, N))));
      b.terms.push_back(
          {Scalar::rational(1, 12),
           CommExpr::comm_of(CommExpr::operator_(k - 1),
                             CommExpr::sum_of(std::move(inner)))});
    }
    if (k <= N) {
      b.terms.push_back(
          {Scalar::rational(1, 24),
           CommExpr::comm_of(
               CommExpr::operator_(k - 1),
               CommExpr::comm_of(CommExpr::operator_(k - 1),
                                 CommExpr::sum_of(op_range(k, N))))});
    }
  }
  return b;
}

}  // namespace splitbound
