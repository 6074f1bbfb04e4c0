#include "splitbound/matrix_oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace splitbound {

// ------------------------------------------------------------------- RNG

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256pp::Xoshiro256pp(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

uint64_t Xoshiro256pp::next() {
  uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::uniform() {
  return double(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256pp::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

// ------------------------------------------------------------- problems

double UnitaryProblem::norm_sum() const {
  double s = 0;
  for (double a : norms) s += a;
  return s;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return 0;
  return m.jacobiSvd().singularValues()(0);
}

UnitaryProblem random_problem(int d, int N, uint64_t seed,
                              const std::vector<double>& norm_targets) {
  if (d < 2 || d > 64) throw std::domain_error("dimension must be in [2, 64]");
  if (N < 1) throw std::domain_error("need at least one operator");
  if (int(norm_targets.size()) != N)
    throw std::domain_error("norm target count must equal operator count");
  UnitaryProblem prob;
  prob.dim = d;
  prob.seed = seed;
  Xoshiro256pp rng(seed);
  for (int j = 0; j < N; ++j) {
    Eigen::MatrixXcd m(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        m(a, b) = std::complex<double>(rng.gaussian(), rng.gaussian());
    Eigen::MatrixXcd s = 0.5 * (m - m.adjoint().eval());
    double nrm = spectral_norm(s);
    double target = norm_targets[j];
    if (target == 0 || nrm == 0)
      s.setZero();
    else
      s *= target / nrm;
    prob.ops.push_back(s);
    prob.norms.push_back(spectral_norm(s));
  }
  return prob;
}

Eigen::MatrixXcd matexp(const Eigen::MatrixXcd& S, double t) {
  double scale = std::max(1.0, S.norm());
  if ((S + S.adjoint().eval()).norm() > 1e-12 * scale)
    throw std::domain_error("matrix exponential input is not skew-Hermitian");
  Eigen::MatrixXcd H = std::complex<double>(0, 1) * S;  // Hermitian
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  Eigen::VectorXcd phases(S.rows());
  for (int k = 0; k < S.rows(); ++k)
    phases(k) = std::exp(std::complex<double>(0, -t * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

Eigen::MatrixXcd exact_evolution(const UnitaryProblem& prob, double h) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(prob.dim, prob.dim);
  for (const auto& op : prob.ops) sum += op;
  return matexp(sum, h);
}

Eigen::MatrixXcd apply_scheme(const SplittingScheme& scheme,
                              const UnitaryProblem& prob, double h) {
  if (scheme.num_operators != int(prob.ops.size()))
    throw std::domain_error("scheme and problem operator counts differ");
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(prob.dim, prob.dim);
  for (const auto& step : flatten(scheme)) {
    const Eigen::MatrixXcd& op = prob.ops.at(step.op - 1);
    result = matexp(op, h * step.coeff.value()) * result;
  }
  return result;
}

double local_error(const SplittingScheme& scheme, const UnitaryProblem& prob,
                   double h) {
  return spectral_norm(apply_scheme(scheme, prob, h) -
                       exact_evolution(prob, h));
}

double global_error(const SplittingScheme& scheme, const UnitaryProblem& prob,
                    double h, int k) {
  Eigen::MatrixXcd step = apply_scheme(scheme, prob, h);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(prob.dim, prob.dim);
  for (int i = 0; i < k; ++i) acc = step * acc;
  return spectral_norm(acc - exact_evolution(prob, double(k) * h));
}

// ------------------------------------------------------- Lie evaluation

Eigen::MatrixXcd eval_basis_element(const HallBasis& basis, int i,
                                    const Eigen::MatrixXcd& A,
                                    const Eigen::MatrixXcd& B) {
  if (i == 1) return A;
  if (i == 2) return B;
  Eigen::MatrixXcd l = eval_basis_element(basis, basis.ell(i), A, B);
  Eigen::MatrixXcd r = eval_basis_element(basis, basis.r(i), A, B);
  return l * r - r * l;
}

Eigen::MatrixXcd eval_lie_poly(const LiePoly& poly, const HallBasis& basis,
                               const Eigen::MatrixXcd& A,
                               const Eigen::MatrixXcd& B) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(A.rows(), A.cols());
  for (const auto& [i, c] : poly)
    out += c.value() * eval_basis_element(basis, i, A, B);
  return out;
}

Eigen::MatrixXcd eval_comm_expr(const CommExpr& expr,
                                const UnitaryProblem& prob) {
  switch (expr.kind) {
    case CommExpr::Kind::op:
      return prob.ops.at(expr.index - 1);
    case CommExpr::Kind::sum: {
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(prob.dim, prob.dim);
      for (const auto& c : expr.children) out += eval_comm_expr(c, prob);
      return out;
    }
    case CommExpr::Kind::comm: {
      Eigen::MatrixXcd a = eval_comm_expr(expr.children[0], prob);
      Eigen::MatrixXcd b = eval_comm_expr(expr.children[1], prob);
      return a * b - b * a;
    }
  }
  throw std::logic_error("unreachable");
}

double comm_bound_value(const CommutatorBound& bound, const HallBasis& basis,
                        const UnitaryProblem& prob, double h) {
  if (prob.ops.size() != 2)
    throw std::domain_error("commutator bound needs a two-operator problem");
  const Eigen::MatrixXcd &A = prob.ops[0], &B = prob.ops[1];
  double value = 0;
  for (const auto& [n, poly] : bound.series)
    value += std::pow(h, n + 1) *
             spectral_norm(eval_lie_poly(poly, basis, A, B));
  double tail = 0;
  for (const auto& [i, c] : bound.terms)
    tail += c.value() * spectral_norm(eval_basis_element(basis, i, A, B));
  return value + std::pow(h, bound.order_exponent) * tail;
}

double multiop_bound_value(const MultiOpBound& bound,
                           const UnitaryProblem& prob, double h) {
  double sum = 0;
  for (const auto& term : bound.terms)
    sum += term.coeff.abs().value() *
           spectral_norm(eval_comm_expr(term.expr, prob));
  return std::pow(h, bound.order_exponent) * sum;
}

// ------------------------------------------------------------ slope fits

std::vector<double> h_grid(double norm_sum, double lambda_cap) {
  std::vector<double> out;
  for (int k = 0; k <= 60; ++k) {
    double h = std::pow(10.0, -3.0 + k / 20.0);
    if (h * norm_sum <= lambda_cap * (1 + 1e-12)) out.push_back(h);
  }
  return out;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& err,
                 double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    if (!(err[i] > floor) || !std::isfinite(err[i])) continue;
    double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw std::runtime_error("too few points above the noise floor");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double local_order_slope(const SplittingScheme& scheme,
                         const UnitaryProblem& prob) {
  std::vector<double> hs, errs;
  for (double h : h_grid(prob.norm_sum())) {
    if (h > 0.1) break;  // stay in the asymptotic regime
    hs.push_back(h);
    errs.push_back(local_error(scheme, prob, h));
  }
  return fit_slope(hs, errs);
}

namespace {

/// X_n = sum_{r_1+...+r_N=n} A_1^{r_1}/r_1! ... A_N^{r_N}/r_N!.
std::vector<Eigen::MatrixXcd> x_matrices(const UnitaryProblem& prob,
                                         int n_max) {
  const int N = int(prob.ops.size());
  const int d = prob.dim;
  // powers[j][r] = A_j^r / r!
  std::vector<std::vector<Eigen::MatrixXcd>> powers(N);
  for (int j = 0; j < N; ++j) {
    powers[j].push_back(Eigen::MatrixXcd::Identity(d, d));
    for (int rr = 1; rr <= n_max; ++rr)
      powers[j].push_back((powers[j][rr - 1] * prob.ops[j]) / double(rr));
  }
  std::vector<Eigen::MatrixXcd> xs(n_max + 1,
                                   Eigen::MatrixXcd::Zero(d, d));
  xs[0] = Eigen::MatrixXcd::Identity(d, d);
  std::vector<int> parts(N, 0);
  auto rec = [&](auto&& self, int j, int used) -> void {
    if (j == N - 1) {
      for (int n = used; n <= n_max; ++n) {
        parts[j] = n - used;
        Eigen::MatrixXcd prod = powers[0][parts[0]];
        for (int i = 1; i < N; ++i) prod = prod * powers[i][parts[i]];
        if (n >= 1) xs[n] += prod;
      }
      return;
    }
    for (int r = 0; used + r <= n_max; ++r) {
      parts[j] = r;
      self(self, j + 1, used + r);
    }
  };
  rec(rec, 0, 0);
  return xs;
}

}  // namespace

double delta_series_slope(const SplittingScheme& scheme,
                          const UnitaryProblem& prob, int q) {
  auto alphas = composition_alphas(scheme);
  CoeffTable delta = delta_table(alphas, q);
  auto xs = x_matrices(prob, q);
  const int d = prob.dim;
  // T_n = sum over weight-n indices of delta_I * X_{i_m} ... X_{i_1}
  std::vector<Eigen::MatrixXcd> t_mats(q + 1, Eigen::MatrixXcd::Zero(d, d));
  for (int n = 1; n <= q; ++n)
    for (const auto& idx : multi_indices(n)) {
      Scalar c = delta.at(idx);
      if (c.is_zero()) continue;
      Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(d, d);
      for (auto it = idx.rbegin(); it != idx.rend(); ++it)
        prod = prod * xs[*it];
      t_mats[n] += c.value() * prod;
    }
  std::vector<double> hs, errs;
  for (double h : h_grid(prob.norm_sum())) {
    if (h > 0.5) break;  // avoid the saturated regime
    Eigen::MatrixXcd residual =
        apply_scheme(scheme, prob, h) - exact_evolution(prob, h);
    for (int n = 1; n <= q; ++n) residual -= std::pow(h, n) * t_mats[n];
    double e = spectral_norm(residual);
    if (e > 1e-2) break;
    hs.push_back(h);
    errs.push_back(e);
  }
  return fit_slope(hs, errs);
}

double z_series_slope(const ExponentSequence& seq, HallBasis& basis,
                      const UnitaryProblem& prob, int q) {
  if (prob.ops.size() != 2)
    throw std::domain_error("Z-series check needs a two-operator problem");
  const Eigen::MatrixXcd &A = prob.ops[0], &B = prob.ops[1];
  const int d = prob.dim;
  auto c_matrix = [&](const ExponentStep& step) -> Eigen::MatrixXcd {
    if (step.op == 0) return step.coeff.value() * (A + B);
    return step.coeff.value() * (step.op == 1 ? A : B);
  };
  ZTable z = z_coefficients(basis, seq, q);
  const int r = int(seq.size());
  std::vector<Eigen::MatrixXcd> z_mats;
  for (int n = 0; n <= q; ++n)
    z_mats.push_back(eval_lie_poly(z[r][n], basis, A, B));
  std::vector<double> ts, errs;
  for (double t : h_grid(prob.norm_sum())) {
    if (t > 0.5) break;
    // M(t) from the conjugated-sum form of the product derivative
    Eigen::MatrixXcd m = c_matrix(seq[r - 1]);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
    for (int k = r - 1; k >= 1; --k) {
      Eigen::MatrixXcd ck1 = c_matrix(seq[k]);
      u = u * matexp(ck1, t);
      m += u * c_matrix(seq[k - 1]) * u.adjoint();
    }
    Eigen::MatrixXcd residual = m;
    for (int n = 0; n <= q; ++n) residual -= std::pow(t, n) * z_mats[n];
    double e = spectral_norm(residual);
    if (e > 1e-2) break;
    ts.push_back(t);
    errs.push_back(e);
  }
  return fit_slope(ts, errs);
}

// ----------------------------------------------------------- verification

// Measured one-step errors below this are round-off from the matrix
// arithmetic, not the method error; skip them when judging bounds.
static constexpr double kNoiseFloor = 1e-12;

double ErrorReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : rows)
    for (const auto& b : row.bounds)
      if (row.true_error > kNoiseFloor)
        m = std::min(m, b.value / row.true_error);
  return m;
}

bool ErrorReport::dominated(double slack) const {
  for (const auto& row : rows)
    for (const auto& b : row.bounds)
      if (row.true_error > kNoiseFloor &&
          row.true_error > b.value * (1 + slack))
        return false;
  return true;
}

std::string ErrorReport::to_csv() const {
  std::ostringstream os;
  os.precision(16);
  os << "h,lambda,true_error,bound_name,bound_value,margin\n";
  for (const auto& row : rows)
    for (const auto& b : row.bounds) {
      double margin = row.true_error > 0 ? b.value / row.true_error
                                         : std::numeric_limits<double>::infinity();
      os << row.h << "," << row.lambda << "," << row.true_error << ",\""
         << b.name << "\"," << b.value << "," << margin << "\n";
    }
  return os.str();
}

std::string ErrorReport::to_json() const {
  nlohmann::json j;
  j["scheme"] = scheme;
  j["seed"] = seed;
  j["dim"] = dim;
  j["slope"] = slope;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json rj;
    rj["h"] = row.h;
    rj["lambda"] = row.lambda;
    rj["true_error"] = row.true_error;
    nlohmann::json bj = nlohmann::json::object();
    for (const auto& b : row.bounds) bj[b.name] = b.value;
    rj["bounds"] = bj;
    arr.push_back(rj);
  }
  j["rows"] = arr;
  return j.dump(2);
}

ErrorReport verify_scheme(const SplittingScheme& scheme,
                          const UnitaryProblem& prob, HallBasis& basis,
                          const VerifyOptions& opts) {
  ErrorReport report;
  report.scheme = scheme.name;
  report.seed = prob.seed;
  report.dim = prob.dim;
  double a_sum = prob.norm_sum();

  // power-law bounds: value = constant * lambda^{exponent}
  struct PowerBound {
    std::string name;
    double constant;
    int exponent;
  };
  std::vector<PowerBound> powers;
  for (const auto& nb : applicable_bounds(scheme))
    powers.push_back({nb.provenance, nb.constant.value(), nb.order_exponent});

  std::vector<std::pair<std::string, BoundPolynomial>> refined;
  if (scheme.variant == SchemeVariant::trotter_composition ||
      scheme.variant == SchemeVariant::strang_composition) {
    int p = order_of(scheme, std::min(kMaxWeight, 10));
    for (int off : opts.refined_depths) {
      int q = p + off;
      if (q < p || q > kMaxWeight) continue;
      refined.emplace_back("refined_q" + std::to_string(q),
                           refined_bound(scheme, q));
    }
  }

  // commutator bounds, precomputed once per problem
  std::vector<std::pair<std::string, double>> comm_tails;  // name, constant
  std::vector<std::pair<std::string, int>> comm_orders;
  if (opts.commutator_bounds && scheme.num_operators == 2 &&
      prob.ops.size() == 2) {
    int p = order_of(scheme, std::min(kMaxWeight, 10));
    ExponentSequence seq = flatten(scheme);
    for (CommMode mode : {CommMode::aggregated, CommMode::triangle}) {
      CommutatorBound cb = product_comm_bound(basis, seq, p, mode);
      double tail = 0;
      for (const auto& [i, c] : cb.terms)
        tail += c.value() * spectral_norm(eval_basis_element(
                                basis, i, prob.ops[0], prob.ops[1]));
      std::string name = mode == CommMode::aggregated ? "comm_aggregated"
                                                      : "comm_triangle";
      comm_tails.emplace_back(name, tail);
      comm_orders.emplace_back(name, cb.order_exponent);
    }
    if (is_palindromic(scheme) && p % 2 == 0) {
      CommutatorBound cb = symmetric_twoterm_bound(basis, scheme);
      double tail = 0;
      for (const auto& [i, c] : cb.terms)
        tail += c.value() * spectral_norm(eval_basis_element(
                                basis, i, prob.ops[0], prob.ops[1]));
      comm_tails.emplace_back("comm_theta", tail);
      comm_orders.emplace_back("comm_theta", cb.order_exponent);
    }
  }

  for (double h : h_grid(a_sum, opts.lambda_cap)) {
    ErrorRow row;
    row.h = h;
    row.lambda = h * a_sum;
    row.true_error = local_error(scheme, prob, h);
    for (const auto& pb : powers)
      row.bounds.push_back(
          {pb.name, pb.constant * std::pow(row.lambda, pb.exponent)});
    for (const auto& [name, poly] : refined)
      row.bounds.push_back({name, poly.evaluate(row.lambda)});
    for (size_t i = 0; i < comm_tails.size(); ++i)
      row.bounds.push_back(
          {comm_tails[i].first,
           comm_tails[i].second * std::pow(h, comm_orders[i].second)});
    report.rows.push_back(std::move(row));
  }
  report.slope = local_order_slope(scheme, prob);
  return report;
}

}  // namespace splitbound
