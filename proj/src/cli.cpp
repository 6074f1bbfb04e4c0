#include "splitbound/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "splitbound/matrix_oracle.hpp"

namespace splitbound {

namespace {

using nlohmann::json;

struct SchemeArgs {
  std::string name;
  std::string file;
};

void add_scheme_options(CLI::App* cmd, SchemeArgs& args) {
  auto* a = cmd->add_option("--scheme", args.name,
                            "catalog scheme name (see `catalog`)");
  auto* b =
      cmd->add_option("--scheme-file", args.file, "scheme JSON file path");
  a->excludes(b);
}

SplittingScheme resolve_scheme(const SchemeArgs& args) {
  if (!args.file.empty()) return load_scheme_file(args.file);
  if (!args.name.empty()) return catalog(args.name);
  throw CLI::ValidationError("--scheme or --scheme-file is required");
}

std::vector<uint64_t> parse_seeds(const std::string& spec) {
  std::vector<uint64_t> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoull(part));
    } else {
      uint64_t lo = std::stoull(part.substr(0, dots));
      uint64_t hi = std::stoull(part.substr(dots + 2));
      for (uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    }
  }
  if (out.empty()) throw CLI::ValidationError("empty seed list");
  return out;
}

int cmd_catalog(const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& name : catalog_names())
      arr.push_back(json::parse(scheme_to_json(catalog(name))));
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  for (const auto& name : catalog_names()) {
    SplittingScheme s = catalog(name);
    std::cout << name << "  variant=" << variant_name(s.variant)
              << "  order=" << s.claimed_order << "  coefficients=";
    std::vector<Scalar> cs = s.variant == SchemeVariant::strang_composition
                                 ? s.gammas
                                 : s.alphas;
    for (size_t i = 0; i < cs.size(); ++i)
      std::cout << (i ? "," : "") << cs[i].str();
    std::cout << "\n";
  }
  return 0;
}

int cmd_norm_bound(const SplittingScheme& scheme,
                   const std::vector<double>& norms, double h,
                   const std::string& format) {
  if (scheme.variant == SchemeVariant::general_splitting) {
    if (norms.empty() || h <= 0)
      throw CLI::ValidationError(
          "general splitting bound needs --norms and --step");
    double v = general_splitting_bound(scheme, norms, h);
    if (format == "json") {
      json j{{"bound", v}, {"h", h}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "general_splitting bound at h=" << h << ": " << v << "\n";
    }
    return 0;
  }
  auto bounds = applicable_bounds(scheme);
  double a_sum = 0;
  for (double a : norms) a_sum += a;
  if (format == "json") {
    json arr = json::array();
    for (const auto& b : bounds) {
      json j{{"name", b.provenance},
             {"exponent", b.order_exponent},
             {"constant", b.constant.value()}};
      if (b.constant.exact()) j["exact"] = b.constant.str();
      if (!norms.empty() && h > 0) j["value"] = b.evaluate(a_sum, h);
      arr.push_back(j);
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& b : bounds) {
      std::cout << b.provenance << ": constant=" << b.constant.str()
                << " * lambda^" << b.order_exponent;
      if (!norms.empty() && h > 0)
        std::cout << "  value(h=" << h << ")=" << b.evaluate(a_sum, h);
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_refined(const SplittingScheme& scheme, int q,
                const std::string& format) {
  if (q <= 0) q = order_of(scheme, std::min(kMaxWeight, 10)) + 1;
  BoundPolynomial poly = refined_bound(scheme, q);
  if (format == "json") {
    std::cout << poly.to_json() << "\n";
  } else {
    std::cout << "p=" << poly.p << " q=" << poly.q
              << (poly.symmetric ? " (symmetric)" : "") << "\n";
    for (const auto& [n, dn] : poly.d)
      std::cout << "  d_" << n << " = " << dn << "\n";
    std::cout << "  tail lambda^" << poly.q + 1 << " coefficient = "
              << poly.tail << "\n";
  }
  return 0;
}

int cmd_comm(const SplittingScheme& scheme, int q, const std::string& mode,
             bool assume_rkn, bool theta, const std::string& format) {
  HallBasis basis;
  CommutatorBound bound;
  if (theta) {
    bound = symmetric_twoterm_bound(basis, scheme);
  } else {
    if (q <= 0) q = order_of(scheme, std::min(kMaxWeight, 10));
    bound = product_comm_bound(
        basis, flatten(scheme), q,
        mode == "triangle" ? CommMode::triangle : CommMode::aggregated);
  }
  if (assume_rkn) bound = bound.filter_ideal(basis);
  if (format == "table") {
    std::cout << "h^" << bound.order_exponent << " terms:\n";
    for (const auto& [i, c] : bound.terms)
      std::cout << "  " << basis.expression(i) << " : " << c.str()
                << (basis.in_ideal(i) ? "  (ideal)" : "") << "\n";
  } else {
    std::cout << bound.to_json(basis) << "\n";
  }
  return 0;
}

int cmd_multiop(int trotter_n, int strang_n, const std::string& format) {
  MultiOpBound b =
      trotter_n > 0 ? lie_trotter_bound_N(trotter_n) : strang_bound_N(strang_n);
  if (format == "json") {
    json arr = json::array();
    for (const auto& t : b.terms)
      arr.push_back(json{{"coefficient", t.coeff.str()},
                         {"expression", t.expr.str()}});
    std::cout << json{{"order", b.order_exponent}, {"terms", arr}}.dump(2)
              << "\n";
  } else {
    std::cout << "h^" << b.order_exponent << " terms:\n";
    for (const auto& t : b.terms)
      std::cout << "  " << t.coeff.str() << " * ||" << t.expr.str() << "||\n";
  }
  return 0;
}

int cmd_effective(const SplittingScheme& scheme, const std::string& formula,
                  const std::string& format) {
  EffectiveError e = effective_error(scheme);
  if (format == "json") {
    json j{{"stages", e.stages}, {"C", e.C}, {"C_sym", e.C_sym}};
    if (formula != "table") j["caption"] = e.ef_caption;
    if (formula != "caption") j["table"] = e.ef_table;
    std::cout << j.dump(2) << "\n";
  } else {
    if (formula == "table") {
      std::cout << e.ef_table << "\n";
    } else if (formula == "caption") {
      std::cout << e.ef_caption << "\n";
    } else {
      std::cout << "table formula   s*(2^-p C)^(1/p) = " << e.ef_table << "\n"
                << "caption formula s*C_sym^(1/p)    = " << e.ef_caption
                << "\n";
      if (std::fabs(e.ef_table - e.ef_caption) > 5e-3)
        std::cout << "note: the two definitions disagree; published tables "
                     "match the first\n";
    }
  }
  return 0;
}

int cmd_verify(const SplittingScheme& scheme, const std::vector<int>& dims,
               const std::vector<uint64_t>& seeds, const std::string& format) {
  struct Job {
    int dim;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int d : dims)
    for (uint64_t s : seeds) jobs.push_back({d, s});
  std::vector<ErrorReport> reports(jobs.size());
  int workers = std::min<int>(thread_cap(), int(jobs.size()));
  std::atomic<size_t> cursor{0};
  auto work = [&] {
    HallBasis basis;  // per-thread: the rewrite cache is not shared
    for (size_t i = cursor.fetch_add(1); i < jobs.size();
         i = cursor.fetch_add(1)) {
      UnitaryProblem prob =
          random_problem(jobs[i].dim, scheme.num_operators, jobs[i].seed,
                         std::vector<double>(scheme.num_operators, 1.0));
      reports[i] = verify_scheme(scheme, prob, basis);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  bool ok = true;
  json summary = json::array();
  for (size_t i = 0; i < jobs.size(); ++i) {
    bool dom = reports[i].dominated();
    ok = ok && dom;
    if (format == "json") {
      summary.push_back(json{{"dim", jobs[i].dim},
                             {"seed", jobs[i].seed},
                             {"dominated", dom},
                             {"min_margin", reports[i].min_margin()},
                             {"slope", reports[i].slope}});
    } else if (format == "csv") {
      std::cout << reports[i].to_csv();
    } else {
      std::cout << "dim=" << jobs[i].dim << " seed=" << jobs[i].seed
                << " slope=" << reports[i].slope
                << " min_margin=" << reports[i].min_margin()
                << (dom ? "  ok" : "  VIOLATED") << "\n";
    }
  }
  if (format == "json") std::cout << summary.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_curve(const SplittingScheme& scheme, const std::vector<int>& qs,
              const std::vector<double>& norms) {
  double a_sum = 0;
  for (double a : norms) a_sum += a;
  bool with_h = a_sum > 0;
  auto bounds = applicable_bounds(scheme);
  std::vector<std::pair<std::string, BoundPolynomial>> refined;
  if (scheme.variant != SchemeVariant::general_splitting &&
      scheme.variant != SchemeVariant::two_term)
    for (int q : qs)
      refined.emplace_back("refined_q" + std::to_string(q),
                           refined_bound(scheme, q));
  std::cout << (with_h ? "h,lambda,bound_name,bound_value\n"
                       : "lambda,bound_name,bound_value\n");
  std::cout.precision(16);
  for (double lambda : h_grid(1.0)) {
    auto emit = [&](const std::string& name, double value) {
      if (with_h) std::cout << lambda / a_sum << ",";
      std::cout << lambda << ",\"" << name << "\"," << value << "\n";
    };
    for (const auto& b : bounds)
      emit(b.provenance, b.constant.value() * std::pow(lambda, b.order_exponent));
    for (const auto& [name, poly] : refined) emit(name, poly.evaluate(lambda));
  }
  return 0;
}

}  // namespace

int thread_cap() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SPLITBOUND_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"error bounds for splitting methods on unitary problems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "table";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  auto* c_catalog = app.add_subcommand("catalog", "list built-in schemes");
  c_catalog->fallthrough();

  SchemeArgs nb_scheme;
  std::vector<double> nb_norms;
  double nb_h = 0;
  auto* c_norm = app.add_subcommand("norm-bound",
                                    "closed-form operator-norm bounds");
  c_norm->fallthrough();
  add_scheme_options(c_norm, nb_scheme);
  c_norm->add_option("--norms", nb_norms, "operator norms a_1,a_2,...")
      ->delimiter(',');
  c_norm->add_option("--step", nb_h, "step size h for evaluation");

  SchemeArgs rb_scheme;
  int rb_q = 0;
  auto* c_ref = app.add_subcommand("refined-bound",
                                   "polynomial-in-lambda refined bound");
  c_ref->fallthrough();
  add_scheme_options(c_ref, rb_scheme);
  c_ref->add_option("--q", rb_q, "truncation depth (default order+1)");

  SchemeArgs cb_scheme;
  int cb_q = 0, cb_trotter_n = 0, cb_strang_n = 0;
  std::string cb_mode = "aggregated";
  bool cb_rkn = false, cb_theta = false;
  auto* c_comm =
      app.add_subcommand("comm-bound", "commutator-norm error bounds");
  c_comm->fallthrough();
  add_scheme_options(c_comm, cb_scheme);
  c_comm->add_option("--order", cb_q, "expansion depth q (default: scheme order)");
  c_comm->add_option("--mode", cb_mode, "remainder mode")
      ->check(CLI::IsMember({"aggregated", "triangle"}));
  c_comm->add_flag("--assume-rkn", cb_rkn,
                   "drop terms in the ideal of [[[A,B],B],B]");
  c_comm->add_flag("--theta", cb_theta,
                   "symmetric two-term route (palindromic schemes)");
  c_comm->add_option("--lie-trotter-n", cb_trotter_n,
                     "closed-form multi-operator first-order bound");
  c_comm->add_option("--strang-n", cb_strang_n,
                     "closed-form multi-operator second-order bound");

  SchemeArgs ef_scheme;
  std::string ef_formula = "both";
  auto* c_ef = app.add_subcommand("effective-error",
                                  "stage-weighted bound comparison figure");
  c_ef->fallthrough();
  add_scheme_options(c_ef, ef_scheme);
  c_ef->add_option("--ef-formula", ef_formula, "which definition to print")
      ->check(CLI::IsMember({"caption", "table", "both"}));

  SchemeArgs vf_scheme;
  std::vector<int> vf_dims{4, 8};
  std::string vf_seeds = "1..20";
  auto* c_verify = app.add_subcommand(
      "verify", "check every bound against dense-matrix evolutions");
  c_verify->fallthrough();
  add_scheme_options(c_verify, vf_scheme);
  c_verify->add_option("--dim", vf_dims, "matrix dimensions")->delimiter(',');
  c_verify->add_option("--seeds", vf_seeds, "seed list, e.g. 1..20 or 1,7,9");

  SchemeArgs cv_scheme;
  std::vector<int> cv_qs;
  std::vector<double> cv_norms;
  auto* c_curve =
      app.add_subcommand("curve", "emit bound curves over lambda as CSV");
  c_curve->fallthrough();
  add_scheme_options(c_curve, cv_scheme);
  c_curve->add_option("--q", cv_qs, "refined-bound depths")->delimiter(',');
  c_curve->add_option("--norms", cv_norms,
                      "operator norms; adds a raw-h column")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_catalog->parsed()) return cmd_catalog(format);
    if (c_norm->parsed())
      return cmd_norm_bound(resolve_scheme(nb_scheme), nb_norms, nb_h, format);
    if (c_ref->parsed()) return cmd_refined(resolve_scheme(rb_scheme), rb_q, format);
    if (c_comm->parsed()) {
      if (cb_trotter_n > 0 || cb_strang_n > 0)
        return cmd_multiop(cb_trotter_n, cb_strang_n, format);
      return cmd_comm(resolve_scheme(cb_scheme), cb_q, cb_mode, cb_rkn,
                      cb_theta, format);
    }
    if (c_ef->parsed())
      return cmd_effective(resolve_scheme(ef_scheme), ef_formula, format);
    if (c_verify->parsed())
      return cmd_verify(resolve_scheme(vf_scheme), vf_dims,
                        parse_seeds(vf_seeds), format);
    if (c_curve->parsed()) {
      std::vector<int> qs = cv_qs;
      SplittingScheme scheme = resolve_scheme(cv_scheme);
      if (qs.empty() &&
          (scheme.variant == SchemeVariant::trotter_composition ||
           scheme.variant == SchemeVariant::strang_composition))
        qs = {order_of(scheme, std::min(kMaxWeight, 10)) + 1};
      return cmd_curve(scheme, qs, cv_norms);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace splitbound
