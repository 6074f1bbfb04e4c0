#include "splitbound/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace splitbound {

namespace {

constexpr double kConsistencyTol = 1e-14;

bool scalar_close(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return a == b;
  double x = a.value(), y = b.value();
  double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
  return std::fabs(x - y) <= 1e-14 * scale;
}

Scalar sum(const std::vector<Scalar>& v) {
  Scalar s(0);
  for (const auto& x : v) s += x;
  return s;
}

bool sum_is_one(const Scalar& s) {
  if (s.exact()) return s == Scalar(1);
  return std::fabs(s.value() - 1.0) <= kConsistencyTol;
}

void append_step(ExponentSequence& seq, int op, const Scalar& coeff) {
  if (coeff.is_zero()) return;
  if (!seq.empty() && seq.back().op == op) {
    seq.back().coeff += coeff;
    if (seq.back().coeff.is_zero()) seq.pop_back();
    return;
  }
  seq.push_back({op, coeff});
}

bool list_palindromic(const std::vector<Scalar>& v) {
  size_t n = v.size();
  for (size_t j = 0; j < n / 2; ++j)
    if (!scalar_close(v[j], v[n - 1 - j])) return false;
  return true;
}

}  // namespace

std::string variant_name(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::general_splitting: return "general_splitting";
    case SchemeVariant::trotter_composition: return "trotter_composition";
    case SchemeVariant::strang_composition: return "strang_composition";
    case SchemeVariant::two_term: return "two_term";
  }
  throw std::logic_error("unreachable");
}

SchemeVariant variant_from_name(const std::string& name) {
  if (name == "general_splitting") return SchemeVariant::general_splitting;
  if (name == "trotter_composition") return SchemeVariant::trotter_composition;
  if (name == "strang_composition") return SchemeVariant::strang_composition;
  if (name == "two_term") return SchemeVariant::two_term;
  throw invalid_scheme_error("unknown scheme variant: " + name);
}

int SplittingScheme::stages() const {
  switch (variant) {
    case SchemeVariant::general_splitting: return int(stage_coeffs.size());
    case SchemeVariant::trotter_composition: return int(alphas.size()) / 2;
    case SchemeVariant::strang_composition: return int(gammas.size());
    case SchemeVariant::two_term: return int(d.size());
  }
  throw std::logic_error("unreachable");
}

ConsistencyReport check_consistency(const SplittingScheme& s) {
  ConsistencyReport rep;
  auto flag = [&](const std::string& what, const Scalar& got) {
    rep.ok = false;
    rep.violations.push_back(what + " = " + got.str());
  };
  switch (s.variant) {
    case SchemeVariant::general_splitting: {
      if (s.stage_coeffs.empty())
        throw invalid_scheme_error("general splitting with no stages");
      for (int i = 0; i < s.num_operators; ++i) {
        Scalar total(0);
        for (const auto& stage : s.stage_coeffs) {
          if (int(stage.size()) != s.num_operators)
            throw invalid_scheme_error("stage coefficient row size mismatch");
          total += stage[i];
        }
        if (!sum_is_one(total))
          flag("sum_j alpha_" + std::to_string(i + 1) + "^(j)", total);
      }
      break;
    }
    case SchemeVariant::trotter_composition: {
      if (s.alphas.empty())
        throw invalid_scheme_error("composition with no coefficients");
      Scalar total = sum(s.alphas);
      if (!sum_is_one(total)) flag("sum alpha", total);
      break;
    }
    case SchemeVariant::strang_composition: {
      if (s.gammas.empty())
        throw invalid_scheme_error("composition with no coefficients");
      Scalar total = sum(s.gammas);
      if (!sum_is_one(total)) flag("sum gamma", total);
      break;
    }
    case SchemeVariant::two_term: {
      if (s.c.empty() || s.d.empty())
        throw invalid_scheme_error("two-term scheme with empty coefficients");
      Scalar tc = sum(s.c), td = sum(s.d);
      if (!sum_is_one(tc)) flag("sum c", tc);
      if (!sum_is_one(td)) flag("sum d", td);
      break;
    }
  }
  return rep;
}

bool is_palindromic(const SplittingScheme& s) {
  switch (s.variant) {
    case SchemeVariant::general_splitting: {
      // palindromic iff the flattened exponent list is its own reversal
      auto seq = flatten(s);
      for (size_t j = 0; j < seq.size() / 2; ++j) {
        const auto& a = seq[j];
        const auto& b = seq[seq.size() - 1 - j];
        if (a.op != b.op || !scalar_close(a.coeff, b.coeff)) return false;
      }
      return true;
    }
    case SchemeVariant::trotter_composition: return list_palindromic(s.alphas);
    case SchemeVariant::strang_composition: return list_palindromic(s.gammas);
    case SchemeVariant::two_term:
      return list_palindromic(s.c) && list_palindromic(s.d);
  }
  throw std::logic_error("unreachable");
}

ExponentSequence flatten(const SplittingScheme& s) {
  ExponentSequence seq;
  const int N = s.num_operators;
  switch (s.variant) {
    case SchemeVariant::general_splitting:
      for (const auto& stage : s.stage_coeffs)
        for (int i = 0; i < N; ++i) append_step(seq, i + 1, stage[i]);
      break;
    case SchemeVariant::trotter_composition: {
      if (s.alphas.size() % 2 != 0)
        throw invalid_scheme_error("composition needs an even alpha count");
      int sc = int(s.alphas.size()) / 2;
      for (int j = 0; j < sc; ++j) {
        // chi*(alpha_{2j-1} h) applies e^{alpha A_1} first
        for (int k = 1; k <= N; ++k) append_step(seq, k, s.alphas[2 * j]);
        // chi(alpha_{2j} h) applies e^{alpha A_N} first
        for (int k = N; k >= 1; --k) append_step(seq, k, s.alphas[2 * j + 1]);
      }
      break;
    }
    case SchemeVariant::strang_composition: {
      SplittingScheme t = s;
      t.variant = SchemeVariant::trotter_composition;
      t.alphas = composition_alphas(s);
      return flatten(t);
    }
    case SchemeVariant::two_term: {
      if (s.c.size() != s.d.size() + 1)
        throw invalid_scheme_error("two-term scheme needs |c| = |d| + 1");
      for (size_t j = 0; j < s.d.size(); ++j) {
        append_step(seq, 1, s.c[j]);
        append_step(seq, 2, s.d[j]);
      }
      append_step(seq, 1, s.c.back());
      break;
    }
  }
  return seq;
}

ExponentSequence flatten_theta(const SplittingScheme& s) {
  SplittingScheme tt = as_twoterm(s);
  if (!is_palindromic(tt))
    throw not_symmetric_error("theta sequence requires a palindromic scheme");
  const int sd = int(tt.d.size());
  // map c,d onto the symmetric a_j, b_j format; even-length d pushes the
  // central A exponential into a_s with b_s = 0
  std::vector<Scalar> a, b;
  int sh;
  if (sd % 2 == 1) {
    sh = (sd + 1) / 2;
    for (int j = 0; j < sh; ++j) a.push_back(tt.c[j]);
    for (int j = 0; j < sh; ++j) b.push_back(tt.d[j]);
  } else {
    sh = sd / 2 + 1;
    for (int j = 0; j < sh - 1; ++j) a.push_back(tt.c[j]);
    a.push_back(tt.c[sh - 1] / Scalar(2));
    for (int j = 0; j < sh - 1; ++j) b.push_back(tt.d[j]);
    b.push_back(Scalar(0));
  }
  ExponentSequence seq;
  seq.push_back({0, Scalar::rational(-1, 2)});
  for (int j = 0; j < sh; ++j) {
    seq.push_back({1, a[j]});
    seq.push_back({2, j + 1 < sh ? b[j] : b[j] / Scalar(2)});
  }
  return seq;
}

SplittingScheme composition_to_twoterm(const std::vector<Scalar>& alphas) {
  if (alphas.empty() || alphas.size() % 2 != 0)
    throw invalid_scheme_error("need a nonempty even-length alpha list");
  int sc = int(alphas.size()) / 2;
  SplittingScheme t;
  t.variant = SchemeVariant::two_term;
  t.num_operators = 2;
  auto alpha = [&](int i) {  // 1-based, alpha_{2s+1} = 0
    return i <= 2 * sc ? alphas[i - 1] : Scalar(0);
  };
  t.c.push_back(alpha(1));
  for (int j = 1; j <= sc; ++j) {
    t.c.push_back(alpha(2 * j) + alpha(2 * j + 1));
    t.d.push_back(alpha(2 * j - 1) + alpha(2 * j));
  }
  // trailing zero d-stages carry no exponential; trim them together with
  // the matching zero c so that |c| = |d| + 1 stays tight
  while (t.d.size() > 1 && t.d.back().is_zero() && t.c.back().is_zero()) {
    t.d.pop_back();
    t.c.pop_back();
  }
  return t;
}

std::vector<Scalar> twoterm_to_composition(const std::vector<Scalar>& c,
                                           const std::vector<Scalar>& d) {
  if (c.size() != d.size() + 1 || d.empty())
    throw invalid_scheme_error("two-term scheme needs |c| = |d| + 1");
  Scalar sc(0), sd(0);
  for (const auto& x : c) sc += x;
  for (const auto& x : d) sd += x;
  if (!scalar_close(sc, sd))
    throw invalid_scheme_error(
        "no composition representation: sum(c) != sum(d)");
  std::vector<Scalar> alphas(2 * d.size());
  Scalar prev = c[0];
  alphas[0] = prev;
  for (size_t j = 1; j <= d.size(); ++j) {
    Scalar a2j = d[j - 1] - prev;        // alpha_{2j}
    alphas[2 * j - 1] = a2j;
    if (j < d.size()) {
      prev = c[j] - a2j;                 // alpha_{2j+1}
      alphas[2 * j] = prev;
    }
  }
  return alphas;
}

std::vector<Scalar> composition_alphas(const SplittingScheme& s) {
  switch (s.variant) {
    case SchemeVariant::trotter_composition: return s.alphas;
    case SchemeVariant::strang_composition: {
      std::vector<Scalar> a;
      a.reserve(2 * s.gammas.size());
      for (const auto& g : s.gammas) {
        Scalar half = g / Scalar(2);
        a.push_back(half);
        a.push_back(half);
      }
      return a;
    }
    case SchemeVariant::two_term: return twoterm_to_composition(s.c, s.d);
    case SchemeVariant::general_splitting:
      throw invalid_scheme_error(
          "general splitting has no composition representation");
  }
  throw std::logic_error("unreachable");
}

SplittingScheme as_twoterm(const SplittingScheme& s) {
  if (s.variant == SchemeVariant::two_term) return s;
  if (s.num_operators != 2)
    throw invalid_scheme_error("two-term view requires N = 2");
  SplittingScheme t = composition_to_twoterm(composition_alphas(s));
  t.claimed_order = s.claimed_order;
  t.name = s.name;
  return t;
}

SplittingScheme catalog(const std::string& name) {
  SplittingScheme s;
  s.name = name;
  if (name == "lie_trotter") {
    s.variant = SchemeVariant::trotter_composition;
    s.alphas = {Scalar(0), Scalar(1)};
    s.claimed_order = 1;
  } else if (name == "strang") {
    s.variant = SchemeVariant::strang_composition;
    s.gammas = {Scalar(1)};
    s.claimed_order = 2;
  } else if (name == "triple_jump") {
    s.variant = SchemeVariant::strang_composition;
    double g = 1.0 / (2.0 - std::cbrt(2.0));
    s.gammas = {Scalar::real(g), Scalar::real(1.0 - 2.0 * g), Scalar::real(g)};
    s.claimed_order = 4;
  } else if (name == "quintuple_jump") {
    s.variant = SchemeVariant::strang_composition;
    double g = 1.0 / (4.0 - std::cbrt(4.0));
    s.gammas = {Scalar::real(g), Scalar::real(g), Scalar::real(1.0 - 4.0 * g),
                Scalar::real(g), Scalar::real(g)};
    s.claimed_order = 4;
  } else {
    std::string known;
    for (const auto& n : catalog_names()) known += " " + n;
    throw invalid_scheme_error("unknown catalog scheme '" + name +
                               "'; available:" + known);
  }
  return s;
}

std::vector<std::string> catalog_names() {
  return {"lie_trotter", "strang", "triple_jump", "quintuple_jump"};
}

namespace {

using nlohmann::json;

json scalar_to_json(const Scalar& s) {
  if (s.exact()) {
    if (s.den() == 1 && std::llabs(s.num()) < (1ll << 53)) return json(s.num());
    return json{{"num", s.num()}, {"den", s.den()}};
  }
  return json(s.value());
}

Scalar scalar_from_json(const json& j) {
  if (j.is_number_integer()) return Scalar((long long)j.get<long long>());
  if (j.is_number()) return Scalar::real(j.get<double>());
  if (j.is_string()) return Scalar::real(std::stod(j.get<std::string>()));
  if (j.is_object() && j.contains("num") && j.contains("den"))
    return Scalar::rational(j["num"].get<long long>(),
                            j["den"].get<long long>());
  throw invalid_scheme_error("cannot parse coefficient: " + j.dump());
}

json scalars_to_json(const std::vector<Scalar>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(scalar_to_json(x));
  return arr;
}

std::vector<Scalar> scalars_from_json(const json& j, const std::string& field) {
  if (!j.is_array())
    throw invalid_scheme_error("field '" + field + "' must be an array");
  std::vector<Scalar> v;
  for (const auto& x : j) v.push_back(scalar_from_json(x));
  return v;
}

}  // namespace

std::string scheme_to_json(const SplittingScheme& s) {
  json j;
  j["variant"] = variant_name(s.variant);
  j["N"] = s.num_operators;
  j["order"] = s.claimed_order;
  j["name"] = s.name;
  switch (s.variant) {
    case SchemeVariant::general_splitting: {
      json rows = json::array();
      for (const auto& row : s.stage_coeffs) rows.push_back(scalars_to_json(row));
      j["coefficients"] = rows;
      break;
    }
    case SchemeVariant::trotter_composition:
      j["coefficients"] = scalars_to_json(s.alphas);
      break;
    case SchemeVariant::strang_composition:
      j["coefficients"] = scalars_to_json(s.gammas);
      break;
    case SchemeVariant::two_term:
      j["coefficients"] = json{{"c", scalars_to_json(s.c)},
                               {"d", scalars_to_json(s.d)}};
      break;
  }
  return j.dump(2);
}

SplittingScheme scheme_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw invalid_scheme_error(std::string("scheme file is not valid JSON: ") +
                               e.what());
  }
  for (const char* field : {"variant", "coefficients", "order"})
    if (!j.contains(field))
      throw invalid_scheme_error(std::string("scheme file missing field '") +
                                 field + "'");
  SplittingScheme s;
  s.variant = variant_from_name(j["variant"].get<std::string>());
  s.num_operators = j.value("N", 2);
  s.claimed_order = j["order"].get<int>();
  s.name = j.value("name", std::string());
  const json& co = j["coefficients"];
  switch (s.variant) {
    case SchemeVariant::general_splitting:
      if (!co.is_array())
        throw invalid_scheme_error("field 'coefficients' must be an array");
      for (const auto& row : co)
        s.stage_coeffs.push_back(scalars_from_json(row, "coefficients"));
      break;
    case SchemeVariant::trotter_composition:
      s.alphas = scalars_from_json(co, "coefficients");
      break;
    case SchemeVariant::strang_composition:
      s.gammas = scalars_from_json(co, "coefficients");
      break;
    case SchemeVariant::two_term:
      if (!co.is_object() || !co.contains("c") || !co.contains("d"))
        throw invalid_scheme_error(
            "field 'coefficients' must hold arrays 'c' and 'd'");
      s.c = scalars_from_json(co["c"], "coefficients.c");
      s.d = scalars_from_json(co["d"], "coefficients.d");
      break;
  }
  return s;
}

SplittingScheme load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_scheme_error("cannot open scheme file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scheme_from_json(buf.str());
}

}  // namespace splitbound
