#include "splitbound/hall_basis.hpp"

#include <sstream>
#include <stdexcept>

namespace splitbound {

namespace {

// degree <= 7 rows of the two-generator Hall basis, E_i = [E_l, E_r]
struct Row {
  int l, r;
};
constexpr Row kFixedRows[] = {
    {1, 2},                                                    // 3
    {3, 2},  {1, 3},                                           // 4-5
    {5, 1},  {4, 2},  {1, 4},                                  // 6-8
    {6, 1},  {7, 2},  {5, 3},  {3, 4},  {1, 7},  {1, 8},       // 9-14
    {9, 1},  {11, 1}, {14, 1}, {10, 2}, {8, 3},  {3, 7},       // 15-20
    {1, 10}, {1, 12}, {1, 13},                                 // 21-23
    {15, 1}, {16, 1}, {17, 1}, {23, 1}, {18, 2}, {11, 3},      // 24-29
    {13, 3}, {7, 4},  {8, 4},  {6, 5},  {5, 8},  {3, 10},      // 30-35
    {3, 12}, {1, 18}, {1, 19}, {1, 20}, {1, 21}, {1, 22},      // 36-41
};

uint32_t concat(uint32_t x, int dx, uint32_t y) { return x | (y << dx); }

void add_scaled(std::map<uint32_t, Scalar>& dst, const Scalar& c,
                const std::map<uint32_t, Scalar>& src) {
  for (const auto& [w, v] : src) {
    Scalar nv = dst.count(w) ? dst[w] + c * v : c * v;
    if (nv.is_zero())
      dst.erase(w);
    else
      dst[w] = nv;
  }
}

void add_scaled(LiePoly& dst, const Scalar& c, const LiePoly& src) {
  for (const auto& [i, v] : src) {
    Scalar nv = dst.count(i) ? dst[i] + c * v : c * v;
    if (nv.is_zero())
      dst.erase(i);
    else
      dst[i] = nv;
  }
}

}  // namespace

int witt_dimension(int n) {
  // Moebius sum over divisors of n, two generators
  static const int mu[] = {0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
  long long total = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    long long pw = 1;
    for (int k = 0; k < n / d; ++k) pw *= 2;
    total += mu[d] * pw;
  }
  return int(total / n);
}

HallBasis::HallBasis(int max_degree) {
  // index 0 unused
  ell_ = {0, 0, 0};
  r_ = {0, 0, 0};
  deg_ = {0, 1, 1};
  in_ideal_ = {false, false, false};
  words_.resize(3);
  words_[1] = {{0u, 1}};  // A
  words_[2] = {{1u, 1}};  // B
  for (const auto& row : kFixedRows) push_row(row.l, row.r);
  built_degree_ = 7;
  if (max_degree > 7) extend_to(max_degree);
}

void HallBasis::push_row(int l, int rr) {
  int i = int(ell_.size());
  ell_.push_back(l);
  r_.push_back(rr);
  deg_.push_back(deg_[l] + deg_[rr]);
  in_ideal_.push_back(i == 7 || in_ideal_[l] || in_ideal_[rr]);
  // expansion [x, y] = xy - yx over associative words
  std::map<uint32_t, long long> exp;
  for (const auto& [wx, cx] : words_[l])
    for (const auto& [wy, cy] : words_[rr]) {
      exp[concat(wx, deg_[l], wy)] += cx * cy;
      exp[concat(wy, deg_[rr], wx)] -= cx * cy;
    }
  std::erase_if(exp, [](const auto& kv) { return kv.second == 0; });
  words_.push_back(std::move(exp));
}

std::vector<int> HallBasis::degree_indices(int n) const {
  std::vector<int> out;
  for (int i = 1; i <= size(); ++i)
    if (deg_[i] == n) out.push_back(i);
  return out;
}

std::string HallBasis::expression(int i) const {
  if (i == 1) return "A";
  if (i == 2) return "B";
  return "[" + expression(ell_[i]) + "," + expression(r_[i]) + "]";
}

const std::map<uint32_t, long long>& HallBasis::words(int i) {
  return words_.at(i);
}

std::map<uint32_t, Scalar> HallBasis::word_bracket(
    const std::map<uint32_t, Scalar>& x, int dx,
    const std::map<uint32_t, Scalar>& y, int dy) const {
  std::map<uint32_t, Scalar> out;
  for (const auto& [wx, cx] : x)
    for (const auto& [wy, cy] : y) {
      Scalar c = cx * cy;
      add_scaled(out, c, {{concat(wx, dx, wy), Scalar(1)}});
      add_scaled(out, -c, {{concat(wy, dy, wx), Scalar(1)}});
    }
  return out;
}

void HallBasis::build_echelon(int n) {
  if (echelon_.count(n)) return;
  auto& rows = echelon_[n];
  for (int i : degree_indices(n)) {
    std::map<uint32_t, Scalar> row;
    for (const auto& [w, c] : words_[i]) row[w] = Scalar(c);
    LiePoly combo{{i, Scalar(1)}};
    // forward-reduce against existing pivots
    for (const auto& er : rows) {
      auto it = row.find(er.pivot);
      if (it == row.end()) continue;
      Scalar c = it->second;
      add_scaled(row, -c, er.row);
      add_scaled(combo, -c, er.combo);
    }
    if (row.empty())
      throw std::logic_error("dependent basis row at degree " +
                             std::to_string(n));
    uint32_t pivot = row.begin()->first;
    Scalar inv = row.begin()->second.inverse();
    for (auto& [w, c] : row) c *= inv;
    for (auto& [j, c] : combo) c *= inv;
    // back-substitute the new pivot out of earlier rows
    for (auto& er : rows) {
      auto it = er.row.find(pivot);
      if (it == er.row.end()) continue;
      Scalar c = it->second;
      add_scaled(er.row, -c, row);
      add_scaled(er.combo, -c, combo);
    }
    rows.push_back({std::move(row), std::move(combo), pivot});
  }
}

LiePoly HallBasis::reduce_words(const std::map<uint32_t, Scalar>& expansion,
                                int n) {
  build_echelon(n);
  std::map<uint32_t, Scalar> rest = expansion;
  LiePoly out;
  for (const auto& er : echelon_.at(n)) {
    auto it = rest.find(er.pivot);
    if (it == rest.end()) continue;
    Scalar c = it->second;
    add_scaled(rest, -c, er.row);
    add_scaled(out, c, er.combo);
  }
  if (!rest.empty())
    throw std::logic_error("expansion is not a Lie element of degree " +
                           std::to_string(n));
  return out;
}

LiePoly HallBasis::bracket(int i, int j) {
  if (i == j) return {};
  if (i < 1 || j < 1 || i > size() || j > size())
    throw std::domain_error("basis index out of range");
  int n = deg_[i] + deg_[j];
  if (n > built_degree_) {
    if (n > kMaxDegree)
      throw extend_basis_error("bracket requires basis degree " +
                               std::to_string(n));
    extend_to(n);
  }
  auto key = std::make_pair(i, j);
  auto cached = bracket_cache_.find(key);
  if (cached != bracket_cache_.end()) return cached->second;
  LiePoly result;
  // fast path: the pair is itself a basis row (or its reversal)
  for (int k = 3; k <= size() && result.empty(); ++k) {
    if (ell_[k] == i && r_[k] == j) result = {{k, Scalar(1)}};
    if (ell_[k] == j && r_[k] == i) result = {{k, Scalar(-1)}};
  }
  if (result.empty()) {
    std::map<uint32_t, Scalar> xi, xj;
    for (const auto& [w, c] : words_[i]) xi[w] = Scalar(c);
    for (const auto& [w, c] : words_[j]) xj[w] = Scalar(c);
    result = reduce_words(word_bracket(xi, deg_[i], xj, deg_[j]), n);
  }
  bracket_cache_.emplace(key, result);
  return result;
}

LiePoly HallBasis::ad(int g, const LiePoly& f) {
  if (g != 1 && g != 2) throw std::domain_error("generator must be 1 or 2");
  LiePoly out;
  for (const auto& [i, c] : f) add_scaled(out, c, bracket(g, i));
  return out;
}

void HallBasis::extend_to(int max_degree) {
  if (max_degree > kMaxDegree)
    throw extend_basis_error("basis capped at degree " +
                             std::to_string(kMaxDegree));
  for (int n = built_degree_ + 1; n <= max_degree; ++n) {
    build_echelon(n);  // seeds the (empty) echelon for this degree
    auto& rows = echelon_[n];
    int need = witt_dimension(n);
    // candidate brackets in (r, l) index order; keep the independent ones
    for (int rr = 1; rr <= size() && int(rows.size()) < need; ++rr) {
      if (deg_[rr] >= n) continue;
      for (int l = 1; l <= size() && int(rows.size()) < need; ++l) {
        if (l == rr || deg_[l] + deg_[rr] != n) continue;
        int cand = int(ell_.size());
        push_row(l, rr);
        std::map<uint32_t, Scalar> row;
        for (const auto& [w, c] : words_[cand]) row[w] = Scalar(c);
        LiePoly combo{{cand, Scalar(1)}};
        for (const auto& er : rows) {
          auto it = row.find(er.pivot);
          if (it == row.end()) continue;
          Scalar c = it->second;
          add_scaled(row, -c, er.row);
          add_scaled(combo, -c, er.combo);
        }
        if (row.empty()) {
          // dependent: discard the candidate row
          ell_.pop_back();
          r_.pop_back();
          deg_.pop_back();
          in_ideal_.pop_back();
          words_.pop_back();
          continue;
        }
        uint32_t pivot = row.begin()->first;
        Scalar inv = row.begin()->second.inverse();
        for (auto& [w, c] : row) c *= inv;
        for (auto& [j, c] : combo) c *= inv;
        for (auto& er : rows) {
          auto it = er.row.find(pivot);
          if (it == er.row.end()) continue;
          Scalar c = it->second;
          add_scaled(er.row, -c, row);
          add_scaled(er.combo, -c, combo);
        }
        rows.push_back({std::move(row), std::move(combo), pivot});
      }
    }
    if (int(rows.size()) != need)
      throw std::logic_error("basis extension failed at degree " +
                             std::to_string(n));
    built_degree_ = n;
  }
}

std::string HallBasis::to_csv() {
  std::ostringstream os;
  os << "index,ell,r,degree,in_ideal,expression,ad_A,ad_B\n";
  auto rules = [&](int g, int i) {
    std::string out;
    if (deg_[i] + 1 <= built_degree_) {
      for (const auto& [k, c] : bracket(g, i)) {
        if (!out.empty()) out += " ";
        out += std::to_string(k) + ":" + c.str();
      }
    }
    return out;
  };
  for (int i = 1; i <= size(); ++i) {
    os << i << "," << (i > 2 ? ell_[i] : 0) << "," << (i > 2 ? r_[i] : 0)
       << "," << deg_[i] << "," << (in_ideal_[i] ? 1 : 0) << ","
       << expression(i) << "," << rules(1, i) << "," << rules(2, i) << "\n";
  }
  return os.str();
}

}  // namespace splitbound
