#include "kgprox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "kgprox/kernels.hpp"

namespace kgprox {

std::string_view to_string(AssociationMatrix::IcMode m) {
  return m == AssociationMatrix::IcMode::unit ? "unit" : "neg_log_freq";
}

std::optional<AssociationMatrix::IcMode> parse_ic_mode(std::string_view token) {
  if (token == "unit") return AssociationMatrix::IcMode::unit;
  if (token == "neg_log_freq") return AssociationMatrix::IcMode::neg_log_freq;
  return std::nullopt;
}

AssociationMatrix AssociationMatrix::from_graph(const KnowledgeGraph& graph,
                                                Predicate predicate,
                                                EntityType row_type,
                                                EntityType col_type) {
  // (row id, col id) incidences of the predicate, in either triple
  // direction.
  std::map<std::string, std::set<std::string>> incidence;
  for (const Triple& t : graph.triples()) {
    if (t.predicate != predicate) continue;
    const Entity& h = graph.entity(t.head);
    const Entity& tl = graph.entity(t.tail);
    if (h.type == row_type && tl.type == col_type)
      incidence[h.id].insert(tl.id);
    else if (tl.type == row_type && h.type == col_type)
      incidence[tl.id].insert(h.id);
  }

  std::set<std::string> cols;
  for (const auto& [row, support] : incidence)
    cols.insert(support.begin(), support.end());

  AssociationMatrix m;
  m.col_ids_.assign(cols.begin(), cols.end());
  std::map<std::string, uint32_t> col_index;
  for (uint32_t c = 0; c < m.col_ids_.size(); ++c)
    col_index[m.col_ids_[c]] = c;
  m.col_sums_.assign(m.col_ids_.size(), 0);
  for (const auto& [row, support] : incidence) {
    m.row_ids_.push_back(row);
    std::vector<uint32_t> idx;
    idx.reserve(support.size());
    for (const std::string& c : support) {
      uint32_t ci = col_index.at(c);
      idx.push_back(ci);
      ++m.col_sums_[ci];
    }
    m.rows_.push_back(std::move(idx));
  }
  return m;
}

AssociationMatrix AssociationMatrix::from_incidence(
    std::vector<std::string> row_ids, std::vector<std::string> col_ids,
    const std::vector<std::vector<uint8_t>>& cells) {
  AssociationMatrix m;
  m.row_ids_ = std::move(row_ids);
  m.col_ids_ = std::move(col_ids);
  m.col_sums_.assign(m.col_ids_.size(), 0);
  if (cells.size() != m.row_ids_.size())
    throw DimensionMismatch("incidence rows do not match row ids");
  for (const auto& row : cells) {
    if (row.size() != m.col_ids_.size())
      throw DimensionMismatch("incidence row width does not match col ids");
    std::vector<uint32_t> idx;
    for (uint32_t c = 0; c < row.size(); ++c) {
      if (row[c]) {
        idx.push_back(c);
        ++m.col_sums_[c];
      }
    }
    m.rows_.push_back(std::move(idx));
  }
  return m;
}

AssociationMatrix AssociationMatrix::transposed() const {
  AssociationMatrix m;
  m.row_ids_ = col_ids_;
  m.col_ids_ = row_ids_;
  m.rows_.assign(col_ids_.size(), {});
  m.col_sums_.assign(row_ids_.size(), 0);
  for (uint32_t r = 0; r < rows_.size(); ++r) {
    for (uint32_t c : rows_[r]) {
      m.rows_[c].push_back(r);
      ++m.col_sums_[r];
    }
  }
  return m;
}

size_t AssociationMatrix::require_row(const std::string& id) const {
  auto it = std::find(row_ids_.begin(), row_ids_.end(), id);
  if (it == row_ids_.end())
    throw UnknownRow("no matrix row for '" + id + "'");
  return static_cast<size_t>(it - row_ids_.begin());
}

size_t AssociationMatrix::require_col(const std::string& id) const {
  auto it = std::find(col_ids_.begin(), col_ids_.end(), id);
  if (it == col_ids_.end())
    throw UnknownRow("no matrix column for '" + id + "'");
  return static_cast<size_t>(it - col_ids_.begin());
}

uint64_t AssociationMatrix::co_count(size_t r1, size_t r2) const {
  const auto& a = rows_.at(r1);
  const auto& b = rows_.at(r2);
  uint64_t n = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

double AssociationMatrix::relative_risk(size_t c1, size_t c2) const {
  uint64_t p1 = col_sums_.at(c1);
  uint64_t p2 = col_sums_.at(c2);
  if (p1 == 0 || p2 == 0)
    throw ZeroMarginal("relative risk undefined for an empty column");
  uint64_t c12 = 0;
  for (const auto& row : rows_) {
    bool has1 = std::binary_search(row.begin(), row.end(),
                                   static_cast<uint32_t>(c1));
    bool has2 = std::binary_search(row.begin(), row.end(),
                                   static_cast<uint32_t>(c2));
    if (has1 && has2) ++c12;
  }
  return static_cast<double>(c12) * static_cast<double>(rows_.size()) /
         (static_cast<double>(p1) * static_cast<double>(p2));
}

double AssociationMatrix::semantic_similarity(size_t r1, size_t r2,
                                              IcMode mode) const {
  const auto& a = rows_.at(r1);
  const auto& b = rows_.at(r2);
  if (a.empty() && b.empty())
    throw EmptyRows("semantic similarity undefined for two empty supports");

  if (mode == IcMode::unit) {
    return 2.0 * static_cast<double>(co_count(r1, r2)) /
           static_cast<double>(a.size() + b.size());
  }

  double n = static_cast<double>(rows_.size());
  auto ic = [&](uint32_t col) {
    return -std::log2(static_cast<double>(col_sums_[col]) / n);
  };
  double shared = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else {
      shared += ic(a[i]);
      ++i;
      ++j;
    }
  }
  double denom = 0.0;
  for (uint32_t c : a) denom += ic(c);
  for (uint32_t c : b) denom += ic(c);
  if (denom == 0.0) return 0.0; // every shared column is universal
  return 2.0 * shared / denom;
}

void AssociationMatrix::write_csv(std::ostream& out) const {
  out << "row_id";
  for (const std::string& c : col_ids_) out << ',' << c;
  out << '\n';
  for (size_t r = 0; r < rows_.size(); ++r) {
    out << row_ids_[r];
    size_t k = 0;
    for (uint32_t c = 0; c < col_ids_.size(); ++c) {
      bool hit = k < rows_[r].size() && rows_[r][k] == c;
      if (hit) ++k;
      out << ',' << (hit ? 1 : 0);
    }
    out << '\n';
  }
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0))
    throw InvalidConfig("incomplete beta needs positive shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                 a * std::log(x) + b * std::log1p(-x);
  double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double pearson_pvalue(size_t n, double r) {
  if (n < 3) throw InvalidConfig("p-value needs n >= 3");
  double nu = static_cast<double>(n - 2);
  double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  double t2 = r2 * nu / (1.0 - r2);
  return incomplete_beta(nu / 2.0, 0.5, nu / (nu + t2));
}

CorrelationResult pearson(std::span<const double> xs,
                          std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw LengthMismatch("pearson inputs differ in length: " +
                         std::to_string(xs.size()) + " vs " +
                         std::to_string(ys.size()));
  size_t n = xs.size();
  if (n < 2) throw LengthMismatch("pearson needs n >= 2");

  double mx = kernels::sum(xs) / static_cast<double>(n);
  double my = kernels::sum(ys) / static_cast<double>(n);
  std::vector<double> cx(n), cy(n);
  for (size_t i = 0; i < n; ++i) {
    cx[i] = xs[i] - mx;
    cy[i] = ys[i] - my;
  }
  double sxx = kernels::sumsq(cx);
  double syy = kernels::sumsq(cy);
  if (sxx == 0.0 || syy == 0.0)
    throw ConstantInput("pearson undefined for a constant sequence");
  double sxy = kernels::dot(cx, cy);

  CorrelationResult result;
  result.n = n;
  result.r = sxy / std::sqrt(sxx * syy);
  if (n >= 3) result.p = pearson_pvalue(n, result.r);
  return result;
}

} // namespace kgprox
