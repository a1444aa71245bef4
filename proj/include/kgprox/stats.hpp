#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgprox/graph.hpp"

namespace kgprox {

// Binary incidence of focal entities (rows) against their predicate-linked
// neighbors (columns). Row and column orders are the sorted entity ids, so
// equal graphs produce identical matrices.
class AssociationMatrix {
public:
  enum class IcMode { unit, neg_log_freq };

  // Rows: row_type entities with >=1 triple of `predicate`; columns: the
  // col_type entities appearing in those triples.
  static AssociationMatrix from_graph(const KnowledgeGraph& graph,
                                      Predicate predicate,
                                      EntityType row_type,
                                      EntityType col_type);

  static AssociationMatrix from_incidence(
      std::vector<std::string> row_ids, std::vector<std::string> col_ids,
      const std::vector<std::vector<uint8_t>>& cells);

  AssociationMatrix transposed() const;

  size_t row_count() const { return rows_.size(); }
  size_t col_count() const { return col_ids_.size(); }
  const std::vector<std::string>& row_ids() const { return row_ids_; }
  const std::vector<std::string>& col_ids() const { return col_ids_; }

  size_t require_row(const std::string& id) const; // throws UnknownRow
  size_t require_col(const std::string& id) const;

  // Sorted column indices with incidence 1.
  const std::vector<uint32_t>& row_support(size_t r) const {
    return rows_.at(r);
  }
  uint32_t col_sum(size_t c) const { return col_sums_.at(c); }
  uint32_t row_sum(size_t r) const {
    return static_cast<uint32_t>(rows_.at(r).size());
  }

  // |T_g1 & T_g2|
  uint64_t co_count(size_t r1, size_t r2) const;

  // RR = C12 * N / (P1 * P2) over columns; 1 under independence.
  double relative_risk(size_t c1, size_t c2) const;

  // Shared-information-content ratio over row supports. `unit` reduces to
  // the Dice coefficient; `neg_log_freq` weighs columns by -log2(P/N) with
  // per-row IC sums in the denominator.
  double semantic_similarity(size_t r1, size_t r2, IcMode mode) const;

  void write_csv(std::ostream& out) const;

private:
  std::vector<std::string> row_ids_;
  std::vector<std::string> col_ids_;
  std::vector<std::vector<uint32_t>> rows_;
  std::vector<uint32_t> col_sums_;
};

std::string_view to_string(AssociationMatrix::IcMode m);
std::optional<AssociationMatrix::IcMode> parse_ic_mode(std::string_view token);

struct CorrelationResult {
  double r = 0.0;
  size_t n = 0;
  std::optional<double> p; // two-sided, present only when n >= 3
};

// Sample Pearson correlation with an analytic two-sided p-value from the
// t statistic via the regularized incomplete beta function.
CorrelationResult pearson(std::span<const double> xs,
                          std::span<const double> ys);

// I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Two-sided p for sample correlation r at sample size n.
double pearson_pvalue(size_t n, double r);

} // namespace kgprox
