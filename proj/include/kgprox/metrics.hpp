#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kgprox/graph.hpp"
#include "kgprox/rng.hpp"

namespace kgprox {

// Governs every Monte-Carlo metric. Per-iteration RNG streams are derived
// as mix(seed, i), so results are bitwise-reproducible at any thread count.
struct RandomizationConfig {
  uint32_t iterations = 1000; // must be >= 2 so the SD is defined
  uint64_t seed = 0;
  enum class NullModel { uniform_by_type, degree_binned };
  NullModel null_model = NullModel::uniform_by_type;
  uint32_t bin_floor = 10; // degree_binned only
  uint32_t threads = 1;

  void validate() const;
};

std::string_view to_string(RandomizationConfig::NullModel m);
std::optional<RandomizationConfig::NullModel>
parse_null_model(std::string_view token);

inline constexpr int32_t kUnreachable = -1;

// Precomputed BFS hop counts on the masked undirected view. Read-only and
// thread-safe after construction.
class DistanceOracle {
public:
  DistanceOracle(const KnowledgeGraph& graph, TypeMask mask);

  // kUnreachable when no path exists. Throws MaskedNode if either endpoint
  // is excluded by the mask.
  int32_t distance(NodeIndex a, NodeIndex b) const;

  bool allowed(NodeIndex n) const { return allowed_.at(n); }
  const TypeMask& mask() const { return mask_; }
  const KnowledgeGraph& graph() const { return graph_; }

private:
  const KnowledgeGraph& graph_;
  TypeMask mask_;
  std::vector<bool> allowed_;
  std::vector<int32_t> dist_; // n*n, row-major; -2 marks masked rows
  size_t n_;
};

int32_t shortest_path_length(const DistanceOracle& oracle, NodeIndex a,
                             NodeIndex b);

enum class LccMode { induced, shared_neighbor };
std::string_view to_string(LccMode m);
std::optional<LccMode> parse_lcc_mode(std::string_view token);

// Size of the largest connected component of the module-internal graph.
// induced: only direct edges among members. shared_neighbor: two members
// connect iff they share >=1 mask-allowed graph neighbor outside the set.
uint32_t lcc_size(const KnowledgeGraph& graph, const NodeModule& module,
                  LccMode mode, const TypeMask& mask);

struct ZScoreResult {
  double observed = 0.0;
  double mu = 0.0;
  double sigma = 0.0; // population SD over null iterations
  double z = 0.0;
  uint32_t iterations = 0;
  uint32_t invalid_iterations = 0; // null draws with no defined value
  uint64_t seed = 0;
};

ZScoreResult lcc_zscore(const KnowledgeGraph& graph, const NodeModule& module,
                        LccMode mode, const TypeMask& mask,
                        const RandomizationConfig& cfg);

struct DistancePolicy {
  bool skip_unreachable = false;
};

struct ValueWithSkips {
  double value = 0.0;
  uint64_t skipped = 0; // unreachable pairs/sources dropped from the mean
};

// Mean over all ordered cross pairs; nodes shared by A and B
// contribute d = 0.
ValueWithSkips network_distance(const DistanceOracle& oracle,
                                const NodeModule& a, const NodeModule& b,
                                DistancePolicy policy = {});

enum class SeparationConvention { all_pairs, nearest_neighbor };
std::string_view to_string(SeparationConvention c);
std::optional<SeparationConvention>
parse_separation_convention(std::string_view token);

// S = <d_ab> - (<d_aa> + <d_bb>)/2. The cross mean excludes identity pairs
// (the same node appearing in both sets), which makes S(A, A) = 0 exactly.
ValueWithSkips separation(const DistanceOracle& oracle, const NodeModule& a,
                          const NodeModule& b,
                          SeparationConvention convention,
                          DistancePolicy policy = {});

// Mean over a in A of the distance to its closest b in B; asymmetric.
ValueWithSkips proximity_distance(const DistanceOracle& oracle,
                                  const NodeModule& a, const NodeModule& b,
                                  DistancePolicy policy = {});

ZScoreResult proximity_zscore(const DistanceOracle& oracle,
                              const NodeModule& a, const NodeModule& b,
                              const RandomizationConfig& cfg,
                              DistancePolicy policy = {});

} // namespace kgprox
