#include "kgprox/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace kgprox {

void RandomizationConfig::validate() const {
  if (iterations < 2)
    throw InvalidConfig("randomization needs >= 2 iterations (SD undefined)");
  if (bin_floor < 1) throw InvalidConfig("bin_floor must be positive");
}

std::string_view to_string(RandomizationConfig::NullModel m) {
  return m == RandomizationConfig::NullModel::uniform_by_type
             ? "uniform_by_type"
             : "degree_binned";
}

std::optional<RandomizationConfig::NullModel>
parse_null_model(std::string_view token) {
  if (token == "uniform_by_type")
    return RandomizationConfig::NullModel::uniform_by_type;
  if (token == "degree_binned")
    return RandomizationConfig::NullModel::degree_binned;
  return std::nullopt;
}

std::string_view to_string(LccMode m) {
  return m == LccMode::induced ? "induced" : "shared_neighbor";
}

std::optional<LccMode> parse_lcc_mode(std::string_view token) {
  if (token == "induced") return LccMode::induced;
  if (token == "shared_neighbor") return LccMode::shared_neighbor;
  return std::nullopt;
}

std::string_view to_string(SeparationConvention c) {
  return c == SeparationConvention::all_pairs ? "all_pairs"
                                              : "nearest_neighbor";
}

std::optional<SeparationConvention>
parse_separation_convention(std::string_view token) {
  if (token == "all_pairs") return SeparationConvention::all_pairs;
  if (token == "nearest_neighbor") return SeparationConvention::nearest_neighbor;
  return std::nullopt;
}

std::vector<uint32_t> sample_without_replacement(SplitMix64& rng, uint32_t n,
                                                 uint32_t k) {
  // Floyd's algorithm: k distinct values with exactly k RNG draws.
  std::unordered_set<uint32_t> chosen;
  chosen.reserve(k * 2);
  for (uint32_t j = n - k; j < n; ++j) {
    uint32_t t = static_cast<uint32_t>(rng.below(j + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<uint32_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void parallel_for(uint32_t count, uint32_t threads,
                  const std::function<void(uint32_t)>& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2 * threads) {
    for (uint32_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<uint32_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (uint32_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (uint32_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

constexpr int32_t kMaskedRow = -2;

} // namespace

DistanceOracle::DistanceOracle(const KnowledgeGraph& graph, TypeMask mask)
    : graph_(graph), mask_(mask), n_(graph.node_count()) {
  allowed_.resize(n_);
  for (NodeIndex i = 0; i < n_; ++i)
    allowed_[i] = mask_.allows(graph_.entity(i).type);

  dist_.assign(n_ * n_, kMaskedRow);
  std::vector<NodeIndex> queue(n_);
  for (NodeIndex src = 0; src < n_; ++src) {
    if (!allowed_[src]) continue;
    int32_t* row = dist_.data() + static_cast<size_t>(src) * n_;
    for (size_t j = 0; j < n_; ++j) row[j] = allowed_[j] ? kUnreachable : kMaskedRow;
    row[src] = 0;
    size_t head = 0, tail = 0;
    queue[tail++] = src;
    while (head < tail) {
      NodeIndex u = queue[head++];
      int32_t du = row[u];
      for (const auto& e : graph_.adjacency(u)) {
        if (row[e.to] != kUnreachable) continue;
        row[e.to] = du + 1;
        queue[tail++] = e.to;
      }
    }
  }
}

int32_t DistanceOracle::distance(NodeIndex a, NodeIndex b) const {
  if (a >= n_ || b >= n_)
    throw UnknownNode("node index out of range");
  if (!allowed_[a])
    throw MaskedNode("node '" + graph_.entity(a).id +
                     "' is excluded by the type mask");
  if (!allowed_[b])
    throw MaskedNode("node '" + graph_.entity(b).id +
                     "' is excluded by the type mask");
  return dist_[static_cast<size_t>(a) * n_ + b];
}

int32_t shortest_path_length(const DistanceOracle& oracle, NodeIndex a,
                             NodeIndex b) {
  return oracle.distance(a, b);
}

namespace {

struct UnionFind {
  std::vector<uint32_t> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void merge(uint32_t a, uint32_t b) { parent[find(a)] = find(b); }
};

} // namespace

uint32_t lcc_size(const KnowledgeGraph& graph, const NodeModule& module,
                  LccMode mode, const TypeMask& mask) {
  const auto& members = module.members;
  for (NodeIndex m : members) {
    if (m >= graph.node_count())
      throw UnknownNode("module member index out of range");
  }
  if (members.empty()) return 0;

  std::unordered_set<NodeIndex> member_set(members.begin(), members.end());
  UnionFind uf(members.size());

  if (mode == LccMode::induced) {
    for (size_t i = 0; i < members.size(); ++i) {
      for (const auto& e : graph.adjacency(members[i])) {
        auto it = std::lower_bound(members.begin(), members.end(), e.to);
        if (it != members.end() && *it == e.to)
          uf.merge(static_cast<uint32_t>(i),
                   static_cast<uint32_t>(it - members.begin()));
      }
    }
  } else {
    // Mask-allowed neighbors outside the set, per member, sorted.
    std::vector<std::vector<NodeIndex>> outside(members.size());
    for (size_t i = 0; i < members.size(); ++i) {
      for (const auto& e : graph.adjacency(members[i])) {
        if (!mask.allows(graph.entity(e.to).type)) continue;
        if (member_set.count(e.to)) continue;
        outside[i].push_back(e.to);
      }
    }
    for (size_t i = 0; i < members.size(); ++i) {
      for (size_t j = i + 1; j < members.size(); ++j) {
        const auto& a = outside[i];
        const auto& b = outside[j];
        size_t x = 0, y = 0;
        while (x < a.size() && y < b.size()) {
          if (a[x] < b[y]) ++x;
          else if (b[y] < a[x]) ++y;
          else {
            uf.merge(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
            break;
          }
        }
      }
    }
  }

  std::unordered_map<uint32_t, uint32_t> sizes;
  uint32_t best = 0;
  for (size_t i = 0; i < members.size(); ++i)
    best = std::max(best, ++sizes[uf.find(static_cast<uint32_t>(i))]);
  return best;
}

namespace {

// Finalize a z-score from per-iteration null values (NaN = invalid draw).
ZScoreResult finish_zscore(double observed,
                           const std::vector<double>& null_values,
                           const RandomizationConfig& cfg,
                           const char* what) {
  ZScoreResult r;
  r.observed = observed;
  r.iterations = cfg.iterations;
  r.seed = cfg.seed;
  double sum = 0.0;
  uint32_t valid = 0;
  for (double v : null_values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++valid;
  }
  r.invalid_iterations = cfg.iterations - valid;
  if (valid < 2)
    throw DegenerateNull(std::string(what) +
                             ": fewer than 2 valid null iterations",
                         observed, valid ? sum : std::nan(""));
  r.mu = sum / valid;
  double ss = 0.0;
  for (double v : null_values) {
    if (std::isnan(v)) continue;
    double d = v - r.mu;
    ss += d * d;
  }
  r.sigma = std::sqrt(ss / valid); // population SD, z-score convention
  if (r.sigma == 0.0) {
    if (std::abs(observed - r.mu) <= 1e-12 * std::max(1.0, std::abs(r.mu))) {
      r.z = 0.0; // null always equals the observation
      return r;
    }
    throw DegenerateNull(std::string(what) + ": null SD is zero", observed,
                         r.mu);
  }
  r.z = (observed - r.mu) / r.sigma;
  return r;
}

// Same-size random node sets per null model. Pools and bins are prepared
// once; each draw uses only its own RNG stream.
class NullSampler {
public:
  NullSampler(const KnowledgeGraph& graph, const TypeMask& mask,
              std::vector<NodeIndex> pool,
              const std::vector<NodeIndex>& observed,
              RandomizationConfig::NullModel model, uint32_t bin_floor)
      : pool_(std::move(pool)) {
    if (pool_.size() < observed.size())
      throw InsufficientPopulation(
          "null population (" + std::to_string(pool_.size()) +
          ") smaller than module size (" + std::to_string(observed.size()) +
          ")");
    k_ = static_cast<uint32_t>(observed.size());
    if (model == RandomizationConfig::NullModel::uniform_by_type) return;

    // Degree bins: pool sorted by (degree, node), greedy groups of
    // >= bin_floor, short tail merged into the previous bin.
    degree_binned_ = true;
    std::vector<std::pair<size_t, NodeIndex>> by_degree;
    by_degree.reserve(pool_.size());
    for (NodeIndex n : pool_) by_degree.emplace_back(graph.degree(n, mask), n);
    std::sort(by_degree.begin(), by_degree.end());
    std::vector<size_t> starts;
    for (size_t i = 0; i < by_degree.size(); i += bin_floor)
      starts.push_back(i);
    if (starts.size() > 1 && by_degree.size() - starts.back() < bin_floor)
      starts.pop_back();
    starts.push_back(by_degree.size());
    bin_nodes_.resize(starts.size() - 1);
    for (size_t b = 0; b + 1 < starts.size(); ++b) {
      for (size_t i = starts[b]; i < starts[b + 1]; ++i) {
        bin_nodes_[b].push_back(by_degree[i].second);
        node_bin_[by_degree[i].second] = b;
      }
    }
    for (NodeIndex n : observed) {
      auto it = node_bin_.find(n);
      if (it == node_bin_.end())
        throw InsufficientPopulation("module member '" +
                                     graph.entity(n).id +
                                     "' missing from the null population");
      member_bins_.push_back(it->second);
    }
  }

  std::vector<NodeIndex> draw(SplitMix64& rng) const {
    if (!degree_binned_) {
      auto idx = sample_without_replacement(
          rng, static_cast<uint32_t>(pool_.size()), k_);
      std::vector<NodeIndex> out;
      out.reserve(k_);
      for (uint32_t i : idx) out.push_back(pool_[i]);
      return out;
    }
    std::unordered_set<NodeIndex> used;
    std::vector<NodeIndex> out;
    out.reserve(k_);
    for (size_t bin : member_bins_) {
      const auto& candidates = bin_nodes_[bin];
      NodeIndex picked = std::numeric_limits<NodeIndex>::max();
      for (int attempt = 0; attempt < 64; ++attempt) {
        NodeIndex c = candidates[rng.below(candidates.size())];
        if (!used.count(c)) {
          picked = c;
          break;
        }
      }
      if (picked == std::numeric_limits<NodeIndex>::max()) {
        // Bin saturated: deterministic scan from a random offset, widening
        // to the whole pool when the bin is exhausted.
        size_t off = rng.below(candidates.size());
        for (size_t i = 0; i < candidates.size(); ++i) {
          NodeIndex c = candidates[(off + i) % candidates.size()];
          if (!used.count(c)) {
            picked = c;
            break;
          }
        }
      }
      if (picked == std::numeric_limits<NodeIndex>::max()) {
        size_t off = rng.below(pool_.size());
        for (size_t i = 0; i < pool_.size(); ++i) {
          NodeIndex c = pool_[(off + i) % pool_.size()];
          if (!used.count(c)) {
            picked = c;
            break;
          }
        }
      }
      used.insert(picked);
      out.push_back(picked);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  std::vector<NodeIndex> pool_;
  uint32_t k_ = 0;
  bool degree_binned_ = false;
  std::vector<std::vector<NodeIndex>> bin_nodes_;
  std::unordered_map<NodeIndex, size_t> node_bin_;
  std::vector<size_t> member_bins_;
};

void require_nonempty(const NodeModule& m, const char* role) {
  if (m.empty())
    throw InvalidConfig(std::string("module ") + role +
                        " is empty; metrics need nonempty modules");
}

} // namespace

ZScoreResult lcc_zscore(const KnowledgeGraph& graph, const NodeModule& module,
                        LccMode mode, const TypeMask& mask,
                        const RandomizationConfig& cfg) {
  cfg.validate();
  require_nonempty(module, "A");
  double observed = lcc_size(graph, module, mode, mask);

  NullSampler sampler(graph, mask, graph.nodes_of_type(module.member_type),
                      module.members, cfg.null_model, cfg.bin_floor);

  std::vector<double> null_values(cfg.iterations);
  parallel_for(cfg.iterations, cfg.threads, [&](uint32_t i) {
    SplitMix64 rng(mix_stream(cfg.seed, i));
    NodeModule random_set;
    random_set.member_type = module.member_type;
    random_set.members = sampler.draw(rng);
    null_values[i] = lcc_size(graph, random_set, mode, mask);
  });
  return finish_zscore(observed, null_values, cfg, "lcc_zscore");
}

ValueWithSkips network_distance(const DistanceOracle& oracle,
                                const NodeModule& a, const NodeModule& b,
                                DistancePolicy policy) {
  require_nonempty(a, "A");
  require_nonempty(b, "B");
  double sum = 0.0;
  uint64_t used = 0, skipped = 0;
  for (NodeIndex na : a.members) {
    for (NodeIndex nb : b.members) {
      int32_t d = na == nb ? 0 : oracle.distance(na, nb);
      if (d == kUnreachable) {
        if (!policy.skip_unreachable)
          throw UnreachablePair("no path between '" +
                                oracle.graph().entity(na).id + "' and '" +
                                oracle.graph().entity(nb).id + "'");
        ++skipped;
        continue;
      }
      sum += d;
      ++used;
    }
  }
  if (used == 0)
    throw UnreachablePair("every cross pair is unreachable");
  return ValueWithSkips{sum / static_cast<double>(used), skipped};
}

namespace {

// Mean distance within one set; identity pairs never participate.
ValueWithSkips intra_set_mean(const DistanceOracle& oracle,
                              const std::vector<NodeIndex>& members,
                              SeparationConvention convention,
                              DistancePolicy policy) {
  double sum = 0.0;
  uint64_t used = 0, skipped = 0;
  if (convention == SeparationConvention::all_pairs) {
    for (size_t i = 0; i < members.size(); ++i) {
      for (size_t j = i + 1; j < members.size(); ++j) {
        int32_t d = oracle.distance(members[i], members[j]);
        if (d == kUnreachable) {
          if (!policy.skip_unreachable)
            throw UnreachablePair("unreachable intra-set pair");
          ++skipped;
          continue;
        }
        sum += d;
        ++used;
      }
    }
  } else {
    for (size_t i = 0; i < members.size(); ++i) {
      int32_t best = kUnreachable;
      for (size_t j = 0; j < members.size(); ++j) {
        if (i == j) continue;
        int32_t d = oracle.distance(members[i], members[j]);
        if (d == kUnreachable) continue;
        if (best == kUnreachable || d < best) best = d;
      }
      if (best == kUnreachable) {
        if (!policy.skip_unreachable)
          throw UnreachablePair("node with no reachable same-set neighbor");
        ++skipped;
        continue;
      }
      sum += best;
      ++used;
    }
  }
  if (used == 0) throw UnreachablePair("intra-set mean has no valid pairs");
  return ValueWithSkips{sum / static_cast<double>(used), skipped};
}

} // namespace

ValueWithSkips separation(const DistanceOracle& oracle, const NodeModule& a,
                          const NodeModule& b,
                          SeparationConvention convention,
                          DistancePolicy policy) {
  require_nonempty(a, "A");
  require_nonempty(b, "B");
  if (a.size() < 2 || b.size() < 2)
    throw SingletonSet("separation needs >= 2 nodes per set (|A|=" +
                       std::to_string(a.size()) + ", |B|=" +
                       std::to_string(b.size()) + ")");

  double cross_sum = 0.0;
  uint64_t cross_used = 0, skipped = 0;
  for (NodeIndex na : a.members) {
    for (NodeIndex nb : b.members) {
      if (na == nb) continue; // identity pairs excluded; S(A, A) = 0
      int32_t d = oracle.distance(na, nb);
      if (d == kUnreachable) {
        if (!policy.skip_unreachable)
          throw UnreachablePair("unreachable cross-set pair");
        ++skipped;
        continue;
      }
      cross_sum += d;
      ++cross_used;
    }
  }
  if (cross_used == 0)
    throw UnreachablePair("every cross-set pair is unreachable");
  double cross_mean = cross_sum / static_cast<double>(cross_used);

  ValueWithSkips daa = intra_set_mean(oracle, a.members, convention, policy);
  ValueWithSkips dbb = intra_set_mean(oracle, b.members, convention, policy);
  return ValueWithSkips{cross_mean - (daa.value + dbb.value) / 2.0,
                        skipped + daa.skipped + dbb.skipped};
}

namespace {

// Proximity core shared with the null loop: NaN when no source reaches B
// and skipping is allowed.
double proximity_mean(const DistanceOracle& oracle,
                      const std::vector<NodeIndex>& a,
                      const std::vector<NodeIndex>& b, bool skip_unreachable,
                      uint64_t* skipped_out) {
  double sum = 0.0;
  uint64_t used = 0, skipped = 0;
  for (NodeIndex na : a) {
    int32_t best;
    if (std::binary_search(b.begin(), b.end(), na)) {
      best = 0;
    } else {
      best = kUnreachable;
      for (NodeIndex nb : b) {
        int32_t d = oracle.distance(na, nb);
        if (d == kUnreachable) continue;
        if (best == kUnreachable || d < best) best = d;
      }
    }
    if (best == kUnreachable) {
      if (!skip_unreachable)
        throw UnreachableSource("source '" + oracle.graph().entity(na).id +
                                "' reaches no node of B");
      ++skipped;
      continue;
    }
    sum += best;
    ++used;
  }
  if (skipped_out) *skipped_out = skipped;
  if (used == 0) return std::nan("");
  return sum / static_cast<double>(used);
}

} // namespace

ValueWithSkips proximity_distance(const DistanceOracle& oracle,
                                  const NodeModule& a, const NodeModule& b,
                                  DistancePolicy policy) {
  require_nonempty(a, "A");
  require_nonempty(b, "B");
  uint64_t skipped = 0;
  double v = proximity_mean(oracle, a.members, b.members,
                            policy.skip_unreachable, &skipped);
  if (std::isnan(v))
    throw UnreachableSource("no source in A reaches any node of B");
  return ValueWithSkips{v, skipped};
}

ZScoreResult proximity_zscore(const DistanceOracle& oracle,
                              const NodeModule& a, const NodeModule& b,
                              const RandomizationConfig& cfg,
                              DistancePolicy policy) {
  cfg.validate();
  double observed = proximity_distance(oracle, a, b, policy).value;

  const KnowledgeGraph& graph = oracle.graph();
  auto masked_pool = [&](EntityType t) {
    std::vector<NodeIndex> pool;
    for (NodeIndex n : graph.nodes_of_type(t))
      if (oracle.allowed(n)) pool.push_back(n);
    return pool;
  };
  NullSampler sampler_a(graph, oracle.mask(), masked_pool(a.member_type),
                        a.members, cfg.null_model, cfg.bin_floor);
  NullSampler sampler_b(graph, oracle.mask(), masked_pool(b.member_type),
                        b.members, cfg.null_model, cfg.bin_floor);

  std::vector<double> null_values(cfg.iterations);
  parallel_for(cfg.iterations, cfg.threads, [&](uint32_t i) {
    SplitMix64 rng(mix_stream(cfg.seed, i));
    auto ra = sampler_a.draw(rng);
    auto rb = sampler_b.draw(rng);
    // Unreachable sources are always skipped inside the null; a draw with
    // no reachable source at all is discarded and counted.
    null_values[i] = proximity_mean(oracle, ra, rb, true, nullptr);
  });
  return finish_zscore(observed, null_values, cfg, "proximity_zscore");
}

} // namespace kgprox
