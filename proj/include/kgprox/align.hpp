#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgprox/graph.hpp"

namespace kgprox {

// surface string -> fixed-dimension real vector.
struct EmbeddingTable {
  size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  // UTF-8 text, one record per line: surface<TAB>v1 v2 ... vn
  static EmbeddingTable load_file(const std::string& path);

  // Deterministic fallback when no external model is available: each string
  // maps to its character-bigram count vector over the corpus vocabulary
  // (boundary-padded, so single-character strings are never all-zero).
  static EmbeddingTable char_bigram(std::span<const std::string> corpus);

  bool contains(const std::string& surface) const {
    return vectors.count(surface) > 0;
  }
  const std::vector<double>& require(const std::string& surface) const;
};

// Unicode codepoints of a UTF-8 string; invalid bytes pass through as
// single codepoints.
std::vector<uint32_t> utf8_codepoints(std::string_view s);

// |chars(a) & chars(b)| / |chars(a) | chars(b)| over character sets
// (multiset = true counts multiplicity: sum-min over sum-max).
// Both strings empty -> 1.
double jaccard_text(std::string_view a, std::string_view b,
                    bool multiset = false);

double cosine_sim(std::span<const double> a, std::span<const double> b);

struct SimWeights {
  double text = 0.4;
  double semantic = 0.6;
};

double combined_sim(const std::string& a, const std::string& b,
                    const EmbeddingTable& emb, SimWeights weights = {});

struct AlignmentInput {
  std::string surface;
  EntityType type;
  uint64_t frequency = 1; // how often the surface occurs in the source
};

struct AlignmentResult {
  struct Cluster {
    EntityType type;
    std::string canonical;
    std::vector<std::string> members; // sorted, includes canonical
  };
  std::vector<Cluster> clusters;
  double threshold = 0.0;

  // Canonical surface for (type, surface); identity for unknown surfaces.
  const std::string& canonical(EntityType type,
                               const std::string& surface) const;

  std::map<std::pair<int, std::string>, std::string> canonical_map;
};

// Greedy agglomeration: all same-type pairs with combined_sim >= threshold,
// processed in descending similarity (ties broken lexicographically),
// merged with union-find. Canonical name = highest-frequency surface,
// ties broken lexicographically.
AlignmentResult align(std::span<const AlignmentInput> entities,
                      const EmbeddingTable& emb, double threshold,
                      SimWeights weights = {});

// Alignment report rows: surface,canonical,cluster_id,score
void write_alignment_csv(const AlignmentResult& result,
                         const EmbeddingTable& emb, std::ostream& out,
                         SimWeights weights = {});

// Rewrite every triple of `g` onto canonical entity names and rebuild.
KnowledgeGraph apply_alignment(const KnowledgeGraph& g,
                               const AlignmentResult& result);

} // namespace kgprox
