#pragma once

#include <cstdint>
#include <vector>

#include "kgprox/graph.hpp"

#include "json.hpp"

namespace kgprox {

// Desk-scale validation substrate: a schema-conforming KG with planted
// disease-symptom-drug clusters, optional background noise, and (for the
// diagnosis-tier comparison) exclusive primary-diagnosis symptoms next to
// a broadly shared diagnosis pool.
struct SyntheticKGConfig {
  uint32_t diseases = 10;
  uint32_t symptoms = 150;
  uint32_t drugs = 40;

  // Planted clusters: cluster i centers on disease i % diseases and owns a
  // contiguous symptom block. A stride smaller than the cluster size makes
  // neighboring clusters overlap, which is what gives co-occurrence counts
  // their variance.
  uint32_t clusters = 10;
  uint32_t cluster_size = 8;
  uint32_t cluster_stride = 4;
  double p_within = 0.9;     // member links its cluster disease (diagnosis)
  double p_background = 0.02; // any (symptom|drug, disease) noise link

  // Per-disease drug blocks mirroring the symptom clusters.
  uint32_t drug_cluster_size = 4;
  uint32_t drug_cluster_stride = 2;

  // Diagnosis-tier structure (off by default): every disease gets
  // `primary_exclusive` fresh terminologized symptoms via primary_diagnosis
  // and samples `shared_per_disease` colloquial symptoms from the first
  // `shared_pool` symptoms via diagnosis.
  uint32_t primary_exclusive = 0;
  uint32_t shared_pool = 0;
  uint32_t shared_per_disease = 0;

  uint64_t seed = 0;

  void validate() const;
  static SyntheticKGConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

std::vector<TripleRow> generate_synthetic_rows(const SyntheticKGConfig& cfg);
KnowledgeGraph generate_synthetic_kg(const SyntheticKGConfig& cfg);

} // namespace kgprox
