#include "kgprox/synth.hpp"

#include <cstdio>

#include "kgprox/rng.hpp"

namespace kgprox {

void SyntheticKGConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(p_within) || !prob(p_background))
    throw InvalidConfig("link probabilities must lie in [0, 1]");
  if (clusters > 0 && diseases == 0)
    throw InvalidConfig("clusters require at least one disease");
  if (clusters > 0 && cluster_size > symptoms)
    throw InvalidConfig("cluster_size exceeds symptom count");
  if (clusters > 0 && cluster_size == 0)
    throw InvalidConfig("cluster_size must be positive");
  if (clusters > 0 && cluster_stride == 0)
    throw InvalidConfig("cluster_stride must be positive");
  if (shared_pool > symptoms)
    throw InvalidConfig("shared_pool exceeds symptom count");
  if (shared_per_disease > shared_pool)
    throw InvalidConfig("shared_per_disease exceeds shared_pool");
  if ((primary_exclusive > 0 || shared_per_disease > 0) && diseases == 0)
    throw InvalidConfig("diagnosis tiers require at least one disease");
  if (drugs > 0 && clusters > 0 && drug_cluster_size > drugs)
    throw InvalidConfig("drug_cluster_size exceeds drug count");
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string label(const char* prefix, uint32_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s_%04u", prefix, i);
  return buf;
}

} // namespace

SyntheticKGConfig SyntheticKGConfig::from_json(const nlohmann::json& j) {
  SyntheticKGConfig cfg;
  read_field(j, "diseases", cfg.diseases);
  read_field(j, "symptoms", cfg.symptoms);
  read_field(j, "drugs", cfg.drugs);
  read_field(j, "clusters", cfg.clusters);
  read_field(j, "cluster_size", cfg.cluster_size);
  read_field(j, "cluster_stride", cfg.cluster_stride);
  read_field(j, "p_within", cfg.p_within);
  read_field(j, "p_background", cfg.p_background);
  read_field(j, "drug_cluster_size", cfg.drug_cluster_size);
  read_field(j, "drug_cluster_stride", cfg.drug_cluster_stride);
  read_field(j, "primary_exclusive", cfg.primary_exclusive);
  read_field(j, "shared_pool", cfg.shared_pool);
  read_field(j, "shared_per_disease", cfg.shared_per_disease);
  read_field(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

nlohmann::json SyntheticKGConfig::to_json() const {
  return nlohmann::json{{"diseases", diseases},
                        {"symptoms", symptoms},
                        {"drugs", drugs},
                        {"clusters", clusters},
                        {"cluster_size", cluster_size},
                        {"cluster_stride", cluster_stride},
                        {"p_within", p_within},
                        {"p_background", p_background},
                        {"drug_cluster_size", drug_cluster_size},
                        {"drug_cluster_stride", drug_cluster_stride},
                        {"primary_exclusive", primary_exclusive},
                        {"shared_pool", shared_pool},
                        {"shared_per_disease", shared_per_disease},
                        {"seed", seed}};
}

std::vector<TripleRow> generate_synthetic_rows(const SyntheticKGConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(mix_stream(cfg.seed, 0xC0FFEE));

  std::vector<TripleRow> rows;
  auto link = [&](const std::string& head, EntityType head_type, Predicate p,
                  uint32_t disease) {
    rows.push_back(TripleRow{head, head_type, p, label("disease", disease),
                             EntityType::disease, {}, {}});
  };

  // Planted clusters.
  for (uint32_t c = 0; c < cfg.clusters; ++c) {
    uint32_t disease = c % cfg.diseases;
    uint32_t start = (c * cfg.cluster_stride) % cfg.symptoms;
    for (uint32_t k = 0; k < cfg.cluster_size; ++k) {
      uint32_t s = (start + k) % cfg.symptoms;
      if (rng.unit() < cfg.p_within)
        link(label("symptom", s), EntityType::symptom, Predicate::diagnosis,
             disease);
    }
    if (cfg.drugs > 0) {
      uint32_t dstart = (c * cfg.drug_cluster_stride) % cfg.drugs;
      for (uint32_t k = 0; k < cfg.drug_cluster_size; ++k) {
        uint32_t m = (dstart + k) % cfg.drugs;
        if (rng.unit() < cfg.p_within)
          link(label("drug", m), EntityType::drug, Predicate::treat, disease);
      }
    }
  }

  // Background noise.
  if (cfg.p_background > 0.0) {
    for (uint32_t s = 0; s < cfg.symptoms; ++s) {
      for (uint32_t d = 0; d < cfg.diseases; ++d) {
        if (rng.unit() < cfg.p_background)
          link(label("symptom", s), EntityType::symptom, Predicate::diagnosis,
               d);
      }
    }
    for (uint32_t m = 0; m < cfg.drugs; ++m) {
      for (uint32_t d = 0; d < cfg.diseases; ++d) {
        if (rng.unit() < cfg.p_background)
          link(label("drug", m), EntityType::drug, Predicate::treat, d);
      }
    }
  }

  // Diagnosis tiers.
  for (uint32_t d = 0; d < cfg.diseases; ++d) {
    for (uint32_t k = 0; k < cfg.primary_exclusive; ++k) {
      std::string name = label("disease", d) + "_primary_" + label("symptom", k);
      rows.push_back(TripleRow{name, EntityType::symptom,
                               Predicate::primary_diagnosis,
                               label("disease", d), EntityType::disease,
                               {},
                               {}});
    }
    if (cfg.shared_per_disease > 0) {
      auto picks =
          sample_without_replacement(rng, cfg.shared_pool,
                                     cfg.shared_per_disease);
      for (uint32_t s : picks)
        link(label("symptom", s), EntityType::symptom, Predicate::diagnosis,
             d);
    }
  }

  return rows;
}

KnowledgeGraph generate_synthetic_kg(const SyntheticKGConfig& cfg) {
  auto rows = generate_synthetic_rows(cfg);
  return KnowledgeGraph::from_rows(rows);
}

} // namespace kgprox
