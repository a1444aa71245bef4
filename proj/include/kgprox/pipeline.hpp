#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgprox/graph.hpp"
#include "kgprox/metrics.hpp"
#include "kgprox/stats.hpp"

#include "json.hpp"

namespace kgprox {

enum class Experiment {
  disease_symptom,
  symptom_disease,
  disease_drug,
  diagnosis_compare,
};

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view token);

struct ExperimentConfig {
  Experiment experiment = Experiment::disease_symptom;
  // Report threshold for "significantly clustered" focal modules. Defaults
  // mirror the per-experiment thresholds this toolkit reports against
  // (1.5, 1.03, 2.9, 1.1) but are plain inputs, not constants.
  double z_threshold = 1.5;
  Predicate predicate = Predicate::diagnosis; // module predicate (ds/sd)
  RandomizationConfig randomization;
  TypeMask mask = TypeMask::default_substrate();
  LccMode lcc_mode = LccMode::shared_neighbor;
  SeparationConvention separation_convention = SeparationConvention::all_pairs;
  AssociationMatrix::IcMode ic_mode = AssociationMatrix::IcMode::unit;
  // Pairwise tables keep only finite distances; unreachable pairs are
  // excluded and counted rather than aborting the run.
  bool skip_unreachable = true;

  static ExperimentConfig defaults_for(Experiment e);
  static ExperimentConfig from_json(Experiment e, const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct FiveNum {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  nlohmann::json to_json() const;
};

// Linear-interpolation quartiles of an unsorted sample.
FiveNum five_number_summary(std::vector<double> values);

struct AnalysisReport {
  Experiment experiment;

  struct PerFocal {
    std::string id;
    size_t module_size = 0;
    uint32_t lcc = 0;
    double mu = 0, sigma = 0;
    std::optional<double> z; // absent when the null is degenerate
  };
  std::vector<PerFocal> per_focal;

  struct Pair {
    std::string a, b;
    double d_ab = 0;
    std::optional<double> s_ab;
    uint64_t co_count = 0;
    std::optional<double> rr;
    std::optional<double> semsim;
  };
  std::vector<Pair> pairwise;

  // diagnosis_compare only: one row per (symptom, disease) triple.
  struct ProxPair {
    std::string symptom, disease;
    Predicate group;
    size_t a_size = 0;
    double d = 0;
    std::optional<double> z;
  };
  std::vector<ProxPair> prox_pairs;

  uint64_t excluded_pairs = 0; // fully unreachable module pairs
  double z_threshold = 0;      // copied from the config for the summary

  nlohmann::json summary;
  nlohmann::json provenance;

  // group name -> (stat name -> summary)
  std::map<std::string, std::map<std::string, FiveNum>> box;

  // Writes per_focal.csv, pairwise.csv, summary.json, boxplot.csv and
  // provenance.json; recomputes every summary scalar from the tables first
  // and refuses to write on a mismatch.
  void write_bundle(const std::string& dir) const;

  nlohmann::json recompute_summary() const;
};

AnalysisReport run_disease_symptom(const KnowledgeGraph& g,
                                   const ExperimentConfig& cfg);
AnalysisReport run_symptom_disease(const KnowledgeGraph& g,
                                   const ExperimentConfig& cfg);
AnalysisReport run_disease_drug(const KnowledgeGraph& g,
                                const ExperimentConfig& cfg);
AnalysisReport run_diagnosis_compare(const KnowledgeGraph& g,
                                     const ExperimentConfig& cfg);

// Dispatch on cfg.experiment. `input_digest` lands in provenance.
AnalysisReport run_experiment(const KnowledgeGraph& g,
                              const ExperimentConfig& cfg,
                              const std::string& input_digest = "");

} // namespace kgprox
