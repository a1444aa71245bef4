#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "kgprox/pipeline.hpp"
#include "kgprox/synth.hpp"

using namespace kgprox;
namespace fs = std::filesystem;

namespace {

KnowledgeGraph test_graph(uint64_t seed = 1) {
  SyntheticKGConfig cfg;
  cfg.diseases = 8;
  cfg.symptoms = 60;
  cfg.drugs = 20;
  cfg.clusters = 8;
  cfg.cluster_size = 8;
  cfg.cluster_stride = 5;
  cfg.seed = seed;
  return generate_synthetic_kg(cfg);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("disease_symptom produces a consistent report") {
  KnowledgeGraph g = test_graph();
  ExperimentConfig cfg =
      ExperimentConfig::defaults_for(Experiment::disease_symptom);
  cfg.randomization.iterations = 100;
  AnalysisReport rep = run_disease_symptom(g, cfg);
  CHECK(rep.per_focal.size() == 8);
  CHECK(rep.pairwise.size() == 28);
  for (const auto& p : rep.pairwise) {
    CHECK(p.d_ab >= 0.0);
    CHECK(p.semsim.has_value());
    CHECK(!p.rr.has_value()); // RR belongs to the symptom-centric run
  }
  CHECK(rep.summary == rep.recompute_summary());
  CHECK(rep.summary.at("focal_count") == 8);
}

TEST_CASE("symptom_disease adds relative risk") {
  KnowledgeGraph g = test_graph();
  ExperimentConfig cfg =
      ExperimentConfig::defaults_for(Experiment::symptom_disease);
  cfg.randomization.iterations = 50;
  AnalysisReport rep = run_symptom_disease(g, cfg);
  CHECK(!rep.pairwise.empty());
  size_t with_rr = 0;
  for (const auto& p : rep.pairwise)
    if (p.rr) ++with_rr;
  CHECK(with_rr == rep.pairwise.size());
  CHECK(rep.summary.contains("r_d_rr"));
}

TEST_CASE("disease_drug uses the treat predicate") {
  KnowledgeGraph g = test_graph();
  ExperimentConfig cfg =
      ExperimentConfig::defaults_for(Experiment::disease_drug);
  cfg.randomization.iterations = 50;
  AnalysisReport rep = run_disease_drug(g, cfg);
  CHECK(!rep.per_focal.empty());
  for (const auto& f : rep.per_focal) CHECK(f.module_size > 0);

  cfg.predicate = Predicate::diagnosis;
  CHECK_THROWS_AS(run_disease_drug(g, cfg), InvalidConfig);
}

TEST_CASE("empty experiments fail with the dedicated error") {
  std::vector<TripleRow> rows = {
      {"aspirin", EntityType::drug, Predicate::treat, "migraine",
       EntityType::disease, {}, {}},
  };
  KnowledgeGraph g = KnowledgeGraph::from_rows(rows);
  ExperimentConfig cfg =
      ExperimentConfig::defaults_for(Experiment::disease_symptom);
  cfg.randomization.iterations = 10;
  CHECK_THROWS_AS(run_disease_symptom(g, cfg), EmptyExperiment);
  CHECK_THROWS_AS(
      run_diagnosis_compare(
          g, ExperimentConfig::defaults_for(Experiment::diagnosis_compare)),
      MissingPredicate);
}

TEST_CASE("diagnosis_compare separates predicate tiers") {
  SyntheticKGConfig sc;
  sc.diseases = 6;
  sc.symptoms = 40;
  sc.drugs = 0;
  sc.clusters = 6;
  sc.cluster_size = 6;
  sc.cluster_stride = 4;
  sc.primary_exclusive = 3;
  sc.shared_pool = 20;
  sc.shared_per_disease = 6;
  sc.seed = 2;
  KnowledgeGraph g = generate_synthetic_kg(sc);

  ExperimentConfig cfg =
      ExperimentConfig::defaults_for(Experiment::diagnosis_compare);
  cfg.randomization.iterations = 100;
  AnalysisReport rep = run_diagnosis_compare(g, cfg);

  size_t primary = 0, shared = 0;
  for (const auto& pp : rep.prox_pairs) {
    if (pp.group == Predicate::primary_diagnosis) {
      ++primary;
      CHECK(pp.d == 0.0); // exclusive symptoms sit on their disease
    } else {
      ++shared;
    }
  }
  CHECK(primary == 18); // 6 diseases x 3 exclusive symptoms
  CHECK(shared > 0);
  CHECK(rep.summary.at("groups").contains("primary_diagnosis"));
  CHECK(rep.summary == rep.recompute_summary());
}

TEST_CASE("bundles are byte-identical across runs and thread counts") {
  KnowledgeGraph g = test_graph();
  ExperimentConfig cfg =
      ExperimentConfig::defaults_for(Experiment::disease_symptom);
  cfg.randomization.iterations = 60;
  cfg.randomization.seed = 9;

  fs::path base = fs::temp_directory_path() / "kgprox_pipe_test";
  fs::remove_all(base);
  std::vector<std::string> summaries, pairwise;
  for (uint32_t threads : {1u, 4u, 1u}) {
    cfg.randomization.threads = threads;
    AnalysisReport rep = run_experiment(g, cfg, "digest");
    fs::path dir = base / std::to_string(summaries.size());
    rep.write_bundle(dir.string());
    for (const char* f : {"per_focal.csv", "pairwise.csv", "summary.json",
                          "boxplot.csv", "provenance.json"})
      CHECK(fs::exists(dir / f));
    summaries.push_back(slurp(dir / "summary.json"));
    pairwise.push_back(slurp(dir / "pairwise.csv"));
  }
  CHECK(summaries[0] == summaries[1]);
  CHECK(summaries[0] == summaries[2]);
  CHECK(pairwise[0] == pairwise[1]);
  fs::remove_all(base);
}

TEST_CASE("five-number summary") {
  FiveNum f = five_number_summary({4, 1, 3, 2});
  CHECK(f.min == 1);
  CHECK(f.q1 == doctest::Approx(1.75));
  CHECK(f.median == doctest::Approx(2.5));
  CHECK(f.q3 == doctest::Approx(3.25));
  CHECK(f.max == 4);
  FiveNum one = five_number_summary({7});
  CHECK(one.min == 7);
  CHECK(one.max == 7);
  CHECK(one.median == 7);
}

TEST_CASE("config json round trip") {
  ExperimentConfig cfg =
      ExperimentConfig::defaults_for(Experiment::symptom_disease);
  cfg.randomization.seed = 123;
  cfg.z_threshold = 2.0;
  cfg.lcc_mode = LccMode::induced;
  nlohmann::json j = cfg.to_json();
  ExperimentConfig back =
      ExperimentConfig::from_json(Experiment::symptom_disease, j);
  CHECK(back.to_json() == j);
}
