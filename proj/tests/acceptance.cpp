// Acceptance gate: ten independent checks, one PASS/FAIL line each.
// Returns the number of failed criteria as the exit code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kgprox/align.hpp"
#include "kgprox/metrics.hpp"
#include "kgprox/pipeline.hpp"
#include "kgprox/stats.hpp"
#include "kgprox/synth.hpp"

#include "oracles.hpp"

using namespace kgprox;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const char* title, bool ok,
            const std::string& detail = "") {
  std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
              title, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// ---------------------------------------------------------------- 1 ----
void criterion_1_distance_oracle() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> prob(0.05, 0.3);
  std::uniform_int_distribution<int> left_n(5, 40), right_n(3, 20);
  size_t checked = 0, mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int left = left_n(rng), right = right_n(rng);
    auto kg = oracles::random_bipartite_kg(rng, left, right, prob(rng));
    auto fw = oracles::floyd_warshall(kg.n, kg.edges);
    DistanceOracle oracle(kg.graph, TypeMask::all());
    for (NodeIndex a = 0; a < kg.graph.node_count(); ++a) {
      for (NodeIndex b = 0; b < kg.graph.node_count(); ++b) {
        double want = fw[kg.oracle_of[a]][kg.oracle_of[b]];
        int32_t got = shortest_path_length(oracle, a, b);
        bool same = std::isinf(want) ? got == kUnreachable
                                     : got == static_cast<int32_t>(want);
        ++checked;
        if (!same) ++mismatches;
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu pairs, %zu mismatches", checked,
                mismatches);
  report(1, "shortest paths equal Floyd-Warshall on 1000 random graphs",
         mismatches == 0, buf);
}

// ---------------------------------------------------------------- 2 ----
void criterion_2_metric_brute_force() {
  std::mt19937_64 rng(2002);
  size_t checked = 0, mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto kg = oracles::random_bipartite_kg(rng, 5, 3, 0.4); // <= 8 nodes
    auto fw = oracles::floyd_warshall(kg.n, kg.edges);
    DistanceOracle oracle(kg.graph, TypeMask::all());
    DistancePolicy skip{true};

    const auto& symptoms = kg.graph.nodes_of_type(EntityType::symptom);
    size_t m = symptoms.size();
    std::vector<std::pair<NodeModule, std::vector<int>>> subsets;
    for (uint32_t bits = 1; bits < (1u << m); ++bits) {
      NodeModule mod;
      mod.member_type = EntityType::symptom;
      std::vector<int> ids;
      for (size_t i = 0; i < m; ++i)
        if (bits & (1u << i)) {
          mod.members.push_back(symptoms[i]);
          ids.push_back(kg.oracle_of[symptoms[i]]);
        }
      std::sort(mod.members.begin(), mod.members.end());
      subsets.emplace_back(std::move(mod), std::move(ids));
    }

    auto close = [](double a, double b) {
      return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b));
    };
    for (const auto& [a, oa] : subsets) {
      for (const auto& [b, ob] : subsets) {
        ++checked;
        try {
          double want = oracles::brute_network_distance(fw, oa, ob);
          if (!close(network_distance(oracle, a, b, skip).value, want))
            ++mismatches;
        } catch (const std::exception&) {
          // no reachable cross pair; library must refuse as well
          try {
            (void)network_distance(oracle, a, b, skip);
            ++mismatches;
          } catch (const Error&) {
          }
        }
        try {
          double want = oracles::brute_proximity(fw, oa, ob);
          if (!close(proximity_distance(oracle, a, b, skip).value, want))
            ++mismatches;
        } catch (const std::exception&) {
          try {
            (void)proximity_distance(oracle, a, b, skip);
            ++mismatches;
          } catch (const Error&) {
          }
        }
        if (a.size() >= 2 && b.size() >= 2) {
          try {
            double want = oracles::brute_separation(fw, oa, ob);
            if (!close(separation(oracle, a, b,
                                  SeparationConvention::all_pairs, skip)
                           .value,
                       want))
              ++mismatches;
          } catch (const std::exception&) {
            try {
              (void)separation(oracle, a, b, SeparationConvention::all_pairs,
                               skip);
              ++mismatches;
            } catch (const Error&) {
            }
          }
        }
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu set pairs, %zu mismatches", checked,
                mismatches);
  report(2, "D_ab, S_ab and d(A,B) equal exhaustive enumeration",
         mismatches == 0, buf);
}

// ---------------------------------------------------------------- 3 ----
void criterion_3_null_calibration() {
  SyntheticKGConfig sc;
  sc.diseases = 10;
  sc.symptoms = 80;
  sc.drugs = 0;
  sc.clusters = 10;
  sc.cluster_size = 10;
  sc.cluster_stride = 8;
  sc.p_within = 1.0;
  sc.p_background = 0.05;
  sc.seed = 33;
  KnowledgeGraph g = generate_synthetic_kg(sc);
  DistanceOracle oracle(g, TypeMask::default_substrate());

  std::vector<NodeIndex> pool;
  for (NodeIndex n : g.nodes_of_type(EntityType::symptom))
    if (oracle.allowed(n)) pool.push_back(n);

  std::mt19937_64 rng(3003);
  auto random_set = [&](size_t k) {
    NodeModule mod;
    mod.member_type = EntityType::symptom;
    std::vector<NodeIndex> copy = pool;
    std::shuffle(copy.begin(), copy.end(), rng);
    mod.members.assign(copy.begin(), copy.begin() + k);
    std::sort(mod.members.begin(), mod.members.end());
    return mod;
  };

  // (a) observed sets drawn from the null itself: mean z near zero
  double z_sum = 0;
  size_t z_n = 0;
  for (int trial = 0; trial < 200; ++trial) {
    NodeModule a = random_set(6), b = random_set(6);
    RandomizationConfig rc;
    rc.iterations = 400;
    rc.seed = 7000 + trial;
    try {
      z_sum += proximity_zscore(oracle, a, b, rc, DistancePolicy{true}).z;
      ++z_n;
    } catch (const Error&) {
    }
  }
  double z_mean = z_sum / static_cast<double>(z_n);

  // (b) random expectation of S_ab is zero
  double s_sum = 0;
  size_t s_n = 0;
  for (int trial = 0; trial < 500; ++trial) {
    NodeModule a = random_set(6), b = random_set(6);
    try {
      s_sum += separation(oracle, a, b, SeparationConvention::all_pairs,
                          DistancePolicy{true})
                   .value;
      ++s_n;
    } catch (const Error&) {
    }
  }
  double s_mean = s_sum / static_cast<double>(s_n);

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mean z = %.4f over %zu trials, mean S_ab = %.4f over %zu "
                "pairs",
                z_mean, z_n, s_mean, s_n);
  report(3, "null calibration: mean z in [-0.2, 0.2], mean S_ab in "
            "[-0.15, 0.15]",
         z_n >= 190 && std::fabs(z_mean) <= 0.2 && s_n >= 490 &&
             std::fabs(s_mean) <= 0.15,
         buf);
}

// ---------------------------------------------------------------- 4 ----
void criterion_4_planted_modules() {
  int lcc_ok_seeds = 0, prox_ok_seeds = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticKGConfig sc;
    sc.diseases = 12;
    sc.symptoms = 150;
    sc.drugs = 38; // 200 nodes total
    sc.clusters = 12;
    sc.cluster_size = 10;
    sc.cluster_stride = 10;
    sc.p_within = 0.95;
    sc.p_background = 0.03;
    sc.seed = seed;
    KnowledgeGraph g = generate_synthetic_kg(sc);
    DistanceOracle oracle(g, TypeMask::default_substrate());

    bool all_lcc = true, all_prox = true;
    size_t focal_i = 0;
    for (NodeIndex d : g.nodes_of_type(EntityType::disease)) {
      NodeModule mod = g.module_of(d, Predicate::diagnosis,
                                   EntityType::symptom);
      if (mod.size() < 3) continue;
      RandomizationConfig rc;
      rc.iterations = 300;
      rc.seed = mix_stream(seed, focal_i++);
      try {
        auto z = lcc_zscore(g, mod, LccMode::shared_neighbor,
                            TypeMask::default_substrate(), rc);
        if (z.z <= 1.5) all_lcc = false;
      } catch (const Error&) {
        all_lcc = false;
      }
      NodeModule self;
      self.member_type = EntityType::disease;
      self.members = {d};
      try {
        auto z = proximity_zscore(oracle, mod, self, rc,
                                  DistancePolicy{true});
        if (z.z >= -1.0) all_prox = false;
      } catch (const Error&) {
        all_prox = false;
      }
    }
    if (all_lcc) ++lcc_ok_seeds;
    if (all_prox) ++prox_ok_seeds;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "LCC z > 1.5 in %d/20 seeds, proximity z "
                                 "< -1 in %d/20 seeds",
                lcc_ok_seeds, prox_ok_seeds);
  report(4, "planted modules are detected",
         lcc_ok_seeds >= 18 && prox_ok_seeds == 20, buf);
}

// ---------------------------------------------------------------- 5 ----
void criterion_5_correlation_signs() {
  SyntheticKGConfig sc;
  sc.diseases = 12;
  sc.symptoms = 90;
  sc.drugs = 30;
  sc.clusters = 12;
  sc.cluster_size = 10;
  sc.cluster_stride = 6; // overlapping clusters give co-count variance
  sc.p_within = 0.9;
  sc.p_background = 0.02;
  sc.seed = 55;
  KnowledgeGraph g = generate_synthetic_kg(sc);

  auto corr = [](const nlohmann::json& j) {
    return j.is_null() ? 0.0 : j.at("r").get<double>();
  };

  ExperimentConfig ds =
      ExperimentConfig::defaults_for(Experiment::disease_symptom);
  ds.randomization.iterations = 100;
  AnalysisReport rep_ds = run_disease_symptom(g, ds);
  double r_co = corr(rep_ds.summary.at("r_d_co"));
  double r_sem = corr(rep_ds.summary.at("r_d_semsim"));

  ExperimentConfig sd =
      ExperimentConfig::defaults_for(Experiment::symptom_disease);
  sd.randomization.iterations = 30;
  AnalysisReport rep_sd = run_symptom_disease(g, sd);
  double r_co2 = corr(rep_sd.summary.at("r_d_co"));
  double r_rr = corr(rep_sd.summary.at("r_d_rr"));

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "disease run: r(D,co) = %.3f, r(D,semsim) = %.3f; symptom "
                "run: r(D,co) = %.3f, r(D,RR) = %.3f",
                r_co, r_sem, r_co2, r_rr);
  report(5, "closer module pairs co-occur more (negative correlations)",
         r_co < -0.2 && r_sem < -0.2 && r_co2 < -0.2 && r_rr < -0.2, buf);
}

// ---------------------------------------------------------------- 6 ----
void criterion_6_dice_equivalence() {
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    size_t rows = 2, cols = 3 + static_cast<size_t>(unit(rng) * 20);
    std::vector<std::vector<uint8_t>> cells(rows,
                                            std::vector<uint8_t>(cols, 0));
    for (auto& row : cells)
      for (auto& c : row) c = unit(rng) < 0.5 ? 1 : 0;
    // keep both rows non-empty
    cells[0][0] = 1;
    cells[1][cols - 1] = 1;
    std::vector<std::string> rid{"a", "b"}, cid;
    for (size_t c = 0; c < cols; ++c) cid.push_back("c" + std::to_string(c));
    auto m = AssociationMatrix::from_incidence(rid, cid, cells);

    size_t inter = 0, n1 = 0, n2 = 0;
    for (size_t c = 0; c < cols; ++c) {
      n1 += cells[0][c];
      n2 += cells[1][c];
      inter += cells[0][c] && cells[1][c];
    }
    double want = 2.0 * static_cast<double>(inter) /
                  static_cast<double>(n1 + n2);
    double got = m.semantic_similarity(0, 1, AssociationMatrix::IcMode::unit);
    if (std::fabs(got - want) > 1e-12) ++mismatches;
  }
  report(6, "unit-mode semantic similarity equals the Dice coefficient",
         mismatches == 0);
}

// ---------------------------------------------------------------- 7 ----
void criterion_7_pearson_oracle() {
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> len(2, 500);
  size_t r_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = len(rng);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = u(rng);
      ys[i] = 0.5 * xs[i] + u(rng);
    }
    double want = oracles::two_pass_pearson(xs, ys);
    double got = pearson(xs, ys).r;
    if (std::fabs(got - want) > 1e-12 * std::max(1.0, std::fabs(want)))
      ++r_mismatch;
  }

  size_t p_mismatch = 0;
  double worst = 0;
  std::uniform_int_distribution<int> pn(5, 200);
  std::uniform_real_distribution<double> pr(0.05, 0.95);
  for (int c = 0; c < 50; ++c) {
    size_t n = static_cast<size_t>(pn(rng));
    double r = pr(rng) * (c % 2 ? 1.0 : -1.0);
    double want = oracles::quad_pearson_pvalue(n, r);
    double got = pearson_pvalue(n, r);
    worst = std::max(worst, std::fabs(got - want));
    if (std::fabs(got - want) > 1e-6) ++p_mismatch;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%zu r mismatches, %zu p mismatches (worst |dp| = %.2e)",
                r_mismatch, p_mismatch, worst);
  report(7, "pearson r and p match independent oracles",
         r_mismatch == 0 && p_mismatch == 0, buf);
}

// ---------------------------------------------------------------- 8 ----
void criterion_8_alignment_contract() {
  // 20 fixtures with explicit embeddings; the expected value is assembled
  // here from scratch (character sets + plain cosine), never via the
  // library's own jaccard/cosine helpers.
  struct Fixture {
    std::string a, b;
    std::vector<double> va, vb;
  };
  std::vector<Fixture> fixtures = {
      {"abc", "abd", {1, 0}, {1, 0}},      {"abc", "abd", {1, 0}, {0, 1}},
      {"x", "x", {1, 1}, {1, 1}},          {"x", "y", {2, 0}, {1, 1}},
      {"ab", "ba", {1, 2}, {2, 1}},        {"ab", "cd", {1, 2}, {2, 4}},
      {"same", "same", {3, 4}, {3, 4}},    {"pain", "pains", {1, 5}, {2, 5}},
      {"head", "heads", {0.5, 1}, {1, 1}}, {"a", "ab", {1, 3}, {3, 1}},
      {"qrs", "stu", {1, 1}, {1, 2}},      {"mn", "nm", {5, 1}, {1, 5}},
      {"w", "ww", {2, 2}, {4, 4}},         {"fgh", "ghf", {1, 0}, {1, 1}},
      {"klm", "k", {0, 1}, {1, 1}},        {"rst", "rsu", {2, 3}, {3, 2}},
      {"zz", "z", {1, 4}, {4, 1}},         {"one", "neo", {1, 1}, {2, 2}},
      {"pq", "qp", {3, 1}, {3, 1}},        {"tuv", "uvw", {1, 2}, {2, 1}},
  };
  size_t mismatches = 0;
  for (const auto& f : fixtures) {
    EmbeddingTable emb;
    emb.dim = 2;
    emb.vectors[f.a] = f.va;
    emb.vectors[f.b] = f.vb;
    auto charset = [](const std::string& s) {
      std::vector<char> cs(s.begin(), s.end());
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      return cs;
    };
    auto ca = charset(f.a), cb = charset(f.b);
    std::vector<char> inter, uni;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                          std::back_inserter(inter));
    std::set_union(ca.begin(), ca.end(), cb.begin(), cb.end(),
                   std::back_inserter(uni));
    double jac = static_cast<double>(inter.size()) /
                 static_cast<double>(uni.size());
    double dot = f.va[0] * f.vb[0] + f.va[1] * f.vb[1];
    double cos = dot / (std::hypot(f.va[0], f.va[1]) *
                        std::hypot(f.vb[0], f.vb[1]));
    double want = 0.4 * jac + 0.6 * cos;
    double got = (f.a == f.b)
                     ? combined_sim(f.a, f.b, emb)
                     : combined_sim(f.a, f.b, emb);
    if (std::fabs(got - want) > 1e-12) ++mismatches;
  }

  // 200-entity duplicate fixture: 50 base surfaces x 2 variants x 2 types.
  const std::vector<std::string> bases = {
      "migraine",   "nausea",    "fatigue",   "anxiety",    "tremor",
      "cough",      "fever",     "rash",      "vertigo",    "insomnia",
      "palpitation","dizziness", "sweating",  "numbness",   "weakness",
      "cramp",      "itching",   "bloating",  "wheezing",   "stiffness",
      "headache",   "backpain",  "dryness",   "swelling",   "burning",
      "tingling",   "soreness",  "hoarseness","chills",     "flushing",
      "paleness",   "drowsiness","irritable", "restless",   "appetite",
      "thirst",     "blurred",   "ringing",   "choking",    "gagging",
      "hiccup",     "sneezing",  "yawning",   "shivering",  "aching",
      "throbbing",  "stabbing",  "dullpain",  "pressure",   "tightness"};
  std::vector<AlignmentInput> inputs;
  std::vector<std::string> corpus;
  for (const std::string& base : bases) {
    for (EntityType t : {EntityType::symptom, EntityType::disease}) {
      inputs.push_back({base, t, 5});
      inputs.push_back({base + "s", t, 1});
    }
    corpus.push_back(base);
    corpus.push_back(base + "s");
  }
  EmbeddingTable emb = EmbeddingTable::char_bigram(corpus);
  AlignmentResult first = align(inputs, emb, 0.75);

  // duplicates must merge within each type, bases stay canonical
  bool merged = true;
  for (const std::string& base : bases) {
    for (EntityType t : {EntityType::symptom, EntityType::disease}) {
      if (first.canonical(t, base + "s") != base) merged = false;
      if (first.canonical(t, base) != base) merged = false;
    }
  }
  // type safety: every cluster is single-typed, and a surface known only
  // under one type is untouched under the other
  bool type_safe =
      first.canonical(EntityType::risk_factor, "migraines") == "migraines";
  for (const auto& c : first.clusters)
    for (const auto& m : c.members)
      if (first.canonical(c.type, m) != c.canonical) type_safe = false;
  // idempotence: aligning the canonicals changes nothing
  std::vector<AlignmentInput> canon_in;
  std::vector<std::string> canon_corpus;
  for (const auto& c : first.clusters) {
    canon_in.push_back({c.canonical, c.type, 1});
    canon_corpus.push_back(c.canonical);
  }
  EmbeddingTable emb2 = EmbeddingTable::char_bigram(canon_corpus);
  AlignmentResult second = align(canon_in, emb2, 0.75);
  bool idempotent = second.clusters.size() == first.clusters.size();
  for (const auto& c : second.clusters)
    if (c.members.size() != 1) idempotent = false;

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%zu fixture mismatches; merged = %d, idempotent = %d",
                mismatches, merged ? 1 : 0, idempotent ? 1 : 0);
  report(8, "combined similarity weights and alignment contract",
         mismatches == 0 && merged && idempotent && type_safe, buf);
}

// ---------------------------------------------------------------- 9 ----
void criterion_9_diagnosis_tiers() {
  auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  int ok_seeds = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticKGConfig sc;
    sc.diseases = 8;
    sc.symptoms = 50;
    sc.drugs = 10;
    sc.clusters = 8;
    sc.cluster_size = 6;
    sc.cluster_stride = 4;
    sc.p_within = 0.9;
    sc.p_background = 0.02;
    sc.primary_exclusive = 4; // terminologized, one disease each
    sc.shared_pool = 20;      // colloquial, broadly shared
    sc.shared_per_disease = 8;
    sc.seed = seed;
    KnowledgeGraph g = generate_synthetic_kg(sc);

    ExperimentConfig cfg =
        ExperimentConfig::defaults_for(Experiment::diagnosis_compare);
    cfg.randomization.iterations = 200;
    cfg.randomization.seed = seed;
    AnalysisReport rep = run_diagnosis_compare(g, cfg);

    std::vector<double> d_primary, d_shared, z_primary, z_shared;
    for (const auto& pp : rep.prox_pairs) {
      bool primary = pp.group == Predicate::primary_diagnosis;
      (primary ? d_primary : d_shared).push_back(pp.d);
      if (pp.z) (primary ? z_primary : z_shared).push_back(*pp.z);
    }
    if (d_primary.empty() || d_shared.empty() || z_primary.empty() ||
        z_shared.empty())
      continue;
    bool d_ordered = median_of(d_primary) < median_of(d_shared);
    bool z_ordered = median_of(z_primary) < median_of(z_shared);
    if (d_ordered && z_ordered) ++ok_seeds;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "ordered in %d/20 seeds", ok_seeds);
  report(9, "primary-diagnosis symptoms sit strictly closer than shared "
            "diagnosis symptoms",
         ok_seeds >= 18, buf);
}

// --------------------------------------------------------------- 10 ----
void criterion_10_determinism() {
  fs::path dir = fs::temp_directory_path() / "kgprox_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path tsv = dir / "kg.tsv";

  auto shell = [](const std::string& cmd) {
    int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool ok = shell(std::string(KGPROX_CLI_PATH) + " synth --seed 21 --output " +
                  tsv.string()) == 0;
  std::vector<std::string> summaries;
  const uint32_t thread_plan[5] = {1, 4, 1, 4, 1};
  for (int run = 0; ok && run < 5; ++run) {
    fs::path out = dir / ("run" + std::to_string(run));
    ok = shell(std::string(KGPROX_CLI_PATH) +
               " pipeline disease_symptom --graph " + tsv.string() +
               " --iterations 80 --seed 17 --threads " +
               std::to_string(thread_plan[run]) + " --out " + out.string()) ==
         0;
    if (ok) summaries.push_back(slurp(out / "summary.json"));
  }
  bool identical = ok && summaries.size() == 5;
  for (size_t i = 1; identical && i < summaries.size(); ++i)
    identical = summaries[i] == summaries[0] && !summaries[0].empty();
  fs::remove_all(dir);
  report(10, "summary.json is byte-identical across 5 runs and thread "
             "counts {1, 4}",
         identical);
}

} // namespace

int main() {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  criterion_1_distance_oracle();
  criterion_2_metric_brute_force();
  criterion_3_null_calibration();
  criterion_4_planted_modules();
  criterion_5_correlation_signs();
  criterion_6_dice_equivalence();
  criterion_7_pearson_oracle();
  criterion_8_alignment_contract();
  criterion_9_diagnosis_tiers();
  criterion_10_determinism();
  auto secs = std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("%d/10 criteria passed in %.1f s\n", 10 - g_failures, secs);
  return g_failures;
}
