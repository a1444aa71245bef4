// kgprox: knowledge-graph network-proximity toolkit, single binary.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "kgprox/align.hpp"
#include "kgprox/digest.hpp"
#include "kgprox/error.hpp"
#include "kgprox/graph.hpp"
#include "kgprox/kernels.hpp"
#include "kgprox/metrics.hpp"
#include "kgprox/pipeline.hpp"
#include "kgprox/stats.hpp"
#include "kgprox/synth.hpp"

using namespace kgprox;

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

KnowledgeGraph load_graph(const std::string& path) {
  if (ends_with(path, ".json")) return KnowledgeGraph::from_json_file(path);
  return KnowledgeGraph::from_tsv_file(path);
}

void save_graph(const KnowledgeGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  if (ends_with(path, ".json")) {
    out << g.to_json().dump(2) << '\n';
  } else {
    std::vector<TripleRow> rows;
    for (const Triple& t : g.triples()) {
      for (uint32_t i = 0; i < t.count; ++i)
        rows.push_back(TripleRow{g.entity(t.head).name, g.entity(t.head).type,
                                 t.predicate, g.entity(t.tail).name,
                                 g.entity(t.tail).type,
                                 {},
                                 {}});
    }
    write_tsv(rows, out);
  }
}

nlohmann::json file_record(const std::string& path) {
  return nlohmann::json{{"path", path}, {"digest", digest_file(path)}};
}

void print_manifest(const std::string& command, nlohmann::json outputs,
                    nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json m{{"command", command}, {"outputs", std::move(outputs)}};
  m.update(extra);
  std::cout << m.dump(2) << '\n';
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Common knobs for randomized metrics and pipelines.
struct RandOpts {
  uint32_t iterations = 1000;
  uint64_t seed = 0;
  std::string null_model = "uniform_by_type";
  uint32_t bin_floor = 10;
  uint32_t threads = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--iterations", iterations, "null-model iterations");
    cmd->add_option("--seed", seed, "master RNG seed");
    cmd->add_option("--null-model", null_model,
                    "uniform_by_type | degree_binned");
    cmd->add_option("--bin-floor", bin_floor,
                    "minimum degree-bin size (degree_binned)");
    cmd->add_option("--threads", threads, "worker threads");
  }

  RandomizationConfig config() const {
    RandomizationConfig cfg;
    cfg.iterations = iterations;
    cfg.seed = seed;
    auto m = parse_null_model(null_model);
    if (!m) throw InvalidConfig("unknown null model: " + null_model);
    cfg.null_model = *m;
    cfg.bin_floor = bin_floor;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
  }
};

// A module argument: either --X-focal (with --predicate/--member-type) or an
// explicit --X member list.
struct ModuleOpts {
  std::string focal;
  std::string members;

  void attach(CLI::App* cmd, const std::string& tag, const std::string& alias) {
    auto* f = cmd->add_option("--" + tag + "-focal", focal,
                              "focal entity whose module forms set " + tag);
    std::string names = "--" + tag;
    if (!alias.empty()) names += ",--" + alias;
    auto* m = cmd->add_option(names, members,
                              "comma-separated member entities of set " + tag);
    f->excludes(m);
  }

  NodeModule resolve(const KnowledgeGraph& g, Predicate p,
                     EntityType member_type) const {
    if (!focal.empty()) return g.module_of(g.require(focal), p, member_type);
    NodeModule mod;
    mod.member_type = member_type;
    for (const auto& name : split_csv(members)) {
      NodeIndex n = g.require(name);
      if (g.entity(n).type != member_type)
        throw InvalidConfig("member " + name + " is not of type " +
                            std::string(to_string(member_type)));
      mod.members.push_back(n);
    }
    std::sort(mod.members.begin(), mod.members.end());
    mod.members.erase(std::unique(mod.members.begin(), mod.members.end()),
                      mod.members.end());
    if (mod.members.empty())
      throw InvalidConfig("set " + (focal.empty() ? members : focal) +
                          " resolved to no members");
    return mod;
  }
};

Predicate parse_predicate_or_throw(const std::string& s) {
  auto p = parse_predicate(s);
  if (!p) throw InvalidConfig("unknown predicate: " + s);
  return *p;
}

EntityType parse_type_or_throw(const std::string& s) {
  auto t = parse_entity_type(s);
  if (!t) throw InvalidConfig("unknown entity type: " + s);
  return *t;
}

nlohmann::json zscore_json(const ZScoreResult& r) {
  return nlohmann::json{{"observed", r.observed},
                        {"mu", r.mu},
                        {"sigma", r.sigma},
                        {"z", r.z},
                        {"iterations", r.iterations},
                        {"invalid_iterations", r.invalid_iterations},
                        {"seed", r.seed}};
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  for (const auto& tok : split_csv(csv)) out.push_back(std::stod(tok));
  return out;
}

} // namespace

int run(int argc, char** argv) {
  CLI::App app{"knowledge-graph network proximity toolkit"};
  app.require_subcommand(1);

  // ---- ingest ----
  std::string in_path, out_path;
  auto* ingest = app.add_subcommand(
      "ingest", "validate a triple file and emit the canonical graph");
  ingest->add_option("--input", in_path, "triple TSV or graph JSON")
      ->required();
  ingest->add_option("--output", out_path, "graph JSON (or TSV) to write");
  ingest->callback([&] {
    KnowledgeGraph g = load_graph(in_path);
    nlohmann::json outputs = nlohmann::json::array();
    if (!out_path.empty()) {
      save_graph(g, out_path);
      outputs.push_back(file_record(out_path));
    }
    print_manifest("ingest", outputs,
                   nlohmann::json{{"stats", g.stats().to_json()},
                                  {"input_digest", digest_file(in_path)}});
  });

  // ---- align ----
  std::string al_in, al_out, al_report, al_embeddings;
  double al_threshold = 0.85;
  auto* alignc = app.add_subcommand(
      "align", "cluster co-referring entity surfaces and rewrite the graph");
  alignc->add_option("--input", al_in, "graph to align")->required();
  alignc->add_option("--threshold", al_threshold,
                     "combined-similarity merge threshold");
  alignc->add_option("--embeddings", al_embeddings,
                     "surface embedding TSV (default: character bigrams)");
  alignc->add_option("--output", al_out, "aligned graph to write");
  alignc->add_option("--report", al_report, "alignment CSV to write");
  alignc->callback([&] {
    KnowledgeGraph g = load_graph(al_in);
    std::vector<AlignmentInput> inputs;
    std::vector<uint64_t> freq(g.node_count(), 0);
    for (const Triple& t : g.triples()) {
      freq[t.head] += t.count;
      freq[t.tail] += t.count;
    }
    std::vector<std::string> corpus;
    for (NodeIndex n = 0; n < g.node_count(); ++n) {
      const Entity& e = g.entity(n);
      for (const std::string& surface : e.aliases) {
        inputs.push_back(AlignmentInput{surface, e.type,
                                        std::max<uint64_t>(freq[n], 1)});
        corpus.push_back(surface);
      }
    }
    EmbeddingTable emb = al_embeddings.empty()
                             ? EmbeddingTable::char_bigram(corpus)
                             : EmbeddingTable::load_file(al_embeddings);
    AlignmentResult result = align(inputs, emb, al_threshold);
    nlohmann::json outputs = nlohmann::json::array();
    if (!al_report.empty()) {
      std::ofstream rep(al_report, std::ios::binary);
      if (!rep) throw IoError("cannot write " + al_report);
      write_alignment_csv(result, emb, rep);
      rep.close();
      outputs.push_back(file_record(al_report));
    }
    if (!al_out.empty()) {
      save_graph(apply_alignment(g, result), al_out);
      outputs.push_back(file_record(al_out));
    }
    print_manifest("align", outputs,
                   nlohmann::json{{"clusters", result.clusters.size()},
                                  {"threshold", al_threshold}});
  });

  // ---- synth ----
  std::string sy_config, sy_out = "synthetic.tsv";
  uint64_t sy_seed = 0;
  bool sy_seed_set = false;
  auto* synth =
      app.add_subcommand("synth", "generate a synthetic knowledge graph");
  synth->add_option("--config", sy_config, "generator config JSON");
  synth->add_option("--output", sy_out, "triple TSV or graph JSON to write");
  synth->add_option("--seed", sy_seed, "generator seed (overrides config)")
      ->each([&](const std::string&) { sy_seed_set = true; });
  synth->callback([&] {
    SyntheticKGConfig cfg;
    if (!sy_config.empty()) {
      std::ifstream in(sy_config);
      if (!in) throw IoError("cannot open " + sy_config);
      nlohmann::json j;
      in >> j;
      cfg = SyntheticKGConfig::from_json(j);
    }
    if (sy_seed_set) cfg.seed = sy_seed;
    KnowledgeGraph g = generate_synthetic_kg(cfg);
    save_graph(g, sy_out);
    print_manifest("synth", nlohmann::json::array({file_record(sy_out)}),
                   nlohmann::json{{"config", cfg.to_json()},
                                  {"stats", g.stats().to_json()}});
  });

  // ---- metric ----
  auto* metric = app.add_subcommand("metric", "compute a single statistic");
  metric->require_subcommand(1);

  std::string m_graph, m_predicate = "diagnosis", m_member = "symptom";
  std::string m_mask = TypeMask::default_substrate().str();
  std::string m_lcc_mode = "shared_neighbor";
  std::string m_sep_conv = "all_pairs";
  bool m_skip = false;
  ModuleOpts mod_a, mod_b;
  RandOpts m_rand;

  auto add_common = [&](CLI::App* cmd, bool two_sets) {
    cmd->add_option("--graph", m_graph, "graph file")->required();
    cmd->add_option("--predicate", m_predicate, "module predicate");
    cmd->add_option("--member-type", m_member, "module member type");
    cmd->add_option("--mask", m_mask, "distance substrate types (csv)");
    cmd->add_flag("--skip-unreachable", m_skip,
                  "drop unreachable pairs instead of failing");
    mod_a.attach(cmd, "a", two_sets ? "from" : "");
    if (two_sets) mod_b.attach(cmd, "b", "to");
  };
  auto resolve_common = [&](const KnowledgeGraph& g, bool two_sets) {
    Predicate p = parse_predicate_or_throw(m_predicate);
    EntityType t = parse_type_or_throw(m_member);
    std::pair<NodeModule, NodeModule> mods;
    mods.first = mod_a.resolve(g, p, t);
    if (two_sets) mods.second = mod_b.resolve(g, p, t);
    return mods;
  };
  auto emit = [&](const char* name, nlohmann::json body) {
    body["metric"] = name;
    std::cout << body.dump(2) << '\n';
  };

  auto* lcc = metric->add_subcommand("lcc", "largest connected component");
  add_common(lcc, false);
  lcc->add_option("--lcc-mode", m_lcc_mode, "induced | shared_neighbor");
  lcc->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto [a, _] = resolve_common(g, false);
    auto mode = parse_lcc_mode(m_lcc_mode);
    if (!mode) throw InvalidConfig("unknown lcc mode: " + m_lcc_mode);
    emit("lcc",
         {{"value", lcc_size(g, a, *mode, TypeMask::parse(m_mask))},
          {"module_size", a.size()}});
  });

  auto* lccz = metric->add_subcommand("lcc-z", "module clustering z-score");
  add_common(lccz, false);
  lccz->add_option("--lcc-mode", m_lcc_mode, "induced | shared_neighbor");
  m_rand.attach(lccz);
  lccz->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto [a, _] = resolve_common(g, false);
    auto mode = parse_lcc_mode(m_lcc_mode);
    if (!mode) throw InvalidConfig("unknown lcc mode: " + m_lcc_mode);
    emit("lcc_z", zscore_json(lcc_zscore(g, a, *mode, TypeMask::parse(m_mask),
                                         m_rand.config())));
  });

  auto* dist = metric->add_subcommand("distance", "mean cross distance D_ab");
  add_common(dist, true);
  dist->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto [a, b] = resolve_common(g, true);
    DistanceOracle oracle(g, TypeMask::parse(m_mask));
    auto r = network_distance(oracle, a, b, DistancePolicy{m_skip});
    emit("distance", {{"value", r.value}, {"skipped", r.skipped}});
  });

  auto* sep = metric->add_subcommand("separation", "module separation S_ab");
  add_common(sep, true);
  sep->add_option("--separation-convention", m_sep_conv,
                  "all_pairs | nearest_neighbor");
  sep->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto [a, b] = resolve_common(g, true);
    auto conv = parse_separation_convention(m_sep_conv);
    if (!conv) throw InvalidConfig("unknown convention: " + m_sep_conv);
    DistanceOracle oracle(g, TypeMask::parse(m_mask));
    auto r = separation(oracle, a, b, *conv, DistancePolicy{m_skip});
    emit("separation", {{"value", r.value}, {"skipped", r.skipped}});
  });

  auto* prox =
      metric->add_subcommand("proximity", "closest-distance proximity d(A,B)");
  add_common(prox, true);
  prox->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto [a, b] = resolve_common(g, true);
    DistanceOracle oracle(g, TypeMask::parse(m_mask));
    auto r = proximity_distance(oracle, a, b, DistancePolicy{m_skip});
    emit("proximity", {{"value", r.value}, {"skipped", r.skipped}});
  });

  auto* proxz = metric->add_subcommand("proximity-z", "proximity z-score");
  add_common(proxz, true);
  m_rand.attach(proxz);
  proxz->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto [a, b] = resolve_common(g, true);
    DistanceOracle oracle(g, TypeMask::parse(m_mask));
    emit("proximity_z",
         zscore_json(proximity_zscore(oracle, a, b, m_rand.config(),
                                      DistancePolicy{m_skip})));
  });

  std::string rr_row = "disease", rr_col = "symptom", rr_a, rr_b;
  auto* rr = metric->add_subcommand("rr", "relative risk of co-occurrence");
  rr->add_option("--graph", m_graph, "graph file")->required();
  rr->add_option("--predicate", m_predicate, "incidence predicate");
  rr->add_option("--row-type", rr_row, "observation (row) entity type");
  rr->add_option("--col-type", rr_col, "compared (column) entity type");
  rr->add_option("--a", rr_a, "first column entity")->required();
  rr->add_option("--b", rr_b, "second column entity")->required();
  rr->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto m = AssociationMatrix::from_graph(
        g, parse_predicate_or_throw(m_predicate), parse_type_or_throw(rr_row),
        parse_type_or_throw(rr_col));
    size_t ca = m.require_col(g.entity(g.require(rr_a)).id);
    size_t cb = m.require_col(g.entity(g.require(rr_b)).id);
    emit("rr", {{"value", m.relative_risk(ca, cb)},
                {"n", m.row_count()},
                {"p_a", m.col_sum(ca)},
                {"p_b", m.col_sum(cb)}});
  });

  std::string ss_ic = "unit";
  auto* semsim = metric->add_subcommand("semsim", "semantic similarity");
  semsim->add_option("--graph", m_graph, "graph file")->required();
  semsim->add_option("--predicate", m_predicate, "incidence predicate");
  semsim->add_option("--row-type", rr_row, "compared (row) entity type");
  semsim->add_option("--col-type", rr_col, "annotation (column) entity type");
  semsim->add_option("--a", rr_a, "first row entity")->required();
  semsim->add_option("--b", rr_b, "second row entity")->required();
  semsim->add_option("--ic-mode", ss_ic, "unit | neg_log_freq");
  semsim->callback([&] {
    KnowledgeGraph g = load_graph(m_graph);
    auto ic = parse_ic_mode(ss_ic);
    if (!ic) throw InvalidConfig("unknown ic mode: " + ss_ic);
    auto m = AssociationMatrix::from_graph(
        g, parse_predicate_or_throw(m_predicate), parse_type_or_throw(rr_row),
        parse_type_or_throw(rr_col));
    size_t ra = m.require_row(g.entity(g.require(rr_a)).id);
    size_t rb = m.require_row(g.entity(g.require(rr_b)).id);
    emit("semsim",
         {{"value", m.semantic_similarity(ra, rb, *ic)},
          {"co_count", m.co_count(ra, rb)}});
  });

  std::string pe_x, pe_y, pe_input;
  auto* pear = metric->add_subcommand("pearson", "correlation with p-value");
  pear->add_option("--x", pe_x, "comma-separated x values");
  pear->add_option("--y", pe_y, "comma-separated y values");
  pear->add_option("--input", pe_input, "two-column CSV (header optional)");
  pear->callback([&] {
    std::vector<double> xs, ys;
    if (!pe_input.empty()) {
      std::ifstream in(pe_input);
      if (!in) throw IoError("cannot open " + pe_input);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() < 2) throw SchemaViolation("need two CSV columns");
        try {
          xs.push_back(std::stod(cells[0]));
          ys.push_back(std::stod(cells[1]));
        } catch (const std::exception&) {
          if (!xs.empty()) throw SchemaViolation("non-numeric CSV cell");
          // header line
        }
      }
    } else {
      xs = parse_doubles(pe_x);
      ys = parse_doubles(pe_y);
    }
    CorrelationResult c = pearson(xs, ys);
    nlohmann::json body{{"r", c.r}, {"n", c.n}};
    body["p"] = c.p ? nlohmann::json(*c.p) : nlohmann::json();
    emit("pearson", body);
  });

  // ---- pipeline ----
  auto* pipe = app.add_subcommand("pipeline", "run a full analysis bundle");
  pipe->require_subcommand(1);

  std::string pl_graph, pl_out, pl_config, pl_predicate, pl_mask, pl_lcc,
      pl_sep, pl_ic;
  double pl_z = -1;
  bool pl_no_skip = false;
  RandOpts pl_rand;

  auto add_pipeline = [&](Experiment e) {
    auto* cmd = pipe->add_subcommand(std::string(to_string(e)),
                                     "the " + std::string(to_string(e)) +
                                         " experiment");
    cmd->add_option("--graph", pl_graph, "graph file")->required();
    cmd->add_option("--out", pl_out, "report directory")->required();
    cmd->add_option("--config", pl_config, "experiment config JSON");
    cmd->add_option("--z-threshold", pl_z, "clustering report threshold");
    cmd->add_option("--predicate", pl_predicate, "module predicate");
    cmd->add_option("--mask", pl_mask, "distance substrate types (csv)");
    cmd->add_option("--lcc-mode", pl_lcc, "induced | shared_neighbor");
    cmd->add_option("--separation-convention", pl_sep,
                    "all_pairs | nearest_neighbor");
    cmd->add_option("--ic-mode", pl_ic, "unit | neg_log_freq");
    cmd->add_flag("--no-skip-unreachable", pl_no_skip,
                  "fail on unreachable pairs instead of excluding them");
    pl_rand.attach(cmd);
    cmd->callback([&, e] {
      nlohmann::json j = nlohmann::json::object();
      if (!pl_config.empty()) {
        std::ifstream in(pl_config);
        if (!in) throw IoError("cannot open " + pl_config);
        in >> j;
      }
      ExperimentConfig cfg = ExperimentConfig::from_json(e, j);
      cfg.randomization = pl_rand.config();
      if (pl_z >= 0) cfg.z_threshold = pl_z;
      if (!pl_predicate.empty())
        cfg.predicate = parse_predicate_or_throw(pl_predicate);
      if (!pl_mask.empty()) cfg.mask = TypeMask::parse(pl_mask);
      if (!pl_lcc.empty()) {
        auto m = parse_lcc_mode(pl_lcc);
        if (!m) throw InvalidConfig("unknown lcc mode: " + pl_lcc);
        cfg.lcc_mode = *m;
      }
      if (!pl_sep.empty()) {
        auto c = parse_separation_convention(pl_sep);
        if (!c) throw InvalidConfig("unknown convention: " + pl_sep);
        cfg.separation_convention = *c;
      }
      if (!pl_ic.empty()) {
        auto m = parse_ic_mode(pl_ic);
        if (!m) throw InvalidConfig("unknown ic mode: " + pl_ic);
        cfg.ic_mode = *m;
      }
      if (pl_no_skip) cfg.skip_unreachable = false;
      cfg.validate();

      KnowledgeGraph g = load_graph(pl_graph);
      AnalysisReport report = run_experiment(g, cfg, digest_file(pl_graph));
      report.write_bundle(pl_out);
      nlohmann::json outputs = nlohmann::json::array();
      for (const char* name : {"per_focal.csv", "pairwise.csv", "summary.json",
                               "boxplot.csv", "provenance.json"})
        outputs.push_back(file_record(pl_out + "/" + name));
      print_manifest("pipeline " + std::string(to_string(e)), outputs,
                     nlohmann::json{{"summary", report.summary}});
    });
  };
  add_pipeline(Experiment::disease_symptom);
  add_pipeline(Experiment::symptom_disease);
  add_pipeline(Experiment::disease_drug);
  add_pipeline(Experiment::diagnosis_compare);

  // ---- info ----
  auto* info = app.add_subcommand("info", "runtime build information");
  info->callback([&] {
    std::cout << nlohmann::json{{"kernels", kernels::active_impl()}}.dump(2)
              << '\n';
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DegenerateNull& e) {
    nlohmann::json body{{"error", "degenerate_null"},
                        {"message", e.what()},
                        {"observed", e.observed()},
                        {"mu", e.mu()}};
    std::cout << body.dump(2) << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
