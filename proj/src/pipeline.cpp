#include "kgprox/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "kgprox/digest.hpp"

namespace kgprox {

namespace {
constexpr const char* kToolVersion = "0.1.0";
}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::disease_symptom: return "disease_symptom";
    case Experiment::symptom_disease: return "symptom_disease";
    case Experiment::disease_drug: return "disease_drug";
    case Experiment::diagnosis_compare: return "diagnosis_compare";
  }
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view token) {
  if (token == "disease_symptom") return Experiment::disease_symptom;
  if (token == "symptom_disease") return Experiment::symptom_disease;
  if (token == "disease_drug") return Experiment::disease_drug;
  if (token == "diagnosis_compare") return Experiment::diagnosis_compare;
  return std::nullopt;
}

ExperimentConfig ExperimentConfig::defaults_for(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::disease_symptom:
      cfg.z_threshold = 1.5;
      cfg.predicate = Predicate::diagnosis;
      break;
    case Experiment::symptom_disease:
      cfg.z_threshold = 1.03;
      cfg.predicate = Predicate::diagnosis;
      break;
    case Experiment::disease_drug:
      cfg.z_threshold = 2.9;
      cfg.predicate = Predicate::treat;
      break;
    case Experiment::diagnosis_compare:
      cfg.z_threshold = 1.1;
      cfg.predicate = Predicate::differential_diagnosis;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  randomization.validate();
  switch (experiment) {
    case Experiment::disease_drug:
      if (predicate != Predicate::treat)
        throw InvalidConfig("disease_drug admits only the treat predicate");
      break;
    case Experiment::disease_symptom:
    case Experiment::symptom_disease:
      if (predicate != Predicate::diagnosis &&
          predicate != Predicate::primary_diagnosis &&
          predicate != Predicate::differential_diagnosis)
        throw InvalidConfig("symptom module experiments need a "
                            "diagnosis-tier predicate");
      break;
    case Experiment::diagnosis_compare:
      break;
  }
  if (!mask.allows(EntityType::disease))
    throw InvalidConfig("the distance substrate must include disease nodes");
}

ExperimentConfig ExperimentConfig::from_json(Experiment e,
                                             const nlohmann::json& j) {
  ExperimentConfig cfg = defaults_for(e);
  if (j.contains("z_threshold")) cfg.z_threshold = j.at("z_threshold");
  if (j.contains("predicate")) {
    auto p = parse_predicate(j.at("predicate").get<std::string>());
    if (!p) throw InvalidConfig("unknown predicate in config");
    cfg.predicate = *p;
  }
  if (j.contains("iterations"))
    cfg.randomization.iterations = j.at("iterations");
  if (j.contains("seed")) cfg.randomization.seed = j.at("seed");
  if (j.contains("null_model")) {
    auto m = parse_null_model(j.at("null_model").get<std::string>());
    if (!m) throw InvalidConfig("unknown null_model in config");
    cfg.randomization.null_model = *m;
  }
  if (j.contains("bin_floor")) cfg.randomization.bin_floor = j.at("bin_floor");
  if (j.contains("threads")) cfg.randomization.threads = j.at("threads");
  if (j.contains("mask"))
    cfg.mask = TypeMask::parse(j.at("mask").get<std::string>());
  if (j.contains("lcc_mode")) {
    auto m = parse_lcc_mode(j.at("lcc_mode").get<std::string>());
    if (!m) throw InvalidConfig("unknown lcc_mode in config");
    cfg.lcc_mode = *m;
  }
  if (j.contains("separation_convention")) {
    auto c = parse_separation_convention(
        j.at("separation_convention").get<std::string>());
    if (!c) throw InvalidConfig("unknown separation_convention in config");
    cfg.separation_convention = *c;
  }
  if (j.contains("ic_mode")) {
    auto m = parse_ic_mode(j.at("ic_mode").get<std::string>());
    if (!m) throw InvalidConfig("unknown ic_mode in config");
    cfg.ic_mode = *m;
  }
  if (j.contains("skip_unreachable"))
    cfg.skip_unreachable = j.at("skip_unreachable");
  cfg.validate();
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  return nlohmann::json{
      {"experiment", std::string(to_string(experiment))},
      {"z_threshold", z_threshold},
      {"predicate", std::string(to_string(predicate))},
      {"iterations", randomization.iterations},
      {"seed", randomization.seed},
      {"null_model", std::string(to_string(randomization.null_model))},
      {"bin_floor", randomization.bin_floor},
      {"threads", randomization.threads},
      {"mask", mask.str()},
      {"lcc_mode", std::string(to_string(lcc_mode))},
      {"separation_convention",
       std::string(to_string(separation_convention))},
      {"ic_mode", std::string(to_string(ic_mode))},
      {"skip_unreachable", skip_unreachable}};
}

FiveNum five_number_summary(std::vector<double> values) {
  if (values.empty()) throw InvalidConfig("five-number summary of nothing");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    double pos = p * static_cast<double>(values.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return FiveNum{values.front(), quantile(0.25), quantile(0.5),
                 quantile(0.75), values.back()};
}

nlohmann::json FiveNum::to_json() const {
  return nlohmann::json{
      {"min", min}, {"q1", q1}, {"median", median}, {"q3", q3}, {"max", max}};
}

namespace {

nlohmann::json correlation_json(const std::vector<double>& xs,
                                const std::vector<double>& ys) {
  try {
    CorrelationResult c = pearson(xs, ys);
    nlohmann::json j{{"r", c.r}, {"n", c.n}};
    j["p"] = c.p ? nlohmann::json(*c.p) : nlohmann::json();
    return j;
  } catch (const Error&) {
    return nlohmann::json(); // too few or constant pairs
  }
}

struct ZOutcome {
  double observed = 0, mu = 0, sigma = 0;
  std::optional<double> z;
};

template <typename Fn>
ZOutcome guarded_zscore(Fn&& fn) {
  ZOutcome out;
  try {
    ZScoreResult r = fn();
    out.observed = r.observed;
    out.mu = r.mu;
    out.sigma = r.sigma;
    out.z = r.z;
  } catch (const DegenerateNull& e) {
    out.observed = e.observed();
    out.mu = std::isnan(e.mu()) ? 0.0 : e.mu();
  } catch (const InsufficientPopulation&) {
    // module as large as its null population: no z
  }
  return out;
}

// Shared driver for the three focal-module experiments.
AnalysisReport run_module_experiment(const KnowledgeGraph& g,
                                     const ExperimentConfig& cfg,
                                     EntityType focal_type,
                                     EntityType member_type, bool with_rr) {
  cfg.validate();
  AnalysisReport report;
  report.experiment = cfg.experiment;

  std::vector<NodeModule> modules;
  std::vector<NodeIndex> focals;
  for (NodeIndex n : g.nodes_of_type(focal_type)) {
    NodeModule m = g.module_of(n, cfg.predicate, member_type);
    if (m.empty()) continue;
    modules.push_back(std::move(m));
    focals.push_back(n);
  }
  if (focals.empty())
    throw EmptyExperiment("no " + std::string(to_string(focal_type)) +
                          " has a nonempty " +
                          std::string(to_string(cfg.predicate)) + " module");

  DistanceOracle oracle(g, cfg.mask);
  DistancePolicy policy{cfg.skip_unreachable};

  for (size_t i = 0; i < focals.size(); ++i) {
    RandomizationConfig rc = cfg.randomization;
    rc.seed = mix_stream(cfg.randomization.seed, i);
    ZOutcome zo = guarded_zscore([&] {
      return lcc_zscore(g, modules[i], cfg.lcc_mode, cfg.mask, rc);
    });
    report.per_focal.push_back(AnalysisReport::PerFocal{
        g.entity(focals[i]).id, modules[i].size(),
        lcc_size(g, modules[i], cfg.lcc_mode, cfg.mask), zo.mu, zo.sigma,
        zo.z});
  }

  AssociationMatrix matrix =
      AssociationMatrix::from_graph(g, cfg.predicate, focal_type, member_type);
  AssociationMatrix matrix_t = matrix.transposed();

  for (size_t i = 0; i < focals.size(); ++i) {
    for (size_t j = i + 1; j < focals.size(); ++j) {
      AnalysisReport::Pair pair;
      pair.a = g.entity(focals[i]).id;
      pair.b = g.entity(focals[j]).id;
      try {
        pair.d_ab = network_distance(oracle, modules[i], modules[j], policy)
                        .value;
      } catch (const UnreachablePair&) {
        if (!cfg.skip_unreachable) throw;
        ++report.excluded_pairs;
        continue;
      }
      try {
        pair.s_ab = separation(oracle, modules[i], modules[j],
                               cfg.separation_convention, policy)
                        .value;
      } catch (const SingletonSet&) {
      } catch (const UnreachablePair&) {
        if (!cfg.skip_unreachable) throw;
      }
      size_t ri = matrix.require_row(pair.a);
      size_t rj = matrix.require_row(pair.b);
      pair.co_count = matrix.co_count(ri, rj);
      pair.semsim = matrix.semantic_similarity(ri, rj, cfg.ic_mode);
      if (with_rr) {
        pair.rr = matrix_t.relative_risk(matrix_t.require_col(pair.a),
                                         matrix_t.require_col(pair.b));
      }
      report.pairwise.push_back(std::move(pair));
    }
  }

  std::vector<double> zs, d_abs, s_abs;
  for (const auto& f : report.per_focal)
    if (f.z) zs.push_back(*f.z);
  for (const auto& p : report.pairwise) {
    d_abs.push_back(p.d_ab);
    if (p.s_ab) s_abs.push_back(*p.s_ab);
  }
  if (!zs.empty()) report.box["per_focal"]["z"] = five_number_summary(zs);
  if (!d_abs.empty())
    report.box["pairwise"]["d_ab"] = five_number_summary(d_abs);
  if (!s_abs.empty())
    report.box["pairwise"]["s_ab"] = five_number_summary(s_abs);

  report.z_threshold = cfg.z_threshold;
  report.summary = report.recompute_summary();
  return report;
}

} // namespace

AnalysisReport run_disease_symptom(const KnowledgeGraph& g,
                                   const ExperimentConfig& cfg) {
  return run_module_experiment(g, cfg, EntityType::disease,
                               EntityType::symptom, false);
}

AnalysisReport run_symptom_disease(const KnowledgeGraph& g,
                                   const ExperimentConfig& cfg) {
  return run_module_experiment(g, cfg, EntityType::symptom,
                               EntityType::disease, true);
}

AnalysisReport run_disease_drug(const KnowledgeGraph& g,
                                const ExperimentConfig& cfg) {
  return run_module_experiment(g, cfg, EntityType::disease, EntityType::drug,
                               false);
}

AnalysisReport run_diagnosis_compare(const KnowledgeGraph& g,
                                     const ExperimentConfig& cfg) {
  cfg.validate();
  GraphStats stats = g.stats();
  auto count_of = [&](Predicate p) {
    return stats.triples_by_predicate[static_cast<size_t>(p)];
  };
  if (count_of(Predicate::primary_diagnosis) == 0)
    throw MissingPredicate("graph has no primary_diagnosis triples");
  if (count_of(Predicate::diagnosis) == 0)
    throw MissingPredicate("graph has no diagnosis triples");

  AnalysisReport report;
  report.experiment = cfg.experiment;
  report.z_threshold = cfg.z_threshold;

  DistanceOracle oracle(g, cfg.mask);
  DistancePolicy policy{cfg.skip_unreachable};

  // Degree of association per (symptom, disease) pair: how close the
  // symptom's whole disease module sits to this one disease. A symptom
  // exclusive to the disease scores d = 0; a broadly shared symptom drags
  // in other diseases and scores higher.
  for (Predicate group :
       {Predicate::primary_diagnosis, Predicate::diagnosis}) {
    size_t ordinal = 0;
    for (const Triple& t : g.triples()) {
      if (t.predicate != group) continue;
      if (g.entity(t.head).type != EntityType::symptom) continue;
      NodeModule a = g.module_of(t.head, group, EntityType::disease);
      NodeModule b;
      b.members = {t.tail};
      b.member_type = EntityType::disease;

      AnalysisReport::ProxPair pp;
      pp.symptom = g.entity(t.head).id;
      pp.disease = g.entity(t.tail).id;
      pp.group = group;
      pp.a_size = a.size();
      try {
        pp.d = proximity_distance(oracle, a, b, policy).value;
      } catch (const UnreachableSource&) {
        if (!cfg.skip_unreachable) throw;
        ++report.excluded_pairs;
        continue;
      }
      RandomizationConfig rc = cfg.randomization;
      rc.seed = mix_stream(cfg.randomization.seed, ordinal);
      ZOutcome zo = guarded_zscore(
          [&] { return proximity_zscore(oracle, a, b, rc, policy); });
      pp.z = zo.z;
      report.prox_pairs.push_back(std::move(pp));
      ++ordinal;
    }
  }
  if (report.prox_pairs.empty())
    throw EmptyExperiment("no symptom-disease pairs to compare");

  // Differential-diagnosis symptom modules: module clustering and mutual
  // separation, mirroring the focal-module experiments.
  if (count_of(Predicate::differential_diagnosis) > 0) {
    std::vector<NodeModule> modules;
    std::vector<NodeIndex> focals;
    for (NodeIndex n : g.nodes_of_type(EntityType::disease)) {
      NodeModule m =
          g.module_of(n, Predicate::differential_diagnosis, EntityType::symptom);
      if (m.empty()) continue;
      modules.push_back(std::move(m));
      focals.push_back(n);
    }
    for (size_t i = 0; i < focals.size(); ++i) {
      RandomizationConfig rc = cfg.randomization;
      rc.seed = mix_stream(cfg.randomization.seed, 0x10000000ULL + i);
      ZOutcome zo = guarded_zscore([&] {
        return lcc_zscore(g, modules[i], cfg.lcc_mode, cfg.mask, rc);
      });
      report.per_focal.push_back(AnalysisReport::PerFocal{
          g.entity(focals[i]).id, modules[i].size(),
          lcc_size(g, modules[i], cfg.lcc_mode, cfg.mask), zo.mu, zo.sigma,
          zo.z});
    }
    for (size_t i = 0; i < focals.size(); ++i) {
      for (size_t j = i + 1; j < focals.size(); ++j) {
        AnalysisReport::Pair pair;
        pair.a = g.entity(focals[i]).id;
        pair.b = g.entity(focals[j]).id;
        try {
          pair.d_ab =
              network_distance(oracle, modules[i], modules[j], policy).value;
        } catch (const UnreachablePair&) {
          if (!cfg.skip_unreachable) throw;
          ++report.excluded_pairs;
          continue;
        }
        try {
          pair.s_ab = separation(oracle, modules[i], modules[j],
                                 cfg.separation_convention, policy)
                          .value;
        } catch (const SingletonSet&) {
        } catch (const UnreachablePair&) {
          if (!cfg.skip_unreachable) throw;
        }
        report.pairwise.push_back(std::move(pair));
      }
    }
  }

  for (Predicate group :
       {Predicate::primary_diagnosis, Predicate::diagnosis}) {
    std::vector<double> ds, zs;
    for (const auto& pp : report.prox_pairs) {
      if (pp.group != group) continue;
      ds.push_back(pp.d);
      if (pp.z) zs.push_back(*pp.z);
    }
    std::string name(to_string(group));
    if (!ds.empty()) report.box[name]["d"] = five_number_summary(ds);
    if (!zs.empty()) report.box[name]["z"] = five_number_summary(zs);
  }

  report.summary = report.recompute_summary();
  return report;
}

nlohmann::json AnalysisReport::recompute_summary() const {
  nlohmann::json s;
  s["experiment"] = std::string(to_string(experiment));
  s["z_threshold"] = z_threshold;
  s["excluded_pairs"] = excluded_pairs;

  if (experiment == Experiment::diagnosis_compare) {
    nlohmann::json groups;
    for (Predicate group :
         {Predicate::primary_diagnosis, Predicate::diagnosis}) {
      std::vector<double> ds, zs;
      for (const auto& pp : prox_pairs) {
        if (pp.group != group) continue;
        ds.push_back(pp.d);
        if (pp.z) zs.push_back(*pp.z);
      }
      nlohmann::json gj;
      gj["n"] = ds.size();
      gj["d"] = ds.empty() ? nlohmann::json()
                           : five_number_summary(ds).to_json();
      gj["z"] = zs.empty() ? nlohmann::json()
                           : five_number_summary(zs).to_json();
      gj["z_defined"] = zs.size();
      groups[std::string(to_string(group))] = gj;
    }
    s["groups"] = groups;

    nlohmann::json diff;
    if (!per_focal.empty() || !pairwise.empty()) {
      size_t above = 0, z_defined = 0;
      for (const auto& f : per_focal) {
        if (!f.z) continue;
        ++z_defined;
        if (*f.z > z_threshold) ++above;
      }
      double s_sum = 0;
      size_t s_n = 0;
      for (const auto& p : pairwise) {
        if (!p.s_ab) continue;
        s_sum += *p.s_ab;
        ++s_n;
      }
      diff["focal_count"] = per_focal.size();
      diff["z_defined"] = z_defined;
      diff["above_threshold"] = above;
      diff["pair_count"] = pairwise.size();
      diff["mean_s_ab"] =
          s_n ? nlohmann::json(s_sum / static_cast<double>(s_n))
              : nlohmann::json();
    }
    s["differential"] = diff;
    return s;
  }

  size_t above = 0, z_defined = 0;
  for (const auto& f : per_focal) {
    if (!f.z) continue;
    ++z_defined;
    if (*f.z > z_threshold) ++above;
  }
  s["focal_count"] = per_focal.size();
  s["z_defined"] = z_defined;
  s["above_threshold"] = above;
  s["pair_count"] = pairwise.size();

  double s_sum = 0, d_sum = 0;
  size_t s_n = 0;
  std::vector<double> ds, cos, sems, rrs, ds_rr, ds_sem;
  for (const auto& p : pairwise) {
    d_sum += p.d_ab;
    ds.push_back(p.d_ab);
    cos.push_back(static_cast<double>(p.co_count));
    if (p.s_ab) {
      s_sum += *p.s_ab;
      ++s_n;
    }
    if (p.semsim) {
      ds_sem.push_back(p.d_ab);
      sems.push_back(*p.semsim);
    }
    if (p.rr) {
      ds_rr.push_back(p.d_ab);
      rrs.push_back(*p.rr);
    }
  }
  s["mean_d_ab"] = ds.empty() ? nlohmann::json()
                              : nlohmann::json(d_sum / ds.size());
  s["mean_s_ab"] =
      s_n ? nlohmann::json(s_sum / static_cast<double>(s_n)) : nlohmann::json();
  s["r_d_co"] = correlation_json(ds, cos);
  s["r_d_semsim"] = correlation_json(ds_sem, sems);
  if (experiment == Experiment::symptom_disease)
    s["r_d_rr"] = correlation_json(ds_rr, rrs);
  return s;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

} // namespace

void AnalysisReport::write_bundle(const std::string& dir) const {
  nlohmann::json check = recompute_summary();
  if (check != summary)
    throw std::logic_error("summary does not match its own tables");

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create report directory: " + dir);

  auto open = [&](const char* name) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw IoError(std::string("cannot write ") + name);
    return out;
  };

  {
    auto out = open("per_focal.csv");
    out << "focal,module_size,lcc,mu,sigma,z\n";
    for (const auto& f : per_focal) {
      out << f.id << ',' << f.module_size << ',' << f.lcc << ','
          << format_double(f.mu) << ',' << format_double(f.sigma) << ','
          << opt_str(f.z) << '\n';
    }
  }
  {
    auto out = open("pairwise.csv");
    if (experiment == Experiment::diagnosis_compare && pairwise.empty() &&
        !prox_pairs.empty()) {
      out << "symptom,disease,group,a_size,d,z\n";
      for (const auto& pp : prox_pairs) {
        out << pp.symptom << ',' << pp.disease << ','
            << to_string(pp.group) << ',' << pp.a_size << ','
            << format_double(pp.d) << ',' << opt_str(pp.z) << '\n';
      }
    } else {
      out << "a,b,d_ab,s_ab,co_count,rr,semsim\n";
      for (const auto& p : pairwise) {
        out << p.a << ',' << p.b << ',' << format_double(p.d_ab) << ','
            << opt_str(p.s_ab) << ',' << p.co_count << ',' << opt_str(p.rr)
            << ',' << opt_str(p.semsim) << '\n';
      }
      if (experiment == Experiment::diagnosis_compare) {
        // Prox pairs share the file, separated by a second header.
        out << "symptom,disease,group,a_size,d,z\n";
        for (const auto& pp : prox_pairs) {
          out << pp.symptom << ',' << pp.disease << ','
              << to_string(pp.group) << ',' << pp.a_size << ','
              << format_double(pp.d) << ',' << opt_str(pp.z) << '\n';
        }
      }
    }
  }
  {
    auto out = open("boxplot.csv");
    out << "group,stat,min,q1,median,q3,max\n";
    for (const auto& [group, stats] : box) {
      for (const auto& [stat, fn] : stats) {
        out << group << ',' << stat << ',' << format_double(fn.min) << ','
            << format_double(fn.q1) << ',' << format_double(fn.median) << ','
            << format_double(fn.q3) << ',' << format_double(fn.max) << '\n';
      }
    }
  }
  {
    auto out = open("summary.json");
    out << summary.dump(2) << '\n';
  }
  {
    auto out = open("provenance.json");
    out << provenance.dump(2) << '\n';
  }
}

AnalysisReport run_experiment(const KnowledgeGraph& g,
                              const ExperimentConfig& cfg,
                              const std::string& input_digest) {
  AnalysisReport report;
  switch (cfg.experiment) {
    case Experiment::disease_symptom:
      report = run_disease_symptom(g, cfg);
      break;
    case Experiment::symptom_disease:
      report = run_symptom_disease(g, cfg);
      break;
    case Experiment::disease_drug:
      report = run_disease_drug(g, cfg);
      break;
    case Experiment::diagnosis_compare:
      report = run_diagnosis_compare(g, cfg);
      break;
  }
  nlohmann::json cfg_json = cfg.to_json();
  report.provenance = nlohmann::json{
      {"tool_version", kToolVersion},
      {"experiment", std::string(to_string(cfg.experiment))},
      {"config", cfg_json},
      {"config_hash", fnv1a64_hex(cfg_json.dump())},
      {"input_digest",
       input_digest.empty() ? fnv1a64_hex(g.to_json().dump()) : input_digest},
      {"seed", cfg.randomization.seed}};
  return report;
}

} // namespace kgprox
