#include "kgprox/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kgprox {

namespace {

constexpr std::string_view kTypeNames[kEntityTypeCount] = {
    "patient", "symptom", "severity", "risk_factor", "drug", "disease"};

constexpr std::string_view kPredicateNames[kPredicateCount] = {
    "suffer",
    "treat",
    "diagnosis",
    "primary_diagnosis",
    "differential_diagnosis",
    "cause"};

} // namespace

std::string_view to_string(EntityType t) {
  return kTypeNames[static_cast<size_t>(t)];
}

std::string_view to_string(Predicate p) {
  return kPredicateNames[static_cast<size_t>(p)];
}

std::optional<EntityType> parse_entity_type(std::string_view token) {
  for (int i = 0; i < kEntityTypeCount; ++i) {
    if (token == kTypeNames[i]) return static_cast<EntityType>(i);
  }
  // Source data may still carry the pre-merge disease subtypes.
  if (token == "diagnosed_disease" || token == "differential_diagnosed_disease")
    return EntityType::disease;
  return std::nullopt;
}

std::optional<Predicate> parse_predicate(std::string_view token) {
  for (int i = 0; i < kPredicateCount; ++i) {
    if (token == kPredicateNames[i]) return static_cast<Predicate>(i);
  }
  return std::nullopt;
}

bool schema_allows(EntityType head, Predicate p, EntityType tail) {
  if (tail != EntityType::disease) return false;
  switch (p) {
    case Predicate::suffer: return head == EntityType::patient;
    case Predicate::treat: return head == EntityType::drug;
    case Predicate::diagnosis:
      return head == EntityType::symptom || head == EntityType::severity;
    case Predicate::primary_diagnosis:
    case Predicate::differential_diagnosis:
      return head == EntityType::symptom;
    case Predicate::cause: return head == EntityType::risk_factor;
  }
  return false;
}

TypeMask TypeMask::all() {
  TypeMask m;
  m.allow.fill(true);
  return m;
}

TypeMask TypeMask::none() { return TypeMask{}; }

TypeMask TypeMask::default_substrate() {
  TypeMask m;
  m.set(EntityType::symptom)
      .set(EntityType::disease)
      .set(EntityType::drug)
      .set(EntityType::risk_factor);
  return m;
}

TypeMask TypeMask::parse(std::string_view csv) {
  TypeMask m;
  if (csv == "all") return all();
  size_t pos = 0;
  while (pos <= csv.size()) {
    size_t comma = csv.find(',', pos);
    std::string_view tok = csv.substr(
        pos, comma == std::string_view::npos ? csv.size() - pos : comma - pos);
    if (!tok.empty()) {
      auto t = parse_entity_type(tok);
      if (!t) throw UnknownType("unknown entity type in mask: " + std::string(tok));
      m.set(*t);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return m;
}

std::string TypeMask::str() const {
  std::string out;
  for (int i = 0; i < kEntityTypeCount; ++i) {
    if (!allow[i]) continue;
    if (!out.empty()) out += ',';
    out += kTypeNames[i];
  }
  return out;
}

nlohmann::json GraphStats::to_json() const {
  nlohmann::json ents, preds;
  for (int i = 0; i < kEntityTypeCount; ++i)
    ents[std::string(kTypeNames[i])] = entities_by_type[i];
  for (int i = 0; i < kPredicateCount; ++i)
    preds[std::string(kPredicateNames[i])] = triples_by_predicate[i];
  return nlohmann::json{{"entities_by_type", ents},
                        {"triples_by_predicate", preds},
                        {"entity_count", entity_count},
                        {"triple_count", triple_count},
                        {"edge_count", edge_count}};
}

KnowledgeGraph KnowledgeGraph::from_rows(std::span<const TripleRow> rows) {
  // Collect entities keyed by (name, type); the sorted key order defines
  // node indices, so any permutation of rows builds the same graph.
  struct EntityDraft {
    std::set<std::string> aliases;
  };
  std::map<std::pair<std::string, int>, EntityDraft> drafts;

  auto add_entity = [&](const std::string& name, EntityType type,
                        const std::vector<std::string>& aliases,
                        size_t row_index) {
    if (name.empty())
      throw EmptyName("empty entity name at row " + std::to_string(row_index));
    auto& d = drafts[{name, static_cast<int>(type)}];
    d.aliases.insert(name);
    d.aliases.insert(aliases.begin(), aliases.end());
  };

  for (size_t i = 0; i < rows.size(); ++i) {
    const TripleRow& r = rows[i];
    if (!schema_allows(r.head_type, r.predicate, r.tail_type)) {
      std::ostringstream msg;
      msg << "illegal triple schema at row " << (i + 1) << ": ("
          << to_string(r.head_type) << ", " << to_string(r.predicate) << ", "
          << to_string(r.tail_type) << ")";
      throw SchemaViolation(msg.str());
    }
    add_entity(r.head, r.head_type, r.head_aliases, i + 1);
    add_entity(r.tail, r.tail_type, r.tail_aliases, i + 1);
  }

  KnowledgeGraph g;
  std::map<std::pair<std::string, int>, NodeIndex> index;
  for (auto& [key, draft] : drafts) {
    NodeIndex n = static_cast<NodeIndex>(g.entities_.size());
    Entity e;
    e.name = key.first;
    e.type = static_cast<EntityType>(key.second);
    e.id = std::string(to_string(e.type)) + ":" + e.name;
    e.aliases.assign(draft.aliases.begin(), draft.aliases.end());
    g.entities_.push_back(std::move(e));
    index[key] = n;
  }

  // Dedup triples, retaining input multiplicity.
  std::map<std::tuple<NodeIndex, int, NodeIndex>, uint32_t> triple_counts;
  for (const TripleRow& r : rows) {
    NodeIndex h = index.at({r.head, static_cast<int>(r.head_type)});
    NodeIndex t = index.at({r.tail, static_cast<int>(r.tail_type)});
    ++triple_counts[{h, static_cast<int>(r.predicate), t}];
  }
  for (const auto& [key, count] : triple_counts) {
    g.triples_.push_back(Triple{std::get<0>(key),
                                static_cast<Predicate>(std::get<1>(key)),
                                std::get<2>(key), count});
  }

  g.build_indexes();
  return g;
}

void KnowledgeGraph::build_indexes() {
  adj_.assign(entities_.size(), {});

  // One undirected edge per distinct entity pair; predicate labels and
  // multiplicity retained as annotations.
  std::map<std::pair<NodeIndex, NodeIndex>, std::pair<uint8_t, uint32_t>> edges;
  for (const Triple& t : triples_) {
    auto key = std::minmax(t.head, t.tail);
    auto& e = edges[{key.first, key.second}];
    e.first |= predicate_bit(t.predicate);
    e.second += t.count;
  }
  for (const auto& [pair, label] : edges) {
    adj_[pair.first].push_back(Edge{pair.second, label.first, label.second});
    adj_[pair.second].push_back(Edge{pair.first, label.first, label.second});
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end(),
              [](const Edge& a, const Edge& b) { return a.to < b.to; });
  }

  for (NodeIndex n = 0; n < entities_.size(); ++n) {
    const Entity& e = entities_[n];
    by_type_[static_cast<size_t>(e.type)].push_back(n);
    by_id_[e.id] = n;
    by_name_[e.name].push_back(n);
  }

  stats_ = GraphStats{};
  stats_.entity_count = entities_.size();
  stats_.triple_count = triples_.size();
  stats_.edge_count = edges.size();
  for (const Entity& e : entities_)
    ++stats_.entities_by_type[static_cast<size_t>(e.type)];
  for (const Triple& t : triples_)
    ++stats_.triples_by_predicate[static_cast<size_t>(t.predicate)];
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return out;
}

} // namespace

KnowledgeGraph KnowledgeGraph::from_tsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw IoError("triple file is empty (missing header row)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTripleTsvHeader)
    throw SchemaViolation("bad TSV header, expected: " +
                          std::string(kTripleTsvHeader));

  std::vector<TripleRow> rows;
  size_t row_index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_index;
    auto fields = split_tabs(line);
    if (fields.size() != 5)
      throw SchemaViolation("row " + std::to_string(row_index) +
                            ": expected 5 tab-separated fields, got " +
                            std::to_string(fields.size()));
    auto head_type = parse_entity_type(fields[1]);
    if (!head_type)
      throw UnknownType("row " + std::to_string(row_index) +
                        ": unknown entity type '" + fields[1] + "'");
    auto pred = parse_predicate(fields[2]);
    if (!pred)
      throw SchemaViolation("row " + std::to_string(row_index) +
                            ": unknown predicate '" + fields[2] + "'");
    auto tail_type = parse_entity_type(fields[4]);
    if (!tail_type)
      throw UnknownType("row " + std::to_string(row_index) +
                        ": unknown entity type '" + fields[4] + "'");
    if (fields[0].empty() || fields[3].empty())
      throw EmptyName("row " + std::to_string(row_index) +
                      ": empty entity name");
    if (!schema_allows(*head_type, *pred, *tail_type))
      throw SchemaViolation("row " + std::to_string(row_index) +
                            ": illegal combination (" + fields[1] + ", " +
                            fields[2] + ", " + fields[4] + ")");
    rows.push_back(TripleRow{fields[0], *head_type, *pred, fields[3],
                             *tail_type, {}, {}});
  }
  return from_rows(rows);
}

KnowledgeGraph KnowledgeGraph::from_tsv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open triple file: " + path);
  return from_tsv(in);
}

nlohmann::json KnowledgeGraph::to_json() const {
  nlohmann::json ents = nlohmann::json::array();
  for (const Entity& e : entities_) {
    ents.push_back({{"id", e.id},
                    {"name", e.name},
                    {"type", std::string(to_string(e.type))},
                    {"aliases", e.aliases}});
  }
  nlohmann::json triples = nlohmann::json::array();
  for (const Triple& t : triples_) {
    triples.push_back({{"head", entities_[t.head].id},
                       {"predicate", std::string(to_string(t.predicate))},
                       {"tail", entities_[t.tail].id},
                       {"count", t.count}});
  }
  return nlohmann::json{
      {"entities", ents}, {"triples", triples}, {"stats", stats_.to_json()}};
}

KnowledgeGraph KnowledgeGraph::from_json(const nlohmann::json& j) {
  if (!j.contains("entities") || !j.contains("triples"))
    throw SchemaViolation("graph JSON must contain 'entities' and 'triples'");

  struct Rec {
    std::string name;
    EntityType type;
    std::vector<std::string> aliases;
  };
  std::unordered_map<std::string, Rec> by_id;
  for (const auto& e : j.at("entities")) {
    Rec r;
    r.name = e.at("name").get<std::string>();
    auto type = parse_entity_type(e.at("type").get<std::string>());
    if (!type) throw UnknownType("unknown entity type in graph JSON");
    r.type = *type;
    if (e.contains("aliases"))
      r.aliases = e.at("aliases").get<std::vector<std::string>>();
    by_id[e.at("id").get<std::string>()] = std::move(r);
  }

  std::vector<TripleRow> rows;
  for (const auto& t : j.at("triples")) {
    auto pred = parse_predicate(t.at("predicate").get<std::string>());
    if (!pred) throw SchemaViolation("unknown predicate in graph JSON");
    auto hit = by_id.find(t.at("head").get<std::string>());
    auto tit = by_id.find(t.at("tail").get<std::string>());
    if (hit == by_id.end() || tit == by_id.end())
      throw SchemaViolation("triple references unknown entity id");
    uint32_t count = t.contains("count") ? t.at("count").get<uint32_t>() : 1u;
    TripleRow row{hit->second.name, hit->second.type,     *pred,
                  tit->second.name, tit->second.type,     hit->second.aliases,
                  tit->second.aliases};
    for (uint32_t i = 0; i < count; ++i) rows.push_back(row);
  }
  return from_rows(rows);
}

KnowledgeGraph KnowledgeGraph::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation("invalid graph JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

std::optional<NodeIndex> KnowledgeGraph::find(std::string_view name_or_id) const {
  std::string key(name_or_id);
  if (auto it = by_id_.find(key); it != by_id_.end()) return it->second;
  if (auto it = by_name_.find(key); it != by_name_.end()) {
    if (it->second.size() == 1) return it->second.front();
    throw UnknownNode("ambiguous entity name '" + key +
                      "', qualify it as <type>:<name>");
  }
  return std::nullopt;
}

NodeIndex KnowledgeGraph::require(std::string_view name_or_id) const {
  auto n = find(name_or_id);
  if (!n) throw UnknownNode("unknown entity: " + std::string(name_or_id));
  return *n;
}

std::span<const KnowledgeGraph::Edge>
KnowledgeGraph::adjacency(NodeIndex n) const {
  if (n >= adj_.size())
    throw UnknownNode("node index out of range: " + std::to_string(n));
  return adj_[n];
}

std::vector<NodeIndex> KnowledgeGraph::neighbors(
    NodeIndex node, uint8_t predicate_mask,
    std::optional<TypeMask> type_filter) const {
  std::vector<NodeIndex> out;
  for (const Edge& e : adjacency(node)) {
    if (predicate_mask != 0 && (e.predicates & predicate_mask) == 0) continue;
    if (type_filter && !type_filter->allows(entities_[e.to].type)) continue;
    out.push_back(e.to);
  }
  return out;
}

NodeModule KnowledgeGraph::module_of(NodeIndex focal, Predicate p,
                                     EntityType member_type) const {
  const Entity& f = entity(focal);
  if (!schema_allows(member_type, p, f.type) &&
      !schema_allows(f.type, p, member_type)) {
    throw IllegalSchema("no legal schema links " +
                        std::string(to_string(member_type)) + " and " +
                        std::string(to_string(f.type)) + " via " +
                        std::string(to_string(p)));
  }
  NodeModule m;
  m.focal = focal;
  m.member_type = member_type;
  m.predicate = p;
  TypeMask tf = TypeMask::none().set(member_type);
  m.members = neighbors(focal, predicate_bit(p), tf);
  return m;
}

size_t KnowledgeGraph::degree(NodeIndex n, const TypeMask& mask) const {
  size_t d = 0;
  for (const Edge& e : adjacency(n)) {
    if (mask.allows(entities_[e.to].type)) ++d;
  }
  return d;
}

void write_tsv(const std::vector<TripleRow>& rows, std::ostream& out) {
  out << kTripleTsvHeader << '\n';
  for (const TripleRow& r : rows) {
    out << r.head << '\t' << to_string(r.head_type) << '\t'
        << to_string(r.predicate) << '\t' << r.tail << '\t'
        << to_string(r.tail_type) << '\n';
  }
}

} // namespace kgprox
