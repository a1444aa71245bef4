#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgprox/error.hpp"

#include "json.hpp"

namespace kgprox {

enum class EntityType : uint8_t {
  patient,
  symptom,
  severity,
  risk_factor,
  drug,
  disease,
};
inline constexpr int kEntityTypeCount = 6;

enum class Predicate : uint8_t {
  suffer,
  treat,
  diagnosis,
  primary_diagnosis,
  differential_diagnosis,
  cause,
};
inline constexpr int kPredicateCount = 6;

std::string_view to_string(EntityType t);
std::string_view to_string(Predicate p);

// Accepts the lowercase snake_case token. "diagnosed_disease" and
// "differential_diagnosed_disease" fold into `disease`.
std::optional<EntityType> parse_entity_type(std::string_view token);
std::optional<Predicate> parse_predicate(std::string_view token);

// The seven legal (head type, predicate, tail type) combinations.
bool schema_allows(EntityType head, Predicate p, EntityType tail);

// Which node types participate in an analysis. The default distance
// substrate drops patient and severity nodes: patient codes would create
// shortcut paths between otherwise unrelated diseases.
struct TypeMask {
  std::array<bool, kEntityTypeCount> allow{};

  static TypeMask all();
  static TypeMask none();
  static TypeMask default_substrate(); // symptom, disease, drug, risk_factor
  static TypeMask parse(std::string_view csv); // "symptom,disease,..."

  bool allows(EntityType t) const {
    return allow[static_cast<size_t>(t)];
  }
  TypeMask& set(EntityType t, bool v = true) {
    allow[static_cast<size_t>(t)] = v;
    return *this;
  }
  std::string str() const;
  bool operator==(const TypeMask&) const = default;
};

using NodeIndex = uint32_t;

struct Entity {
  std::string id; // "<type>:<name>", stable across reruns
  std::string name;
  EntityType type;
  std::vector<std::string> aliases; // sorted, contains name
};

struct Triple {
  NodeIndex head;
  Predicate predicate;
  NodeIndex tail;
  uint32_t count; // input multiplicity before dedup
};

// One pre-validation input record, as read from the TSV.
struct TripleRow {
  std::string head;
  EntityType head_type;
  Predicate predicate;
  std::string tail;
  EntityType tail_type;
  std::vector<std::string> head_aliases; // optional extra surfaces
  std::vector<std::string> tail_aliases;
};

struct GraphStats {
  std::array<uint64_t, kEntityTypeCount> entities_by_type{};
  std::array<uint64_t, kPredicateCount> triples_by_predicate{};
  uint64_t entity_count = 0;
  uint64_t triple_count = 0; // distinct (head, predicate, tail)
  uint64_t edge_count = 0;   // distinct undirected entity pairs

  nlohmann::json to_json() const;
};

// A single-type node set derived from a focal entity and a predicate.
struct NodeModule {
  std::optional<NodeIndex> focal;
  std::vector<NodeIndex> members; // sorted, unique
  EntityType member_type;
  std::optional<Predicate> predicate;

  bool empty() const { return members.empty(); }
  size_t size() const { return members.size(); }
};

// Immutable typed multigraph. Safe to share read-only across threads once
// constructed; entity indices are assigned by (name, type) sort so equal
// inputs always produce the identical graph regardless of row order.
class KnowledgeGraph {
public:
  static KnowledgeGraph from_rows(std::span<const TripleRow> rows);
  static KnowledgeGraph from_tsv(std::istream& in);
  static KnowledgeGraph from_tsv_file(const std::string& path);
  static KnowledgeGraph from_json(const nlohmann::json& j);
  static KnowledgeGraph from_json_file(const std::string& path);

  nlohmann::json to_json() const;

  size_t node_count() const { return entities_.size(); }
  const Entity& entity(NodeIndex n) const { return entities_.at(n); }
  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<Triple>& triples() const { return triples_; }

  // Lookup by id ("disease:depression") or by bare name. A bare name that
  // exists under several types is rejected as ambiguous.
  std::optional<NodeIndex> find(std::string_view name_or_id) const;
  NodeIndex require(std::string_view name_or_id) const; // throws UnknownNode

  const std::vector<NodeIndex>& nodes_of_type(EntityType t) const {
    return by_type_[static_cast<size_t>(t)];
  }

  struct Edge {
    NodeIndex to;
    uint8_t predicates; // bitmask over Predicate
    uint32_t count;     // summed triple multiplicity on this pair
  };
  std::span<const Edge> adjacency(NodeIndex n) const;

  // Entities sharing >=1 triple with `node`, excluding the node itself.
  // `predicate_mask` is a bitmask over Predicate (0 = all).
  std::vector<NodeIndex> neighbors(NodeIndex node, uint8_t predicate_mask = 0,
                                   std::optional<TypeMask> type_filter =
                                       std::nullopt) const;

  NodeModule module_of(NodeIndex focal, Predicate p,
                       EntityType member_type) const;

  // Degree on the masked undirected view.
  size_t degree(NodeIndex n, const TypeMask& mask) const;

  GraphStats stats() const { return stats_; }

private:
  std::vector<Entity> entities_;
  std::vector<Triple> triples_;
  std::vector<std::vector<Edge>> adj_;
  std::array<std::vector<NodeIndex>, kEntityTypeCount> by_type_;
  std::unordered_map<std::string, NodeIndex> by_id_;
  std::unordered_map<std::string, std::vector<NodeIndex>> by_name_;
  GraphStats stats_;

  void build_indexes();
};

inline constexpr uint8_t predicate_bit(Predicate p) {
  return static_cast<uint8_t>(1u << static_cast<uint8_t>(p));
}

// TSV header expected by ingestion.
inline constexpr std::string_view kTripleTsvHeader =
    "head\thead_type\tpredicate\ttail\ttail_type";

void write_tsv(const std::vector<TripleRow>& rows, std::ostream& out);

} // namespace kgprox
