#include "kgprox/align.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "kgprox/kernels.hpp"

namespace kgprox {

std::vector<uint32_t> utf8_codepoints(std::string_view s) {
  std::vector<uint32_t> cps;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    uint32_t cp = c;
    size_t len = 1;
    if ((c & 0x80u) == 0) {
      len = 1;
    } else if ((c & 0xE0u) == 0xC0u) {
      len = 2;
      cp = c & 0x1Fu;
    } else if ((c & 0xF0u) == 0xE0u) {
      len = 3;
      cp = c & 0x0Fu;
    } else if ((c & 0xF8u) == 0xF0u) {
      len = 4;
      cp = c & 0x07u;
    }
    if (len > 1) {
      if (i + len > s.size()) {
        cps.push_back(c); // truncated sequence: pass byte through
        ++i;
        continue;
      }
      bool ok = true;
      uint32_t acc = cp;
      for (size_t k = 1; k < len; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0u) != 0x80u) {
          ok = false;
          break;
        }
        acc = (acc << 6) | (cc & 0x3Fu);
      }
      if (!ok) {
        cps.push_back(c);
        ++i;
        continue;
      }
      cp = acc;
    }
    cps.push_back(cp);
    i += len;
  }
  return cps;
}

double jaccard_text(std::string_view a, std::string_view b, bool multiset) {
  auto ca = utf8_codepoints(a);
  auto cb = utf8_codepoints(b);
  if (ca.empty() && cb.empty()) return 1.0; // limit of identical inputs
  std::map<uint32_t, size_t> fa, fb;
  for (uint32_t c : ca) ++fa[c];
  for (uint32_t c : cb) ++fb[c];
  double inter = 0.0, uni = 0.0;
  auto ita = fa.begin();
  auto itb = fb.begin();
  while (ita != fa.end() || itb != fb.end()) {
    if (itb == fb.end() || (ita != fa.end() && ita->first < itb->first)) {
      uni += multiset ? ita->second : 1;
      ++ita;
    } else if (ita == fa.end() || itb->first < ita->first) {
      uni += multiset ? itb->second : 1;
      ++itb;
    } else {
      if (multiset) {
        inter += std::min(ita->second, itb->second);
        uni += std::max(ita->second, itb->second);
      } else {
        inter += 1;
        uni += 1;
      }
      ++ita;
      ++itb;
    }
  }
  return inter / uni;
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionMismatch("vector dimensions differ: " +
                            std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  double na = kernels::sumsq(a);
  double nb = kernels::sumsq(b);
  if (na == 0.0 || nb == 0.0)
    throw ZeroVector("cosine similarity undefined for an all-zero vector");
  return kernels::dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

const std::vector<double>& EmbeddingTable::require(
    const std::string& surface) const {
  auto it = vectors.find(surface);
  if (it == vectors.end())
    throw MissingEmbedding("no embedding for surface string '" + surface + "'");
  return it->second;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path);
  EmbeddingTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw SchemaViolation("embedding line " + std::to_string(lineno) +
                            ": missing tab separator");
    std::string surface = line.substr(0, tab);
    std::vector<double> vec;
    std::istringstream vals(line.substr(tab + 1));
    double v;
    while (vals >> v) vec.push_back(v);
    if (vec.empty())
      throw SchemaViolation("embedding line " + std::to_string(lineno) +
                            ": no vector components");
    if (table.dim == 0) table.dim = vec.size();
    if (vec.size() != table.dim)
      throw DimensionMismatch("embedding line " + std::to_string(lineno) +
                              ": dimension " + std::to_string(vec.size()) +
                              " != " + std::to_string(table.dim));
    if (std::all_of(vec.begin(), vec.end(), [](double x) { return x == 0.0; }))
      throw ZeroVector("embedding line " + std::to_string(lineno) +
                       ": all-zero vector rejected");
    table.vectors[surface] = std::move(vec);
  }
  return table;
}

EmbeddingTable EmbeddingTable::char_bigram(
    std::span<const std::string> corpus) {
  // Boundary-padded codepoint bigrams. 0 never collides with a real
  // codepoint, so it doubles as the start/end marker.
  auto bigrams_of = [](const std::string& s) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    auto cps = utf8_codepoints(s);
    uint32_t prev = 0;
    for (uint32_t c : cps) {
      out.emplace_back(prev, c);
      prev = c;
    }
    out.emplace_back(prev, 0);
    return out;
  };

  std::map<std::pair<uint32_t, uint32_t>, size_t> vocab;
  for (const std::string& s : corpus) {
    for (auto bg : bigrams_of(s)) vocab.emplace(bg, 0);
  }
  size_t idx = 0;
  for (auto& [bg, slot] : vocab) slot = idx++;

  EmbeddingTable table;
  table.dim = vocab.size();
  for (const std::string& s : corpus) {
    if (table.vectors.count(s)) continue;
    std::vector<double> vec(table.dim, 0.0);
    for (auto bg : bigrams_of(s)) vec[vocab.at(bg)] += 1.0;
    table.vectors[s] = std::move(vec);
  }
  return table;
}

double combined_sim(const std::string& a, const std::string& b,
                    const EmbeddingTable& emb, SimWeights weights) {
  double sim_t = jaccard_text(a, b);
  double sim_s = cosine_sim(emb.require(a), emb.require(b));
  return weights.text * sim_t + weights.semantic * sim_s;
}

namespace {

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), size_t{0});
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void merge(size_t a, size_t b) { parent[find(a)] = find(b); }
};

} // namespace

AlignmentResult align(std::span<const AlignmentInput> entities,
                      const EmbeddingTable& emb, double threshold,
                      SimWeights weights) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw InvalidConfig("alignment threshold must lie in (0, 1]");

  // Dedup on (type, surface), summing frequencies, then sort so the result
  // is independent of input order.
  std::map<std::pair<int, std::string>, uint64_t> uniq;
  for (const AlignmentInput& e : entities)
    uniq[{static_cast<int>(e.type), e.surface}] += e.frequency;

  struct Item {
    std::string surface;
    EntityType type;
    uint64_t frequency;
  };
  std::vector<Item> items;
  items.reserve(uniq.size());
  for (const auto& [key, freq] : uniq)
    items.push_back(
        Item{key.second, static_cast<EntityType>(key.first), freq});

  struct ScoredPair {
    double sim;
    size_t a, b; // a < b in items order (lexicographic within type)
  };
  std::vector<ScoredPair> pairs;
  for (size_t i = 0; i < items.size(); ++i) {
    for (size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].type != items[j].type) continue;
      double sim =
          combined_sim(items[i].surface, items[j].surface, emb, weights);
      if (sim >= threshold) pairs.push_back(ScoredPair{sim, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [&](const ScoredPair& x, const ScoredPair& y) {
              if (x.sim != y.sim) return x.sim > y.sim;
              if (items[x.a].surface != items[y.a].surface)
                return items[x.a].surface < items[y.a].surface;
              return items[x.b].surface < items[y.b].surface;
            });

  UnionFind uf(items.size());
  for (const ScoredPair& p : pairs) uf.merge(p.a, p.b);

  std::map<size_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < items.size(); ++i) groups[uf.find(i)].push_back(i);

  AlignmentResult result;
  result.threshold = threshold;
  for (const auto& [root, member_idx] : groups) {
    AlignmentResult::Cluster c;
    c.type = items[member_idx.front()].type;
    size_t best = member_idx.front();
    for (size_t i : member_idx) {
      c.members.push_back(items[i].surface);
      if (items[i].frequency > items[best].frequency ||
          (items[i].frequency == items[best].frequency &&
           items[i].surface < items[best].surface)) {
        best = i;
      }
    }
    std::sort(c.members.begin(), c.members.end());
    c.canonical = items[best].surface;
    result.clusters.push_back(std::move(c));
  }
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const auto& a, const auto& b) {
              if (a.type != b.type) return a.type < b.type;
              return a.canonical < b.canonical;
            });
  for (const auto& c : result.clusters) {
    for (const std::string& m : c.members)
      result.canonical_map[{static_cast<int>(c.type), m}] = c.canonical;
  }
  return result;
}

const std::string& AlignmentResult::canonical(
    EntityType type, const std::string& surface) const {
  auto it = canonical_map.find({static_cast<int>(type), surface});
  return it == canonical_map.end() ? surface : it->second;
}

void write_alignment_csv(const AlignmentResult& result,
                         const EmbeddingTable& emb, std::ostream& out,
                         SimWeights weights) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  };
  out << "surface,canonical,cluster_id,score\n";
  for (size_t cid = 0; cid < result.clusters.size(); ++cid) {
    const auto& c = result.clusters[cid];
    for (const std::string& m : c.members) {
      double score =
          m == c.canonical ? 1.0 : combined_sim(m, c.canonical, emb, weights);
      out << quote(m) << ',' << quote(c.canonical) << ',' << cid << ','
          << score << '\n';
    }
  }
}

KnowledgeGraph apply_alignment(const KnowledgeGraph& g,
                               const AlignmentResult& result) {
  std::vector<TripleRow> rows;
  for (const Triple& t : g.triples()) {
    const Entity& h = g.entity(t.head);
    const Entity& tl = g.entity(t.tail);
    TripleRow row;
    row.head = result.canonical(h.type, h.name);
    row.head_type = h.type;
    row.predicate = t.predicate;
    row.tail = result.canonical(tl.type, tl.name);
    row.tail_type = tl.type;
    // Merged surfaces survive as aliases on the canonical entity.
    row.head_aliases = h.aliases;
    row.head_aliases.push_back(h.name);
    row.tail_aliases = tl.aliases;
    row.tail_aliases.push_back(tl.name);
    for (uint32_t i = 0; i < t.count; ++i) rows.push_back(row);
  }
  return KnowledgeGraph::from_rows(rows);
}

} // namespace kgprox
