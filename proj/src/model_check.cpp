#include "lcrn/model_check.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <string_view>

#include "lcrn/errors.hpp"
#include "lcrn/kinetics.hpp"

namespace lcrn {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

void encode(std::span<const Count> counts, std::vector<std::uint8_t>& out) {
  out.clear();
  for (Count c : counts) {
    while (c >= 0x80) {
      out.push_back(static_cast<std::uint8_t>(c | 0x80));
      c >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(c));
  }
}

void decode(std::span<const std::uint8_t> bytes, std::vector<Count>& out) {
  out.clear();
  Count value = 0;
  unsigned shift = 0;
  for (std::uint8_t b : bytes) {
    value |= static_cast<Count>(b & 0x7F) << shift;
    if (b & 0x80) {
      shift += 7;
    } else {
      out.push_back(value);
      value = 0;
      shift = 0;
    }
  }
}

}  // namespace

std::uint64_t ReachabilityGraph::hashBytes(std::span<const std::uint8_t> b) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t x : b) {
    h ^= x;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

std::span<const std::uint8_t> ReachabilityGraph::bytes(NodeId n) const {
  return {arena_.data() + offsets_[n], static_cast<std::size_t>(offsets_[n + 1] - offsets_[n])};
}

std::optional<NodeId> ReachabilityGraph::lookup(std::span<const std::uint8_t> key,
                                                std::uint64_t h) const {
  if (slots_.empty()) return std::nullopt;
  std::size_t mask = slots_.size() - 1;
  for (std::size_t i = h & mask;; i = (i + 1) & mask) {
    std::uint32_t slot = slots_[i];
    if (slot == 0) return std::nullopt;
    NodeId id = slot - 1;
    if (hashes_[id] == h) {
      auto b = bytes(id);
      if (std::equal(b.begin(), b.end(), key.begin(), key.end())) return id;
    }
  }
}

void ReachabilityGraph::rehash(std::size_t capacity) {
  slots_.assign(capacity, 0);
  std::size_t mask = capacity - 1;
  for (NodeId id = 0; id < hashes_.size(); ++id) {
    std::size_t i = hashes_[id] & mask;
    while (slots_[i] != 0) i = (i + 1) & mask;
    slots_[i] = id + 1;
  }
}

NodeId ReachabilityGraph::insert(std::span<const std::uint8_t> key, std::uint64_t h) {
  NodeId id = static_cast<NodeId>(hashes_.size());
  arena_.insert(arena_.end(), key.begin(), key.end());
  offsets_.push_back(arena_.size());
  hashes_.push_back(h);
  if (2 * hashes_.size() > slots_.size()) {
    rehash(std::max<std::size_t>(1024, slots_.size() * 2));
  } else {
    std::size_t mask = slots_.size() - 1;
    std::size_t i = h & mask;
    while (slots_[i] != 0) i = (i + 1) & mask;
    slots_[i] = id + 1;
  }
  return id;
}

Configuration ReachabilityGraph::config(NodeId n) const {
  std::vector<Count> counts;
  decode(bytes(n), counts);
  return Configuration(std::move(counts));
}

std::optional<NodeId> ReachabilityGraph::find(const Configuration& c) const {
  std::vector<std::uint8_t> key;
  encode(c.counts(), key);
  return lookup(key, hashBytes(key));
}

std::span<const NodeId> ReachabilityGraph::successors(NodeId n) const {
  if (n >= expandedCount_) return {};
  return {targets_.data() + edgeStart_[n],
          static_cast<std::size_t>(edgeStart_[n + 1] - edgeStart_[n])};
}

std::span<const std::uint32_t> ReachabilityGraph::edgeReactions(NodeId n) const {
  if (n >= expandedCount_) return {};
  return {labels_.data() + edgeStart_[n],
          static_cast<std::size_t>(edgeStart_[n + 1] - edgeStart_[n])};
}

std::vector<std::uint32_t> ReachabilityGraph::pathTo(NodeId n) const {
  std::vector<std::uint32_t> path;
  while (n != root()) {
    path.push_back(parentReaction_[n]);
    n = parent_[n];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ReachabilityGraph::Condensation ReachabilityGraph::condense() const {
  const std::size_t n = numNodes();
  Condensation out;
  out.componentOf.assign(n, kNone);
  std::vector<std::uint32_t> index(n, kNone), low(n, 0);
  std::vector<bool> onStack(n, false);
  std::vector<NodeId> stack;
  struct Frame {
    NodeId node;
    std::size_t edge;
  };
  std::vector<Frame> calls;
  std::uint32_t counter = 0;

  for (NodeId start = 0; start < n; ++start) {
    if (index[start] != kNone) continue;
    calls.push_back({start, 0});
    index[start] = low[start] = counter++;
    stack.push_back(start);
    onStack[start] = true;
    while (!calls.empty()) {
      Frame& f = calls.back();
      auto succ = successors(f.node);
      if (f.edge < succ.size()) {
        NodeId w = succ[f.edge++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          onStack[w] = true;
          calls.push_back({w, 0});
        } else if (onStack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      NodeId v = f.node;
      calls.pop_back();
      if (!calls.empty()) {
        NodeId parent = calls.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
      if (low[v] == index[v]) {
        std::vector<NodeId> comp;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          onStack[w] = false;
          out.componentOf[w] = static_cast<std::uint32_t>(out.components.size());
          comp.push_back(w);
        } while (w != v);
        out.components.push_back(std::move(comp));
      }
    }
  }
  return out;
}

bool ReachabilityGraph::acyclic() const {
  for (NodeId v = 0; v < numNodes(); ++v) {
    for (NodeId w : successors(v)) {
      if (w == v) return false;
    }
  }
  Condensation c = condense();
  return c.components.size() == numNodes();
}

ReachabilityGraph buildGraph(const Crn& crn, const Configuration& init, std::size_t nodeBudget) {
  if (init.size() != crn.numSpecies()) throw ValidationError("configuration size mismatch");
  if (nodeBudget == 0) throw ValidationError("node budget must be positive");
  ReachabilityGraph g;
  g.crn_ = crn;
  std::vector<std::uint8_t> key;
  encode(init.counts(), key);
  g.insert(key, g.hashBytes(key));
  g.parent_.push_back(0);
  g.parentReaction_.push_back(0);

  auto reactions = crn.reactions();
  std::vector<Count> counts;
  for (NodeId u = 0; u < g.numNodes(); ++u) {
    decode(g.bytes(u), counts);
    for (std::uint32_t r = 0; r < reactions.size(); ++r) {
      const Reaction& rx = reactions[r];
      bool ok = true;
      for (const Term& t : rx.reactants()) {
        if (counts[t.species] < t.count) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::vector<Count> next = counts;
      for (auto [s, d] : rx.delta()) {
        if (d > 0 && next[s] > std::numeric_limits<Count>::max() - static_cast<Count>(d)) {
          throw CountOverflowError("species count overflow during exploration");
        }
        next[s] = static_cast<Count>(static_cast<std::int64_t>(next[s]) + d);
      }
      encode(next, key);
      std::uint64_t h = g.hashBytes(key);
      auto found = g.lookup(key, h);
      NodeId v;
      if (found) {
        v = *found;
      } else {
        if (g.numNodes() >= nodeBudget) {
          g.capped_ = true;
          break;
        }
        v = g.insert(key, h);
        g.parent_.push_back(u);
        g.parentReaction_.push_back(r);
      }
      g.targets_.push_back(v);
      g.labels_.push_back(r);
    }
    if (g.capped_) break;
    g.edgeStart_.push_back(g.targets_.size());
    g.expandedCount_ = u + 1;
  }
  // Edges appended for a partially expanded node are dropped.
  g.targets_.resize(g.edgeStart_.back());
  g.labels_.resize(g.edgeStart_.back());
  return g;
}

// ---------------------------------------------------------------------------
namespace {

constexpr std::uint32_t kMixed = kNone;
constexpr std::uint32_t kUndefinedVote = 2;

/// Per-node output key: interned output vector (Computation) or vote 0/1/2.
std::vector<std::uint32_t> outputKeys(const ReachabilityGraph& g, OutputSemantics mode,
                                      std::map<std::vector<Count>, std::uint32_t>& interned) {
  const Crn& crn = g.crn();
  std::vector<std::uint32_t> keys(g.numNodes());
  for (NodeId v = 0; v < g.numNodes(); ++v) {
    Configuration c = g.config(v);
    if (mode == OutputSemantics::Decision) {
      auto vote = consensusVote(c, crn);
      keys[v] = vote ? static_cast<std::uint32_t>(*vote) : kUndefinedVote;
    } else {
      auto [it, inserted] =
          interned.emplace(crn.outputCounts(c), static_cast<std::uint32_t>(interned.size()));
      keys[v] = it->second;
    }
  }
  return keys;
}

struct Classification {
  ReachabilityGraph::Condensation cond;
  std::vector<std::uint32_t> keys;
  std::vector<std::uint32_t> componentKey;  // kMixed when not output-stable
  std::map<std::vector<Count>, std::uint32_t> interned;
};

Classification classify(const ReachabilityGraph& g, OutputSemantics mode) {
  if (g.capped()) throw CappedGraphError("graph exploration hit the node budget");
  if (mode == OutputSemantics::Decision && !g.crn().hasVoters()) {
    throw MissingVotersError("decision checking needs a yes-voter set");
  }
  Classification out;
  out.keys = outputKeys(g, mode, out.interned);
  out.cond = g.condense();
  out.componentKey.assign(out.cond.components.size(), kMixed);
  // Components come sinks-first, so successors are classified already.
  for (std::uint32_t ci = 0; ci < out.cond.components.size(); ++ci) {
    const auto& comp = out.cond.components[ci];
    std::uint32_t key = out.keys[comp[0]];
    bool stable = !(mode == OutputSemantics::Decision && key == kUndefinedVote);
    for (NodeId v : comp) {
      if (!stable) break;
      if (out.keys[v] != key) {
        stable = false;
        break;
      }
      for (NodeId w : g.successors(v)) {
        std::uint32_t cw = out.cond.componentOf[w];
        if (cw != ci && out.componentKey[cw] != key) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.componentKey[ci] = key;
  }
  return out;
}

Verdict decide(const ReachabilityGraph& g, OutputSemantics mode,
               const std::function<std::uint32_t(const Classification&)>& expectedKey) {
  Verdict v;
  v.nodes = g.numNodes();
  v.edges = g.numEdges();
  if (g.capped()) {
    v.kind = Verdict::Kind::Inconclusive;
    v.reason = "node budget exceeded after " + std::to_string(g.numNodes()) + " configurations";
    return v;
  }
  Classification cl = classify(g, mode);
  std::uint32_t want = expectedKey(cl);
  const auto& cond = cl.cond;

  auto refute = [&](NodeId node, std::string why) {
    v.kind = Verdict::Kind::Refuted;
    v.reason = std::move(why);
    v.witness = g.pathTo(node);
    v.witnessConfig = g.config(node);
  };

  std::vector<bool> good(cond.components.size(), false);
  for (std::uint32_t ci = 0; ci < cond.components.size(); ++ci) {
    if (cl.componentKey[ci] == kMixed) continue;
    v.outputStableNodes += cond.components[ci].size();
  }
  for (std::uint32_t ci = 0; ci < cond.components.size(); ++ci) {
    bool g0 = cl.componentKey[ci] != kMixed && cl.componentKey[ci] == want;
    for (NodeId x : cond.components[ci]) {
      if (g0) break;
      for (NodeId w : g.successors(x)) {
        if (good[cond.componentOf[w]]) {
          g0 = true;
          break;
        }
      }
    }
    good[ci] = g0;
  }

  // Smallest BFS id gives the shortest witness.
  for (NodeId node = 0; node < g.numNodes(); ++node) {
    std::uint32_t ck = cl.componentKey[cond.componentOf[node]];
    if (ck != kMixed && ck != want) {
      refute(node, "an output-stable configuration with the wrong output is reachable");
      return v;
    }
  }
  for (NodeId node = 0; node < g.numNodes(); ++node) {
    if (!good[cond.componentOf[node]]) {
      refute(node, "a reachable configuration cannot reach a correct output-stable configuration");
      return v;
    }
  }
  v.kind = Verdict::Kind::Certified;
  return v;
}

}  // namespace

std::vector<NodeId> classifyOutputStable(const ReachabilityGraph& graph, OutputSemantics mode) {
  Classification cl = classify(graph, mode);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < graph.numNodes(); ++v) {
    if (cl.componentKey[cl.cond.componentOf[v]] != kMixed) out.push_back(v);
  }
  return out;
}

std::string_view toString(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Certified: return "certified";
    case Verdict::Kind::Refuted: return "refuted";
    case Verdict::Kind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict checkStableComputation(const Crn& crn, const Configuration& init,
                               std::span<const Count> expected, std::size_t nodeBudget) {
  if (expected.size() != crn.outputs().size()) {
    throw ValidationError("expected " + std::to_string(crn.outputs().size()) +
                          " output values, got " + std::to_string(expected.size()));
  }
  ReachabilityGraph g = buildGraph(crn, init, nodeBudget);
  std::vector<Count> want(expected.begin(), expected.end());
  return decide(g, OutputSemantics::Computation, [&](const Classification& cl) {
    auto it = cl.interned.find(want);
    // An expected output never seen cannot match any node.
    return it == cl.interned.end() ? kMixed - 1 : it->second;
  });
}

Verdict checkStableDecision(const Crn& crn, const Configuration& init, bool expected,
                            std::size_t nodeBudget) {
  if (!crn.hasVoters()) throw MissingVotersError("decision checking needs a yes-voter set");
  if (init.empty()) {
    Verdict v;
    v.kind = Verdict::Kind::Inconclusive;
    v.undefinedOnEmptyInput = true;
    v.reason = "the vote is undefined on the empty configuration";
    v.nodes = 1;
    return v;
  }
  ReachabilityGraph g = buildGraph(crn, init, nodeBudget);
  return decide(g, OutputSemantics::Decision,
                [&](const Classification&) { return expected ? 1u : 0u; });
}

std::string formatVerdict(const Verdict& v, const Crn& crn) {
  std::ostringstream os;
  os << "verdict: " << toString(v.kind) << '\n';
  os << "nodes: " << v.nodes << '\n';
  os << "edges: " << v.edges << '\n';
  os << "output_stable_nodes: " << v.outputStableNodes << '\n';
  if (!v.reason.empty()) os << "reason: " << v.reason << '\n';
  if (v.kind == Verdict::Kind::Refuted) {
    os << "witness:";
    for (std::uint32_t r : v.witness) os << ' ' << r;
    os << '\n';
    for (std::uint32_t r : v.witness) os << "  " << r << ": " << crn.format(crn.reactions()[r]) << '\n';
    if (v.witnessConfig) os << "witness_configuration: " << crn.format(*v.witnessConfig) << '\n';
  }
  return os.str();
}

}  // namespace lcrn
