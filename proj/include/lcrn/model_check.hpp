#pragma once

// Exhaustive certification of stable computation and stable decision on
// bounded instances. The reachability graph is explored breadth-first with
// hash-consed configurations; output stability is classified once over the
// strongly-connected-component condensation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcrn/crn.hpp"

namespace lcrn {

using NodeId = std::uint32_t;

inline constexpr std::size_t kDefaultNodeBudget = 2'000'000;

class ReachabilityGraph {
 public:
  std::size_t numNodes() const { return offsets_.size() - 1; }
  std::size_t numEdges() const { return targets_.size(); }
  /// True when the node budget stopped exploration; such graphs are not
  /// closed under the reactions.
  bool capped() const { return capped_; }
  NodeId root() const { return 0; }
  const Crn& crn() const { return crn_; }

  Configuration config(NodeId n) const;
  std::optional<NodeId> find(const Configuration& c) const;

  std::span<const NodeId> successors(NodeId n) const;
  /// Reaction index of each edge in `successors(n)`, same order.
  std::span<const std::uint32_t> edgeReactions(NodeId n) const;
  bool isTerminal(NodeId n) const { return successors(n).empty() && expanded(n); }
  bool expanded(NodeId n) const { return n < expandedCount_; }

  /// Reaction indices along the breadth-first tree from the root to n.
  std::vector<std::uint32_t> pathTo(NodeId n) const;

  /// Strongly connected components in completion order of Tarjan's
  /// algorithm (every component appears after all components it reaches).
  /// `componentOf[n]` indexes into the returned list.
  struct Condensation {
    std::vector<std::vector<NodeId>> components;
    std::vector<std::uint32_t> componentOf;
  };
  Condensation condense() const;

  /// True iff no cycle (including self-loops) is reachable.
  bool acyclic() const;

 private:
  friend ReachabilityGraph buildGraph(const Crn&, const Configuration&, std::size_t);

  Crn crn_;
  std::vector<std::uint8_t> arena_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;  // open addressing, id + 1, 0 = empty
  std::vector<std::uint64_t> edgeStart_{0};
  std::vector<NodeId> targets_;
  std::vector<std::uint32_t> labels_;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> parentReaction_;
  std::size_t expandedCount_ = 0;
  bool capped_ = false;

  std::uint64_t hashBytes(std::span<const std::uint8_t> bytes) const;
  std::span<const std::uint8_t> bytes(NodeId n) const;
  std::optional<NodeId> lookup(std::span<const std::uint8_t> key, std::uint64_t h) const;
  NodeId insert(std::span<const std::uint8_t> key, std::uint64_t h);
  void rehash(std::size_t capacity);
};

/// Breadth-first closure of `init` under all reactions, stopping (capped)
/// once `nodeBudget` configurations have been discovered.
ReachabilityGraph buildGraph(const Crn& crn, const Configuration& init,
                             std::size_t nodeBudget = kDefaultNodeBudget);

enum class OutputSemantics {
  Computation,  ///< output species counts (CRC)
  Decision,     ///< consensus vote of yes/no voters (CRD)
};

/// Node ids whose every reachable configuration shows the same output:
/// identical output counts (Computation) or the same defined vote (Decision).
/// Throws CappedGraphError on capped graphs, MissingVotersError in Decision
/// mode without a voter partition.
std::vector<NodeId> classifyOutputStable(const ReachabilityGraph& graph, OutputSemantics mode);

struct Verdict {
  enum class Kind { Certified, Refuted, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// Why the verdict is not Certified; empty when certified.
  std::string reason;
  /// Decision mode only: the initial configuration is empty, so the vote is
  /// undefined there by definition.
  bool undefinedOnEmptyInput = false;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t outputStableNodes = 0;
  /// Refutations: reaction indices from the initial configuration to
  /// `witnessConfig`.
  std::vector<std::uint32_t> witness;
  std::optional<Configuration> witnessConfig;
};

std::string_view toString(Verdict::Kind k);

/// Certified iff every reachable configuration can reach an output-stable
/// configuration whose outputs equal `expected`, and no output-stable
/// configuration with other outputs is reachable. Inconclusive iff capped.
Verdict checkStableComputation(const Crn& crn, const Configuration& init,
                               std::span<const Count> expected,
                               std::size_t nodeBudget = kDefaultNodeBudget);

/// Decision-mode analogue with the consensus vote as output.
Verdict checkStableDecision(const Crn& crn, const Configuration& init, bool expected,
                            std::size_t nodeBudget = kDefaultNodeBudget);

/// Structured text report: verdict, graph size, reason, witness path.
std::string formatVerdict(const Verdict& v, const Crn& crn);

}  // namespace lcrn
