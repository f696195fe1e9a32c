#pragma once

#include <cstdint>
#include <deque>
#include <vector>

namespace capflow {

// Augmenting-path max-flow on search trees grown from both terminals
// (Boykov-Kolmogorov), integer capacities. After maxflow(), nodes of the
// source tree are exactly those reachable from the source in the residual
// graph, which gives the minimal source side of a minimum cut.
class MaxFlowGraph {
 public:
  using Cap = std::int64_t;

  explicit MaxFlowGraph(int node_hint = 0, int edge_hint = 0);

  int add_node();
  void add_nodes(int n);
  int node_count() const { return static_cast<int>(nodes_.size()); }

  // Adds source->i capacity `source` and i->sink capacity `sink`.
  void add_terminal(int i, Cap source, Cap sink);
  // Adds arcs i->j with capacity cap_ij and j->i with capacity cap_ji.
  void add_edge(int i, int j, Cap cap_ij, Cap cap_ji);

  Cap maxflow();

  // True when node i is on the source side (reachable from the source).
  bool in_source_set(int i) const;

 private:
  static constexpr int kNone = -1;
  static constexpr int kTerminal = -2;
  static constexpr int kOrphan = -3;

  struct Node {
    int first = -1;   // first outgoing arc
    int parent = kNone;
    long ts = 0;
    int dist = 0;
    bool is_sink = false;
    bool active = false;
    Cap tr_cap = 0;   // source capacity minus sink capacity, residual
  };
  struct Arc {
    int head = 0;
    int next = -1;
    Cap r_cap = 0;
  };

  static int sister(int a) { return a ^ 1; }
  void set_active(int i);
  int next_active();
  void augment(int middle);
  void process_source_orphan(int i);
  void process_sink_orphan(int i);

  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  std::deque<int> active_;
  std::deque<int> orphans_;
  long time_ = 0;
  Cap flow_ = 0;
};

}  // namespace capflow
