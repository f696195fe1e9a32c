#include "capflow/maxflow.hpp"

#include <limits>
#include <stdexcept>

namespace capflow {

MaxFlowGraph::MaxFlowGraph(int node_hint, int edge_hint) {
  nodes_.reserve(static_cast<std::size_t>(node_hint));
  arcs_.reserve(2 * static_cast<std::size_t>(edge_hint));
}

int MaxFlowGraph::add_node() {
  nodes_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

void MaxFlowGraph::add_nodes(int n) { nodes_.resize(nodes_.size() + static_cast<std::size_t>(n)); }

void MaxFlowGraph::add_terminal(int i, Cap source, Cap sink) {
  if (source < 0 || sink < 0) throw std::invalid_argument("maxflow: negative terminal capacity");
  const Cap delta = nodes_[static_cast<std::size_t>(i)].tr_cap;
  // Flow through both terminal arcs cancels; keep only the difference.
  if (delta > 0)
    source += delta;
  else
    sink -= delta;
  flow_ += source < sink ? source : sink;
  nodes_[static_cast<std::size_t>(i)].tr_cap = source - sink;
}

void MaxFlowGraph::add_edge(int i, int j, Cap cap_ij, Cap cap_ji) {
  if (cap_ij < 0 || cap_ji < 0) throw std::invalid_argument("maxflow: negative edge capacity");
  if (i == j) return;
  const int a = static_cast<int>(arcs_.size());
  arcs_.push_back({j, nodes_[static_cast<std::size_t>(i)].first, cap_ij});
  arcs_.push_back({i, nodes_[static_cast<std::size_t>(j)].first, cap_ji});
  nodes_[static_cast<std::size_t>(i)].first = a;
  nodes_[static_cast<std::size_t>(j)].first = a + 1;
}

void MaxFlowGraph::set_active(int i) {
  Node& n = nodes_[static_cast<std::size_t>(i)];
  if (!n.active) {
    n.active = true;
    active_.push_back(i);
  }
}

int MaxFlowGraph::next_active() {
  while (!active_.empty()) {
    const int i = active_.front();
    active_.pop_front();
    Node& n = nodes_[static_cast<std::size_t>(i)];
    n.active = false;
    if (n.parent != kNone) return i;
  }
  return -1;
}

void MaxFlowGraph::augment(int middle) {
  // Bottleneck along source path, middle arc, and sink path.
  Cap bottleneck = arcs_[static_cast<std::size_t>(middle)].r_cap;
  int i = arcs_[static_cast<std::size_t>(sister(middle))].head;
  while (true) {
    const int a = nodes_[static_cast<std::size_t>(i)].parent;
    if (a == kTerminal) break;
    const Cap c = arcs_[static_cast<std::size_t>(sister(a))].r_cap;
    if (bottleneck > c) bottleneck = c;
    i = arcs_[static_cast<std::size_t>(a)].head;
  }
  if (bottleneck > nodes_[static_cast<std::size_t>(i)].tr_cap)
    bottleneck = nodes_[static_cast<std::size_t>(i)].tr_cap;
  i = arcs_[static_cast<std::size_t>(middle)].head;
  while (true) {
    const int a = nodes_[static_cast<std::size_t>(i)].parent;
    if (a == kTerminal) break;
    const Cap c = arcs_[static_cast<std::size_t>(a)].r_cap;
    if (bottleneck > c) bottleneck = c;
    i = arcs_[static_cast<std::size_t>(a)].head;
  }
  if (bottleneck > -nodes_[static_cast<std::size_t>(i)].tr_cap)
    bottleneck = -nodes_[static_cast<std::size_t>(i)].tr_cap;

  arcs_[static_cast<std::size_t>(sister(middle))].r_cap += bottleneck;
  arcs_[static_cast<std::size_t>(middle)].r_cap -= bottleneck;

  i = arcs_[static_cast<std::size_t>(sister(middle))].head;
  while (true) {
    const int a = nodes_[static_cast<std::size_t>(i)].parent;
    if (a == kTerminal) break;
    arcs_[static_cast<std::size_t>(a)].r_cap += bottleneck;
    arcs_[static_cast<std::size_t>(sister(a))].r_cap -= bottleneck;
    if (arcs_[static_cast<std::size_t>(sister(a))].r_cap == 0) {
      nodes_[static_cast<std::size_t>(i)].parent = kOrphan;
      orphans_.push_front(i);
    }
    i = arcs_[static_cast<std::size_t>(a)].head;
  }
  nodes_[static_cast<std::size_t>(i)].tr_cap -= bottleneck;
  if (nodes_[static_cast<std::size_t>(i)].tr_cap == 0) {
    nodes_[static_cast<std::size_t>(i)].parent = kOrphan;
    orphans_.push_front(i);
  }

  i = arcs_[static_cast<std::size_t>(middle)].head;
  while (true) {
    const int a = nodes_[static_cast<std::size_t>(i)].parent;
    if (a == kTerminal) break;
    arcs_[static_cast<std::size_t>(sister(a))].r_cap += bottleneck;
    arcs_[static_cast<std::size_t>(a)].r_cap -= bottleneck;
    if (arcs_[static_cast<std::size_t>(a)].r_cap == 0) {
      nodes_[static_cast<std::size_t>(i)].parent = kOrphan;
      orphans_.push_front(i);
    }
    i = arcs_[static_cast<std::size_t>(a)].head;
  }
  nodes_[static_cast<std::size_t>(i)].tr_cap += bottleneck;
  if (nodes_[static_cast<std::size_t>(i)].tr_cap == 0) {
    nodes_[static_cast<std::size_t>(i)].parent = kOrphan;
    orphans_.push_front(i);
  }
  flow_ += bottleneck;
}

void MaxFlowGraph::process_source_orphan(int i) {
  constexpr int kInf = std::numeric_limits<int>::max();
  int best_arc = kNone;
  int best_dist = kInf;
  for (int a0 = nodes_[static_cast<std::size_t>(i)].first; a0 >= 0;
       a0 = arcs_[static_cast<std::size_t>(a0)].next) {
    if (arcs_[static_cast<std::size_t>(sister(a0))].r_cap == 0) continue;
    int j = arcs_[static_cast<std::size_t>(a0)].head;
    if (nodes_[static_cast<std::size_t>(j)].is_sink || nodes_[static_cast<std::size_t>(j)].parent == kNone)
      continue;
    // Walk to the root to check that j's origin is the source.
    int d = 0;
    while (true) {
      Node& nj = nodes_[static_cast<std::size_t>(j)];
      if (nj.ts == time_) {
        d += nj.dist;
        break;
      }
      const int a = nj.parent;
      ++d;
      if (a == kTerminal) {
        nj.ts = time_;
        nj.dist = 1;
        break;
      }
      if (a == kOrphan) {
        d = kInf;
        break;
      }
      j = arcs_[static_cast<std::size_t>(a)].head;
    }
    if (d < kInf) {
      if (d < best_dist) {
        best_arc = a0;
        best_dist = d;
      }
      for (j = arcs_[static_cast<std::size_t>(a0)].head; nodes_[static_cast<std::size_t>(j)].ts != time_;
           j = arcs_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(j)].parent)].head) {
        nodes_[static_cast<std::size_t>(j)].ts = time_;
        nodes_[static_cast<std::size_t>(j)].dist = d--;
      }
    }
  }
  Node& ni = nodes_[static_cast<std::size_t>(i)];
  ni.parent = best_arc;
  if (best_arc != kNone) {
    ni.ts = time_;
    ni.dist = best_dist + 1;
    return;
  }
  for (int a0 = ni.first; a0 >= 0; a0 = arcs_[static_cast<std::size_t>(a0)].next) {
    const int j = arcs_[static_cast<std::size_t>(a0)].head;
    Node& nj = nodes_[static_cast<std::size_t>(j)];
    const int a = nj.parent;
    if (nj.is_sink || a == kNone) continue;
    if (arcs_[static_cast<std::size_t>(sister(a0))].r_cap) set_active(j);
    if (a != kTerminal && a != kOrphan && arcs_[static_cast<std::size_t>(a)].head == i) {
      nj.parent = kOrphan;
      orphans_.push_back(j);
    }
  }
}

void MaxFlowGraph::process_sink_orphan(int i) {
  constexpr int kInf = std::numeric_limits<int>::max();
  int best_arc = kNone;
  int best_dist = kInf;
  for (int a0 = nodes_[static_cast<std::size_t>(i)].first; a0 >= 0;
       a0 = arcs_[static_cast<std::size_t>(a0)].next) {
    if (arcs_[static_cast<std::size_t>(a0)].r_cap == 0) continue;
    int j = arcs_[static_cast<std::size_t>(a0)].head;
    if (!nodes_[static_cast<std::size_t>(j)].is_sink || nodes_[static_cast<std::size_t>(j)].parent == kNone)
      continue;
    int d = 0;
    while (true) {
      Node& nj = nodes_[static_cast<std::size_t>(j)];
      if (nj.ts == time_) {
        d += nj.dist;
        break;
      }
      const int a = nj.parent;
      ++d;
      if (a == kTerminal) {
        nj.ts = time_;
        nj.dist = 1;
        break;
      }
      if (a == kOrphan) {
        d = kInf;
        break;
      }
      j = arcs_[static_cast<std::size_t>(a)].head;
    }
    if (d < kInf) {
      if (d < best_dist) {
        best_arc = a0;
        best_dist = d;
      }
      for (j = arcs_[static_cast<std::size_t>(a0)].head; nodes_[static_cast<std::size_t>(j)].ts != time_;
           j = arcs_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(j)].parent)].head) {
        nodes_[static_cast<std::size_t>(j)].ts = time_;
        nodes_[static_cast<std::size_t>(j)].dist = d--;
      }
    }
  }
  Node& ni = nodes_[static_cast<std::size_t>(i)];
  ni.parent = best_arc;
  if (best_arc != kNone) {
    ni.ts = time_;
    ni.dist = best_dist + 1;
    return;
  }
  for (int a0 = ni.first; a0 >= 0; a0 = arcs_[static_cast<std::size_t>(a0)].next) {
    const int j = arcs_[static_cast<std::size_t>(a0)].head;
    Node& nj = nodes_[static_cast<std::size_t>(j)];
    const int a = nj.parent;
    if (!nj.is_sink || a == kNone) continue;
    if (arcs_[static_cast<std::size_t>(a0)].r_cap) set_active(j);
    if (a != kTerminal && a != kOrphan && arcs_[static_cast<std::size_t>(a)].head == i) {
      nj.parent = kOrphan;
      orphans_.push_back(j);
    }
  }
}

MaxFlowGraph::Cap MaxFlowGraph::maxflow() {
  active_.clear();
  orphans_.clear();
  time_ = 0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    Node& n = nodes_[k];
    n.active = false;
    n.ts = 0;
    if (n.tr_cap > 0) {
      n.is_sink = false;
      n.parent = kTerminal;
      n.dist = 1;
      set_active(static_cast<int>(k));
    } else if (n.tr_cap < 0) {
      n.is_sink = true;
      n.parent = kTerminal;
      n.dist = 1;
      set_active(static_cast<int>(k));
    } else {
      n.parent = kNone;
    }
  }

  int current = -1;
  while (true) {
    int i = current;
    if (i >= 0) {
      nodes_[static_cast<std::size_t>(i)].active = false;
      if (nodes_[static_cast<std::size_t>(i)].parent == kNone) i = -1;
    }
    if (i < 0) {
      i = next_active();
      if (i < 0) break;
    }

    int found = kNone;
    Node& ni = nodes_[static_cast<std::size_t>(i)];
    if (!ni.is_sink) {
      for (int a = ni.first; a >= 0; a = arcs_[static_cast<std::size_t>(a)].next) {
        if (arcs_[static_cast<std::size_t>(a)].r_cap == 0) continue;
        const int j = arcs_[static_cast<std::size_t>(a)].head;
        Node& nj = nodes_[static_cast<std::size_t>(j)];
        if (nj.parent == kNone) {
          nj.is_sink = false;
          nj.parent = sister(a);
          nj.ts = ni.ts;
          nj.dist = ni.dist + 1;
          set_active(j);
        } else if (nj.is_sink) {
          found = a;
          break;
        } else if (nj.ts <= ni.ts && nj.dist > ni.dist) {
          nj.parent = sister(a);
          nj.ts = ni.ts;
          nj.dist = ni.dist + 1;
        }
      }
    } else {
      for (int a = ni.first; a >= 0; a = arcs_[static_cast<std::size_t>(a)].next) {
        if (arcs_[static_cast<std::size_t>(sister(a))].r_cap == 0) continue;
        const int j = arcs_[static_cast<std::size_t>(a)].head;
        Node& nj = nodes_[static_cast<std::size_t>(j)];
        if (nj.parent == kNone) {
          nj.is_sink = true;
          nj.parent = sister(a);
          nj.ts = ni.ts;
          nj.dist = ni.dist + 1;
          set_active(j);
        } else if (!nj.is_sink) {
          found = sister(a);
          break;
        } else if (nj.ts <= ni.ts && nj.dist > ni.dist) {
          nj.parent = sister(a);
          nj.ts = ni.ts;
          nj.dist = ni.dist + 1;
        }
      }
    }

    ++time_;
    if (found != kNone) {
      nodes_[static_cast<std::size_t>(i)].active = true;
      current = i;
      augment(found);
      while (!orphans_.empty()) {
        const int o = orphans_.front();
        orphans_.pop_front();
        if (nodes_[static_cast<std::size_t>(o)].is_sink)
          process_sink_orphan(o);
        else
          process_source_orphan(o);
      }
    } else {
      current = -1;
    }
  }
  return flow_;
}

bool MaxFlowGraph::in_source_set(int i) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  return n.parent != kNone && !n.is_sink;
}

}  // namespace capflow
