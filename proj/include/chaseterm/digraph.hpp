#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace chaseterm::digraph {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Nodes reachable from `from` by a path of length ≥ 1.
inline std::vector<bool> successors(const Adjacency& g, std::size_t from) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack(g[from].begin(), g[from].end());
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = true;
    for (auto m : g[n])
      if (!seen[m]) stack.push_back(m);
  }
  return seen;
}

/// Tarjan's algorithm; returns the component id of each node.
inline std::vector<std::size_t> strongly_connected_components(const Adjacency& g) {
  const std::size_t n = g.size();
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, none), low(n, 0), comp(n, none);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next = 0, ncomp = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& f = frames.back();
      if (f.edge < g[f.node].size()) {
        auto m = g[f.node][f.edge++];
        if (index[m] == none) {
          index[m] = low[m] = next++;
          stack.push_back(m);
          on_stack[m] = true;
          frames.push_back({m, 0});
        } else if (on_stack[m]) {
          low[f.node] = std::min(low[f.node], index[m]);
        }
        continue;
      }
      std::size_t v = f.node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      if (low[v] == index[v]) {
        while (true) {
          auto w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
    }
  }
  return comp;
}

/// Shortest cycle through `start` using only nodes with allowed[n] set, as
/// the node sequence start, …, (back to start excluded).
inline std::optional<std::vector<std::size_t>> cycle_through(const Adjacency& g, std::size_t start,
                                                             const std::vector<bool>& allowed) {
  if (!allowed[start]) return std::nullopt;
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(g.size(), none);
  std::vector<std::size_t> queue{start};
  std::vector<bool> seen(g.size(), false);
  seen[start] = true;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto n = queue[qi];
    for (auto m : g[n]) {
      if (!allowed[m]) continue;
      if (m == start) {
        std::vector<std::size_t> path;
        for (auto c = n; c != none; c = parent[c]) path.push_back(c);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (seen[m]) continue;
      seen[m] = true;
      parent[m] = n;
      queue.push_back(m);
    }
  }
  return std::nullopt;
}

/// Enumerates elementary cycles through `start` within allowed nodes. Each
/// cycle is passed as start, …; the visitor returns false to stop. Returns
/// false when `cap` cycles were produced before the enumeration finished.
inline bool elementary_cycles_through(
    const Adjacency& g, std::size_t start, const std::vector<bool>& allowed, std::size_t cap,
    const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  if (!allowed[start]) return true;
  std::vector<std::size_t> path{start};
  std::vector<bool> on_path(g.size(), false);
  on_path[start] = true;
  std::size_t produced = 0;
  bool stopped = false, capped = false;
  std::function<void(std::size_t)> dfs = [&](std::size_t n) {
    for (auto m : g[n]) {
      if (stopped || capped) return;
      if (!allowed[m]) continue;
      if (m == start) {
        if (produced == cap) {
          capped = true;
          return;
        }
        ++produced;
        if (!visit(path)) stopped = true;
        continue;
      }
      if (on_path[m]) continue;
      on_path[m] = true;
      path.push_back(m);
      dfs(m);
      path.pop_back();
      on_path[m] = false;
    }
  };
  dfs(start);
  return !capped;
}

}  // namespace chaseterm::digraph
