#include "nmrqip/gate_compiler.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace nmrqip {

namespace {

// adjacency: level -> (neighbor level, transition id), lowest id first
std::vector<std::vector<std::pair<int, int>>> adjacency(const TransitionTable& t) {
  std::vector<std::vector<std::pair<int, int>>> adj(t.n_levels);
  for (const auto& row : t.rows) {
    adj[row.upper].push_back({row.lower, row.id});
    adj[row.lower].push_back({row.upper, row.id});
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  return adj;
}

}  // namespace

std::vector<int> permutation_of_sequence(const TransitionTable& table,
                                         const std::vector<int>& transition_ids) {
  std::vector<int> perm(table.n_levels);
  std::iota(perm.begin(), perm.end(), 0);
  for (int id : transition_ids) {
    const Transition& t = table.by_id(id);
    for (int& v : perm) {
      if (v == t.upper) v = t.lower;
      else if (v == t.lower) v = t.upper;
    }
  }
  return perm;
}

PulseSequence compile_level_swap(const TransitionTable& table, int level_a,
                                 int level_b) {
  if (level_a == level_b)
    throw ProtocolError("swap endpoints are the same level");
  if (level_a < 0 || level_a >= table.n_levels || level_b < 0 ||
      level_b >= table.n_levels)
    throw ProtocolError("swap level out of range");

  const auto adj = adjacency(table);
  std::vector<int> prev_level(table.n_levels, -1);
  std::vector<int> prev_edge(table.n_levels, -1);
  std::deque<int> queue{level_a};
  prev_level[level_a] = level_a;
  while (!queue.empty() && prev_level[level_b] < 0) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& [w, id] : adj[v]) {
      if (prev_level[w] >= 0) continue;
      prev_level[w] = v;
      prev_edge[w] = id;
      queue.push_back(w);
    }
  }
  if (prev_level[level_b] < 0)
    throw ProtocolError("no pulse path between levels " +
                        std::to_string(level_a) + " and " +
                        std::to_string(level_b));

  std::vector<int> path_edges, path_levels{level_b};
  for (int v = level_b; v != level_a; v = prev_level[v]) {
    path_edges.push_back(prev_edge[v]);
    path_levels.push_back(prev_level[v]);
  }
  std::reverse(path_edges.begin(), path_edges.end());
  std::reverse(path_levels.begin(), path_levels.end());

  PulseSequence seq;
  seq.path_levels = path_levels;
  // palindrome e1..e{k-1}, ek, e{k-1}..e1
  const int k = static_cast<int>(path_edges.size());
  for (int i = 0; i < k; ++i) seq.transition_ids.push_back(path_edges[i]);
  for (int i = k - 2; i >= 0; --i) seq.transition_ids.push_back(path_edges[i]);
  seq.net_permutation = permutation_of_sequence(table, seq.transition_ids);
  return seq;
}

PulseSequence compile_permutation(const TransitionTable& table,
                                  const std::vector<int>& permutation) {
  if (static_cast<int>(permutation.size()) != table.n_levels)
    throw ProtocolError("permutation size does not match level count");
  {
    std::vector<bool> seen(permutation.size(), false);
    for (int v : permutation) {
      if (v < 0 || v >= static_cast<int>(permutation.size()) || seen[v])
        throw ProtocolError("not a permutation of the level set");
      seen[v] = true;
    }
  }

  PulseSequence seq;
  std::vector<bool> visited(permutation.size(), false);
  for (size_t start = 0; start < permutation.size(); ++start) {
    if (visited[start] || permutation[start] == static_cast<int>(start)) {
      visited[start] = true;
      continue;
    }
    std::vector<int> cycle;
    for (int v = static_cast<int>(start); !visited[v]; v = permutation[v]) {
      visited[v] = true;
      cycle.push_back(v);
    }
    // (c1 c2 ... cm): apply (c1 c2), (c1 c3), ..., (c1 cm) in time order
    for (size_t i = 1; i < cycle.size(); ++i) {
      PulseSequence swap;
      try {
        swap = compile_level_swap(table, cycle[0], cycle[i]);
      } catch (const ProtocolError&) {
        throw ProtocolError("cycle through level " + std::to_string(cycle[0]) +
                            " needs a disconnected pair (" +
                            std::to_string(cycle[0]) + "," +
                            std::to_string(cycle[i]) + ")");
      }
      seq.transition_ids.insert(seq.transition_ids.end(),
                                swap.transition_ids.begin(),
                                swap.transition_ids.end());
    }
  }
  seq.net_permutation = permutation_of_sequence(table, seq.transition_ids);
  if (seq.net_permutation != permutation)
    throw ProtocolError("compiled sequence does not realize the permutation");
  return seq;
}

}  // namespace nmrqip
