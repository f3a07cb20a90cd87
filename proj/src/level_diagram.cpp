#include "nmrqip/level_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace nmrqip {

namespace {

// Union-find with an additive potential per node and rollback support.
// unite(a, b, d) asserts E(a) = E(b) + d. No path compression: merges are
// undone by truncating the operation log.
class PotentialDsu {
 public:
  explicit PotentialDsu(int n) : parent_(n), rank_(n, 0), off_(n, 0.0) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }

  std::pair<int, double> find(int a) const {
    double off = 0.0;
    while (parent_[a] != a) {
      off += off_[a];
      a = parent_[a];
    }
    return {a, off};
  }

  bool same(int a, int b) const { return find(a).first == find(b).first; }

  // E(a) - E(b); both must be in the same tree.
  double delta(int a, int b) const {
    return find(a).second - find(b).second;
  }

  enum class Result { merged, consistent, conflict };

  Result unite(int a, int b, double d, double tol) {
    auto [ra, oa] = find(a);
    auto [rb, ob] = find(b);
    if (ra == rb)
      return std::abs(oa - ob - d) <= tol ? Result::consistent
                                          : Result::conflict;
    // E(ra) = E(a) - oa = E(b) + d - oa = E(rb) + ob + d - oa
    if (rank_[ra] > rank_[rb]) {
      parent_[rb] = ra;
      off_[rb] = oa - ob - d;
      log_.push_back({rb, false});
    } else {
      parent_[ra] = rb;
      off_[ra] = ob + d - oa;
      const bool bump = rank_[ra] == rank_[rb];
      if (bump) ++rank_[rb];
      log_.push_back({ra, bump});
    }
    return Result::merged;
  }

  size_t mark() const { return log_.size(); }

  void rollback(size_t mark) {
    while (log_.size() > mark) {
      const Op op = log_.back();
      log_.pop_back();
      if (op.rank_bumped) --rank_[parent_[op.child]];
      parent_[op.child] = op.child;
      off_[op.child] = 0.0;
    }
  }

 private:
  struct Op {
    int child;
    bool rank_bumped;
  };
  std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<double> off_;
  std::vector<Op> log_;
};

struct Choice {
  int a, b;  // slots merged as one level
};

struct ConstraintRow {
  int i_idx, j_idx;  // indices into the record vector
  int i_id, j_id;
  Connectivity type;
  std::array<Choice, 2> options;
};

struct Solver {
  const std::vector<TransitionRecord>& records;
  std::vector<ConstraintRow> constraints;
  double tol;
  bool exhaustive;

  // slots: up(t) = 2t, lo(t) = 2t+1
  PotentialDsu levels;     // zero-offset merges only: level identity
  PotentialDsu potential;  // energy relations including transition edges
  int deepest = 0;
  int deepest_fail_k = -1;
  int deepest_fail_i = -1, deepest_fail_j = -1;

  // first solution snapshot + exhaustive bookkeeping
  bool have_solution = false;
  std::vector<int> solution_level_of_slot;
  std::set<std::vector<int>> canonical_solutions;
  std::vector<std::vector<int>> solution_partitions;
  bool capped = false;
  static constexpr int kSolutionCap = 64;

  Solver(const std::vector<TransitionRecord>& rec, double tol_, bool exh)
      : records(rec),
        tol(tol_),
        exhaustive(exh),
        levels(static_cast<int>(2 * rec.size())),
        potential(static_cast<int>(2 * rec.size())) {}

  int up(int idx) const { return 2 * idx; }
  int lo(int idx) const { return 2 * idx + 1; }

  bool apply(const Choice& c, size_t& lmark, size_t& pmark) {
    lmark = levels.mark();
    pmark = potential.mark();
    if (potential.unite(c.a, c.b, 0.0, tol) == PotentialDsu::Result::conflict)
      return false;
    levels.unite(c.a, c.b, 0.0, tol);
    return true;
  }

  // A valid assignment gives every constrained pair exactly one shared level
  // in the role pattern of its type, and maps no two transitions to the same
  // level pair.
  bool validate_final() {
    for (const auto& c : constraints) {
      int shared = 0;
      for (int x : {up(c.i_idx), lo(c.i_idx)})
        for (int y : {up(c.j_idx), lo(c.j_idx)})
          if (levels.same(x, y)) ++shared;
      if (shared != 1) return false;
      bool role_ok;
      if (c.type == Connectivity::progressive)
        role_ok = levels.same(up(c.i_idx), lo(c.j_idx)) ||
                  levels.same(lo(c.i_idx), up(c.j_idx));
      else
        role_ok = levels.same(lo(c.i_idx), lo(c.j_idx)) ||
                  levels.same(up(c.i_idx), up(c.j_idx));
      if (!role_ok) return false;
    }
    std::set<std::pair<int, int>> pairs;
    for (size_t t = 0; t < records.size(); ++t) {
      int a = levels.find(up(static_cast<int>(t))).first;
      int b = levels.find(lo(static_cast<int>(t))).first;
      if (a == b) return false;
      if (!pairs.insert({std::min(a, b), std::max(a, b)}).second) return false;
    }
    return true;
  }

  std::vector<int> canonical_partition() {
    // level index per slot, numbered by first appearance in slot order
    std::vector<int> out(2 * records.size(), -1);
    std::map<int, int> root_to_level;
    for (size_t s = 0; s < 2 * records.size(); ++s) {
      const int root = levels.find(static_cast<int>(s)).first;
      auto [it, inserted] =
          root_to_level.emplace(root, static_cast<int>(root_to_level.size()));
      out[s] = it->second;
    }
    return out;
  }

  // Returns true to stop the search (first solution found, non-exhaustive).
  bool search(size_t k) {
    if (k > static_cast<size_t>(deepest)) deepest = static_cast<int>(k);
    if (k == constraints.size()) {
      if (!validate_final()) return false;
      auto part = canonical_partition();
      if (!have_solution) {
        have_solution = true;
        solution_level_of_slot = part;
      }
      if (!exhaustive) return true;
      if (canonical_solutions.insert(part).second)
        solution_partitions.push_back(part);
      if (static_cast<int>(canonical_solutions.size()) >= kSolutionCap) {
        capped = true;
        return true;
      }
      return false;
    }
    const auto& c = constraints[k];
    for (const Choice& choice : c.options) {
      size_t lmark, pmark;
      if (apply(choice, lmark, pmark)) {
        if (search(k + 1)) return true;
      } else if (static_cast<int>(k) >= deepest_fail_k) {
        deepest_fail_k = static_cast<int>(k);
        deepest_fail_i = c.i_id;
        deepest_fail_j = c.j_id;
      }
      levels.rollback(lmark);
      potential.rollback(pmark);
    }
    return false;
  }
};

}  // namespace

std::vector<TransitionRecord> to_records(const TransitionTable& table) {
  std::vector<TransitionRecord> out;
  out.reserve(table.rows.size());
  for (const auto& t : table.rows)
    out.push_back({t.id, t.freq_hz, t.species});
  return out;
}

int LevelDiagram::total_levels() const {
  int n = 0;
  for (const auto& c : components) n += static_cast<int>(c.levels.size());
  return n;
}

const DiagramComponent& LevelDiagram::component_of_edge(int transition_id) const {
  for (const auto& c : components)
    for (const auto& e : c.edges)
      if (e.transition_id == transition_id) return c;
  throw ReconstructionError("transition " + std::to_string(transition_id) +
                            " has no edge in the diagram");
}

LevelDiagram reconstruct_levels(const std::vector<TransitionRecord>& transitions,
                                const ConnectivityMatrix& connectivity,
                                std::optional<int> n_spins, double tol,
                                bool exhaustive) {
  if (transitions.empty())
    throw ReconstructionError("no transitions to reconstruct from");
  for (const auto& t : transitions)
    if (!(t.freq_hz > 0.0))
      throw ValidationError("transition " + std::to_string(t.id) +
                            " has non-positive frequency");

  std::map<int, int> idx_of_id;
  for (size_t i = 0; i < transitions.size(); ++i) {
    if (!idx_of_id.emplace(transitions[i].id, static_cast<int>(i)).second)
      throw ValidationError("duplicate transition id " +
                            std::to_string(transitions[i].id));
  }

  Solver solver(transitions, tol, exhaustive);

  // transition endpoint relation: E(up) = E(lo) + freq
  for (size_t t = 0; t < transitions.size(); ++t)
    solver.potential.unite(solver.up(static_cast<int>(t)),
                           solver.lo(static_cast<int>(t)),
                           transitions[t].freq_hz, tol);

  // connectivity constraints ordered by (min id, max id); the map already
  // iterates in that order
  for (const auto& [key, type] : connectivity.entries) {
    if (type == Connectivity::none) continue;
    auto it_i = idx_of_id.find(key.first);
    auto it_j = idx_of_id.find(key.second);
    if (it_i == idx_of_id.end() || it_j == idx_of_id.end())
      throw ValidationError("connectivity references unknown transition " +
                            std::to_string(it_i == idx_of_id.end() ? key.first
                                                                   : key.second));
    ConstraintRow row;
    row.i_idx = it_i->second;
    row.j_idx = it_j->second;
    row.i_id = key.first;
    row.j_id = key.second;
    row.type = type;
    if (type == Connectivity::progressive)
      row.options = {Choice{solver.up(row.i_idx), solver.lo(row.j_idx)},
                     Choice{solver.lo(row.i_idx), solver.up(row.j_idx)}};
    else
      row.options = {Choice{solver.lo(row.i_idx), solver.lo(row.j_idx)},
                     Choice{solver.up(row.i_idx), solver.up(row.j_idx)}};
    solver.constraints.push_back(row);
  }

  solver.search(0);
  if (!solver.have_solution) {
    std::ostringstream os;
    os << "no consistent level assignment; deepest consistent connectivity "
          "prefix: "
       << solver.deepest << " of " << solver.constraints.size();
    if (solver.deepest_fail_i >= 0)
      os << " (first blocked at pair " << solver.deepest_fail_i << ","
         << solver.deepest_fail_j << ")";
    throw ReconstructionError(os.str());
  }

  // Rebuild the first solution's merges to read energies and components.
  solver.levels.rollback(0);
  solver.potential.rollback(0);
  for (size_t t = 0; t < transitions.size(); ++t)
    solver.potential.unite(solver.up(static_cast<int>(t)),
                           solver.lo(static_cast<int>(t)),
                           transitions[t].freq_hz, tol);
  const int n_slots = static_cast<int>(2 * transitions.size());
  for (int a = 0; a < n_slots; ++a)
    for (int b = a + 1; b < n_slots; ++b)
      if (solver.solution_level_of_slot[a] == solver.solution_level_of_slot[b]) {
        solver.levels.unite(a, b, 0.0, tol);
        solver.potential.unite(a, b, 0.0, tol);
      }

  LevelDiagram diagram;
  diagram.tol = tol;
  diagram.expected_levels = n_spins ? (1 << *n_spins) : -1;
  diagram.solutions_found =
      exhaustive ? static_cast<int>(solver.canonical_solutions.size()) : 1;
  diagram.solution_count_capped = solver.capped;

  if (exhaustive && diagram.solutions_found > 1) {
    // Report slot merges present in some solutions but not all.
    std::set<std::pair<int, int>> sometimes, always;
    bool first = true;
    for (const auto& part : solver.solution_partitions) {
      std::set<std::pair<int, int>> merged;
      for (int a = 0; a < n_slots; ++a)
        for (int b = a + 1; b < n_slots; ++b)
          if (part[a] == part[b]) merged.insert({a, b});
      for (const auto& m : merged) sometimes.insert(m);
      if (first) {
        always = merged;
        first = false;
      } else {
        std::set<std::pair<int, int>> keep;
        std::set_intersection(always.begin(), always.end(), merged.begin(),
                              merged.end(), std::inserter(keep, keep.begin()));
        always = keep;
      }
    }
    int listed = 0;
    for (const auto& [a, b] : sometimes) {
      if (always.count({a, b})) continue;
      if (listed++ >= 20) {
        diagram.ambiguity_notes.push_back("...");
        break;
      }
      std::ostringstream os;
      os << "undetermined merge: transition " << transitions[a / 2].id
         << (a % 2 ? " lower" : " upper") << " vs transition "
         << transitions[b / 2].id << (b % 2 ? " lower" : " upper");
      diagram.ambiguity_notes.push_back(os.str());
    }
    warn("reconstruction is ambiguous: " +
         std::to_string(diagram.solutions_found) + " solutions" +
         (solver.capped ? " (capped)" : ""));
  }

  // Group levels, split into components, fix per-component references.
  std::map<int, int> component_of_root;  // potential root -> component index
  std::vector<int> component_min_id;
  for (size_t t = 0; t < transitions.size(); ++t) {
    const int root = solver.potential.find(solver.up(static_cast<int>(t))).first;
    auto it = component_of_root.find(root);
    if (it == component_of_root.end()) {
      component_of_root[root] = static_cast<int>(component_min_id.size());
      component_min_id.push_back(transitions[t].id);
    } else {
      component_min_id[it->second] =
          std::min(component_min_id[it->second], transitions[t].id);
    }
  }
  std::vector<int> comp_order(component_min_id.size());
  for (size_t i = 0; i < comp_order.size(); ++i) comp_order[i] = static_cast<int>(i);
  std::sort(comp_order.begin(), comp_order.end(),
            [&](int a, int b) { return component_min_id[a] < component_min_id[b]; });
  std::vector<int> comp_rank(comp_order.size());
  for (size_t i = 0; i < comp_order.size(); ++i) comp_rank[comp_order[i]] = static_cast<int>(i);

  struct LevelInfo {
    int comp;
    double energy;
    int min_id;  // smallest incident transition id, for deterministic ties
    std::vector<int> slots;
  };
  std::map<int, LevelInfo> level_of_root;  // levels-DSU root -> info

  // per-component reference slot: lower slot of the smallest transition id
  std::vector<int> ref_slot(comp_order.size(), -1);
  for (size_t t = 0; t < transitions.size(); ++t) {
    const int root = solver.potential.find(solver.lo(static_cast<int>(t))).first;
    const int comp = comp_rank[component_of_root.at(root)];
    if (ref_slot[comp] < 0 ||
        transitions[t].id < transitions[ref_slot[comp] / 2].id)
      ref_slot[comp] = solver.lo(static_cast<int>(t));
  }

  for (int s = 0; s < n_slots; ++s) {
    const int lroot = solver.levels.find(s).first;
    const int proot = solver.potential.find(s).first;
    const int comp = comp_rank[component_of_root.at(proot)];
    auto [it, inserted] = level_of_root.emplace(lroot, LevelInfo{});
    LevelInfo& info = it->second;
    if (inserted) {
      info.comp = comp;
      info.energy = solver.potential.delta(s, ref_slot[comp]);
      info.min_id = transitions[s / 2].id;
    }
    info.min_id = std::min(info.min_id, transitions[s / 2].id);
    info.slots.push_back(s);
  }

  diagram.components.resize(comp_order.size());
  std::vector<std::vector<std::pair<const LevelInfo*, int>>> comp_levels(
      comp_order.size());
  std::map<int, int> level_id_of_root;
  for (const auto& [root, info] : level_of_root)
    comp_levels[info.comp].push_back({&info, root});
  int next_id = 0;
  for (size_t ci = 0; ci < comp_levels.size(); ++ci) {
    auto& lv = comp_levels[ci];
    std::sort(lv.begin(), lv.end(), [](const auto& a, const auto& b) {
      if (a.first->energy != b.first->energy)
        return a.first->energy > b.first->energy;
      return a.first->min_id < b.first->min_id;
    });
    for (const auto& [info, root] : lv) {
      level_id_of_root[root] = next_id;
      diagram.components[ci].levels.push_back({next_id, info->energy, ""});
      ++next_id;
    }
  }

  for (size_t t = 0; t < transitions.size(); ++t) {
    const int proot = solver.potential.find(solver.up(static_cast<int>(t))).first;
    const int comp = comp_rank[component_of_root.at(proot)];
    DiagramEdge e;
    e.transition_id = transitions[t].id;
    e.upper = level_id_of_root.at(solver.levels.find(solver.up(static_cast<int>(t))).first);
    e.lower = level_id_of_root.at(solver.levels.find(solver.lo(static_cast<int>(t))).first);
    e.freq_hz = transitions[t].freq_hz;
    diagram.components[comp].edges.push_back(e);
  }
  for (auto& c : diagram.components)
    std::sort(c.edges.begin(), c.edges.end(),
              [](const DiagramEdge& a, const DiagramEdge& b) {
                return a.transition_id < b.transition_id;
              });
  return diagram;
}

bool VerifyReport::all_pass() const {
  return flagged_edges.empty() && unassigned_transitions.empty() &&
         (expected_levels < 0 || n_levels == expected_levels);
}

VerifyReport verify_diagram(const LevelDiagram& diagram,
                            const std::vector<TransitionRecord>& transitions,
                            double tol) {
  VerifyReport report;
  report.expected_levels = diagram.expected_levels;
  report.n_levels = diagram.total_levels();
  report.n_components = static_cast<int>(diagram.components.size());

  std::map<int, double> freq_of_id;
  for (const auto& t : transitions) freq_of_id[t.id] = t.freq_hz;

  std::set<int> edge_ids;
  for (const auto& comp : diagram.components) {
    std::map<int, double> energy;
    for (const auto& l : comp.levels) energy[l.id] = l.energy_hz;
    for (const auto& e : comp.edges) {
      edge_ids.insert(e.transition_id);
      auto it = freq_of_id.find(e.transition_id);
      if (it == freq_of_id.end()) continue;
      const double residual =
          std::abs(energy.at(e.upper) - energy.at(e.lower) - it->second);
      report.max_residual_hz = std::max(report.max_residual_hz, residual);
      if (residual > tol) report.flagged_edges.push_back({e.transition_id, residual});
    }
  }

  for (const auto& t : transitions)
    if (!edge_ids.count(t.id)) report.unassigned_transitions.push_back(t.id);
  if (report.n_components > 1) {
    for (const auto& comp : diagram.components)
      if (comp.edges.size() == 1)
        report.unassigned_transitions.push_back(comp.edges[0].transition_id);
  }
  std::sort(report.unassigned_transitions.begin(),
            report.unassigned_transitions.end());
  return report;
}

std::string export_dot(const LevelDiagram& diagram) {
  std::ostringstream os;
  os << "digraph level_diagram {\n";
  os << "  rankdir=BT;\n";
  for (size_t ci = 0; ci < diagram.components.size(); ++ci) {
    os << "  subgraph cluster_" << ci << " {\n";
    for (const auto& l : diagram.components[ci].levels) {
      os << "    n" << l.id << " [label=\"" << l.id << " E="
         << format_g9(l.energy_hz);
      if (!l.label.empty()) os << " b=" << l.label;
      os << "\"];\n";
    }
    os << "  }\n";
  }
  for (const auto& comp : diagram.components)
    for (const auto& e : comp.edges)
      os << "  n" << e.lower << " -> n" << e.upper << " [label=\"t"
         << e.transition_id << " " << format_g9(e.freq_hz) << "\"];\n";
  os << "}\n";
  return os.str();
}

LevelDiagram import_dot(const std::string& text) {
  LevelDiagram diagram;
  std::istringstream in(text);
  std::string line;
  std::map<int, DiagramComponent*> comp_of_level;
  DiagramComponent* current = nullptr;
  while (std::getline(in, line)) {
    const auto ltrim = line.find_first_not_of(" \t");
    if (ltrim == std::string::npos) continue;
    const std::string body = line.substr(ltrim);
    if (body.rfind("subgraph", 0) == 0) {
      diagram.components.emplace_back();
      current = &diagram.components.back();
      continue;
    }
    if (body.rfind("n", 0) != 0) continue;
    if (body.find("->") != std::string::npos) {
      DiagramEdge e;
      char tchr;
      if (std::sscanf(body.c_str(), "n%d -> n%d [label=\"%c%d %lf\"];",
                      &e.lower, &e.upper, &tchr, &e.transition_id,
                      &e.freq_hz) == 5) {
        auto it = comp_of_level.find(e.lower);
        if (it == comp_of_level.end())
          throw ValidationError("dot edge references unknown level");
        it->second->edges.push_back(e);
      }
      continue;
    }
    DiagramLevel l;
    char labelbuf[128] = {0};
    const int matched = std::sscanf(body.c_str(), "n%d [label=\"%*d E=%lf b=%127[01]\"];",
                                    &l.id, &l.energy_hz, labelbuf);
    if (matched >= 2) {
      l.label = labelbuf;
      if (!current) throw ValidationError("dot level outside a component");
      current->levels.push_back(l);
      comp_of_level[l.id] = current;
    }
  }
  return diagram;
}

}  // namespace nmrqip
