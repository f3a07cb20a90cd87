#include "nmrqip/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace nmrqip {

namespace {

constexpr double kZeroFreqTol = 1e-9;  // Hz

struct Candidate {
  int m_upper, m_lower;
  double freq;
  double intensity;
  Complex mu;
  int species_idx;
};

struct BlockPair {
  int bu, bl;        // block indices: key(bu) = key(bl) + 2 on one species
  int species_idx;   // index into manifold_species
};

// Matrix elements <u|F+_s|l> for all level pairs of one block pair.
// F＋ in the product basis has a unit entry (b with one s-spin beta->alpha, b).
Eigen::MatrixXcd raising_elements(const EigenSystem& es, const SpinSystem& sys,
                                  const ManifoldBlock& up, const ManifoldBlock& lo,
                                  const std::vector<int>& spins) {
  const int n = es.n_spins;
  std::map<int, int> up_pos;
  for (int r = 0; r < up.size(); ++r) up_pos[up.basis_states[r]] = r;

  Eigen::MatrixXcd fp = Eigen::MatrixXcd::Zero(up.size(), lo.size());
  for (int c = 0; c < lo.size(); ++c) {
    const int b = lo.basis_states[c];
    for (int s : spins) {
      const int mask = 1 << (n - 1 - s);
      if (!(b & mask)) continue;  // spin already alpha
      auto it = up_pos.find(b ^ mask);
      if (it != up_pos.end()) fp(it->second, c) += 1.0;
    }
  }

  const auto vu = es.vectors.block(0, up.level_begin, es.dim(), up.size());
  const auto vl = es.vectors.block(0, lo.level_begin, es.dim(), lo.size());
  // Restrict to block rows: eigenvectors vanish outside their block.
  Eigen::MatrixXcd vu_sub(up.size(), up.size());
  for (int r = 0; r < up.size(); ++r) vu_sub.row(r) = vu.row(up.basis_states[r]);
  Eigen::MatrixXcd vl_sub(lo.size(), lo.size());
  for (int r = 0; r < lo.size(); ++r) vl_sub.row(r) = vl.row(lo.basis_states[r]);
  return vu_sub.adjoint() * fp * vl_sub;
}

std::vector<Candidate> scan_block_pair(const EigenSystem& es,
                                       const SpinSystem& sys,
                                       const BlockPair& bp) {
  const auto& up = es.blocks[bp.bu];
  const auto& lo = es.blocks[bp.bl];
  const auto spins = sys.spins_of(es.manifold_species[bp.species_idx]);
  const Eigen::MatrixXcd el = raising_elements(es, sys, up, lo, spins);

  std::vector<Candidate> out;
  for (int r = 0; r < up.size(); ++r) {
    for (int c = 0; c < lo.size(); ++c) {
      const double inten = std::norm(el(r, c));
      if (inten <= 0.0) continue;
      Candidate cand;
      cand.m_upper = up.level_begin + r;
      cand.m_lower = lo.level_begin + c;
      cand.freq = es.energies(cand.m_upper) - es.energies(cand.m_lower);
      cand.intensity = inten;
      cand.mu = el(r, c);
      cand.species_idx = bp.species_idx;
      out.push_back(cand);
    }
  }
  return out;
}

}  // namespace

int Transition::shared_level(const Transition& o) const {
  int shared = -1, count = 0;
  for (int a : {upper, lower})
    for (int b : {o.upper, o.lower})
      if (a == b) { shared = a; ++count; }
  return count == 1 ? shared : -1;
}

const Transition& TransitionTable::by_id(int id) const {
  if (id < 1 || id > static_cast<int>(rows.size()) || rows[id - 1].id != id)
    throw ProtocolError("unknown transition id " + std::to_string(id));
  return rows[id - 1];
}

const Transition* TransitionTable::find_by_levels(int a, int b) const {
  for (const auto& t : rows)
    if ((t.upper == a && t.lower == b) || (t.upper == b && t.lower == a))
      return &t;
  return nullptr;
}

TransitionTable compute_transitions(const EigenSystem& es, const SpinSystem& sys,
                                    double rel_threshold, Exec exec) {
  // Enumerate block pairs connected by one species' raising operator.
  std::vector<BlockPair> pairs;
  const int ns = static_cast<int>(es.manifold_species.size());
  for (int bu = 0; bu < static_cast<int>(es.blocks.size()); ++bu) {
    for (int bl = 0; bl < static_cast<int>(es.blocks.size()); ++bl) {
      if (bu == bl) continue;
      int sp = -1;
      bool ok = true;
      for (int s = 0; s < ns; ++s) {
        const int d = es.blocks[bu].key[s] - es.blocks[bl].key[s];
        if (d == 0) continue;
        if (d == 2 && sp < 0) { sp = s; continue; }
        ok = false;
        break;
      }
      if (ok && sp >= 0) pairs.push_back({bu, bl, sp});
    }
  }

  const int np = static_cast<int>(pairs.size());
  std::vector<std::vector<Candidate>> per_pair(np);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < np; ++p)
      per_pair[p] = scan_block_pair(es, sys, pairs[p]);
  } else {
    for (int p = 0; p < np; ++p)
      per_pair[p] = scan_block_pair(es, sys, pairs[p]);
  }

  std::vector<Candidate> all;
  for (auto& v : per_pair) all.insert(all.end(), v.begin(), v.end());

  double max_intensity = 0.0;
  for (const auto& c : all) max_intensity = std::max(max_intensity, c.intensity);
  const double cutoff = rel_threshold * max_intensity;

  TransitionTable table;
  table.n_levels = es.dim();
  const auto species_order = sys.numbering_species_order();
  std::map<std::string, int> species_rank;
  for (int i = 0; i < static_cast<int>(species_order.size()); ++i)
    species_rank[species_order[i]] = i;

  for (const auto& c : all) {
    if (c.intensity <= cutoff) continue;
    if (std::abs(c.freq) <= kZeroFreqTol) {
      warn("dropping zero-frequency transition between degenerate levels " +
           std::to_string(c.m_upper) + "," + std::to_string(c.m_lower));
      continue;
    }
    Transition t;
    t.m_upper = c.m_upper;
    t.m_lower = c.m_lower;
    if (c.freq >= 0.0) {
      t.upper = c.m_upper;
      t.lower = c.m_lower;
      t.freq_hz = c.freq;
    } else {
      t.upper = c.m_lower;
      t.lower = c.m_upper;
      t.freq_hz = -c.freq;
    }
    t.intensity = c.intensity;
    t.mu = c.mu;
    t.species = es.manifold_species[c.species_idx];
    table.rows.push_back(t);
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [&](const Transition& a, const Transition& b) {
              const int ra = species_rank.at(a.species);
              const int rb = species_rank.at(b.species);
              if (ra != rb) return ra < rb;
              if (a.freq_hz != b.freq_hz) return a.freq_hz < b.freq_hz;
              return std::tie(a.upper, a.lower) < std::tie(b.upper, b.lower);
            });
  for (int i = 0; i < static_cast<int>(table.rows.size()); ++i)
    table.rows[i].id = i + 1;

  table.touching.assign(es.dim(), {});
  for (int i = 0; i < static_cast<int>(table.rows.size()); ++i) {
    table.touching[table.rows[i].upper].push_back(i);
    table.touching[table.rows[i].lower].push_back(i);
  }

  if (table.rows.empty()) warn("transition table is empty");
  return table;
}

bool order_aligned(const TransitionTable& table) {
  for (const auto& t : table.rows)
    if (t.upper != t.m_upper) return false;
  return true;
}

}  // namespace nmrqip
