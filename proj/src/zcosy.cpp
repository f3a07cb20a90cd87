#include "nmrqip/zcosy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nmrqip {

namespace {

// One row of the experiment: invert transition r from equilibrium, crush,
// subtract equilibrium, read out the observed species in the linear regime.
// The surviving population differences are +/-w on r's two levels, so only
// transitions touching them produce entries.
std::vector<Peak2D> simulate_row(const Model& model, const Transition& r,
                                 const std::string& observed, double alpha,
                                 double beta,
                                 const Eigen::VectorXd& eq_populations) {
  const double w = eq_populations(r.m_upper) - eq_populations(r.m_lower);
  const double scale = std::sin(alpha) * std::sin(beta);

  std::vector<Peak2D> out;
  std::set<int> seen;
  for (int lv : {r.m_upper, r.m_lower}) {
    for (int ti : model.table.touching[lv]) {
      if (!seen.insert(ti).second) continue;
      const Transition& c = model.table.rows[ti];
      if (c.species != observed) continue;
      // delta populations: q[m_upper(r)] = -w, q[m_lower(r)] = +w
      double dq = 0.0;
      if (c.m_upper == r.m_upper) dq -= w;
      if (c.m_upper == r.m_lower) dq += w;
      if (c.m_lower == r.m_upper) dq += w;
      if (c.m_lower == r.m_lower) dq -= w;
      const double amp = scale * c.intensity * dq;
      if (amp == 0.0) continue;
      Peak2D p;
      p.omega1_hz = r.freq_hz;
      p.omega2_hz = c.freq_hz;
      p.t1_id = r.id;
      p.t2_id = c.id;
      p.amplitude = amp;
      p.species = observed;
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Peak2D& a, const Peak2D& b) { return a.t2_id < b.t2_id; });
  return out;
}

int diagonal_sign(const PeakList2D& peaks, int id) {
  const Peak2D* d = peaks.find(id, id);
  // Simulated diagonals are always inverted (negative); default to that
  // convention when a diagonal is missing from experimental input.
  if (!d) return -1;
  return d->amplitude < 0.0 ? -1 : 1;
}

}  // namespace

const Peak2D* PeakList2D::find(int t1, int t2) const {
  for (const auto& p : entries)
    if (p.t1_id == t1 && p.t2_id == t2) return &p;
  return nullptr;
}

void PeakList2D::sort_canonical() {
  std::sort(entries.begin(), entries.end(), [](const Peak2D& a, const Peak2D& b) {
    return std::tie(a.t1_id, a.t2_id) < std::tie(b.t1_id, b.t2_id);
  });
}

Connectivity ConnectivityMatrix::type(int i, int j) const {
  if (i == j) return Connectivity::none;
  auto it = entries.find({std::min(i, j), std::max(i, j)});
  return it == entries.end() ? Connectivity::none : it->second;
}

void ConnectivityMatrix::set(int i, int j, Connectivity c) {
  if (i == j) throw ValidationError("connectivity diagonal must stay none");
  entries[{std::min(i, j), std::max(i, j)}] = c;
  max_id = std::max({max_id, i, j});
}

PeakList2D simulate_hetzcosy(const Model& model, const std::string& observed_species,
                             double alpha, double beta, Exec exec) {
  if (model.system.spins_of(observed_species).empty())
    throw ValidationError("unknown observed species '" + observed_species + "'");
  const Eigen::VectorXd eq = model.equilibrium().populations();

  const int nrows = static_cast<int>(model.table.rows.size());
  std::vector<std::vector<Peak2D>> per_row(nrows);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < nrows; ++i)
      per_row[i] = simulate_row(model, model.table.rows[i], observed_species,
                                alpha, beta, eq);
  } else {
    for (int i = 0; i < nrows; ++i)
      per_row[i] = simulate_row(model, model.table.rows[i], observed_species,
                                alpha, beta, eq);
  }

  PeakList2D list;
  for (auto& row : per_row)
    list.entries.insert(list.entries.end(), row.begin(), row.end());
  list.sort_canonical();
  return list;
}

PeakList2D merge_experiments(std::span<const PeakList2D> lists) {
  PeakList2D out;
  std::map<std::pair<int, int>, size_t> index;
  for (const auto& list : lists) {
    for (const auto& p : list.entries) {
      const std::pair<int, int> key{p.t1_id, p.t2_id};
      auto it = index.find(key);
      if (it == index.end()) {
        index[key] = out.entries.size();
        out.entries.push_back(p);
        continue;
      }
      const Peak2D& prev = out.entries[it->second];
      if (std::abs(prev.amplitude - p.amplitude) > 1e-12 ||
          prev.species != p.species)
        throw ValidationError("conflicting duplicate peak at (" +
                              std::to_string(p.t1_id) + "," +
                              std::to_string(p.t2_id) + ")");
    }
  }
  out.sort_canonical();
  return out;
}

PeakList2D symmetrize(const PeakList2D& peaks, double amp_tol) {
  std::map<std::pair<int, int>, Peak2D> by_key;
  for (const auto& p : peaks.entries) by_key[{p.t1_id, p.t2_id}] = p;

  PeakList2D out;
  for (const auto& [key, p] : by_key) {
    const auto [i, j] = key;
    if (i == j) {
      out.entries.push_back(p);
      continue;
    }
    auto mirror = by_key.find({j, i});
    if (mirror == by_key.end()) continue;  // unpaired artifact, dropped
    if (i > j) continue;                   // handled from the (i,j) side
    const Peak2D& q = mirror->second;
    const bool keep_first =
        std::abs(p.amplitude) <= std::abs(q.amplitude) + amp_tol;
    const double amp = keep_first ? p.amplitude : q.amplitude;
    Peak2D a = p;
    a.amplitude = amp;
    Peak2D b = q;
    b.amplitude = amp;
    out.entries.push_back(a);
    out.entries.push_back(b);
  }
  out.sort_canonical();
  return out;
}

ConnectivityMatrix extract_connectivity(const PeakList2D& peaks) {
  ConnectivityMatrix conn;
  for (const auto& p : peaks.entries)
    conn.max_id = std::max({conn.max_id, p.t1_id, p.t2_id});

  for (const auto& p : peaks.entries) {
    if (p.t1_id == p.t2_id || p.amplitude == 0.0) continue;
    const int ds = diagonal_sign(peaks, p.t1_id);
    const int cs = p.amplitude < 0.0 ? -1 : 1;
    const Connectivity type =
        cs == ds ? Connectivity::regressive : Connectivity::progressive;
    const int i = std::min(p.t1_id, p.t2_id);
    const int j = std::max(p.t1_id, p.t2_id);
    auto it = conn.entries.find({i, j});
    if (it != conn.entries.end() && it->second != type)
      throw ReconstructionError(
          "inconsistent connectivity signs between (" + std::to_string(i) +
          "," + std::to_string(j) + ") and its mirror");
    conn.entries[{i, j}] = type;
  }
  return conn;
}

Connectivity geometric_connectivity(const Transition& a, const Transition& b) {
  const int shared = a.shared_level(b);
  if (shared < 0) return Connectivity::none;
  const bool upper_of_a = a.m_upper == shared;
  const bool upper_of_b = b.m_upper == shared;
  return upper_of_a == upper_of_b ? Connectivity::regressive
                                  : Connectivity::progressive;
}

}  // namespace nmrqip
