#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "nmrqip/model.hpp"

namespace nmrqip {

struct Peak2D {
  double omega1_hz = 0.0;
  double omega2_hz = 0.0;
  int t1_id = 0;  // transition keyed along omega1
  int t2_id = 0;  // transition keyed along omega2
  double amplitude = 0.0;
  std::string species;  // observed species of this entry
};

/// 2D peak list, canonically ordered by (t1_id, t2_id).
struct PeakList2D {
  std::vector<Peak2D> entries;

  const Peak2D* find(int t1, int t2) const;
  void sort_canonical();
};

enum class Connectivity { none, progressive, regressive };

/// Symmetric matrix of signed transition connectivities over transition ids.
struct ConnectivityMatrix {
  int max_id = 0;
  std::map<std::pair<int, int>, Connectivity> entries;  // keys i < j

  Connectivity type(int i, int j) const;
  void set(int i, int j, Connectivity c);
};

/// Simulate one HET-Z-COSY experiment in the linear regime: each row at
/// omega1 = freq(r) is the observed-species readout of the population
/// difference created by inverting transition r (relative to equilibrium,
/// after a crusher). Rows carry a global sin(alpha) mixing weight.
PeakList2D simulate_hetzcosy(const Model& model, const std::string& observed_species,
                             double alpha, double beta, Exec exec = Exec::parallel);

/// Union of per-nucleus experiments. Exact duplicates are deduplicated;
/// conflicting duplicates are an error.
PeakList2D merge_experiments(std::span<const PeakList2D> lists);

/// For every off-diagonal pair (i,j)/(j,i) keep the entry of lower absolute
/// amplitude at both positions (ties keep the i<j entry); unpaired cross
/// peaks are dropped; the diagonal is untouched.
PeakList2D symmetrize(const PeakList2D& peaks, double amp_tol = 1e-12);

/// Classify each symmetric cross peak against its diagonal sign:
/// opposite sign -> progressive, same sign -> regressive.
ConnectivityMatrix extract_connectivity(const PeakList2D& peaks);

/// Ground-truth classification from level geometry: progressive when the
/// shared level is the M-upper of one transition and the M-lower of the
/// other, regressive when it has the same role in both.
Connectivity geometric_connectivity(const Transition& a, const Transition& b);

}  // namespace nmrqip
