#pragma once

#include <string>
#include <vector>

#include "nmrqip/eigensystem.hpp"

namespace nmrqip {

/// Bijection between energy levels and n-bit computational labels.
/// Bit convention: alpha (m=+1/2) -> '0', beta -> '1'; spin 0 is the most
/// significant bit.
struct LabelMap {
  int n_spins = 0;
  std::vector<int> label_of_level;  // level -> label (n-bit integer)
  std::vector<int> level_of_label;  // label -> level

  int label(int level) const { return label_of_level.at(level); }
  int level(int label) const { return level_of_label.at(label); }
  std::string label_string(int level) const;
  static std::string bits(int label, int n_spins);
  static int parse_bits(const std::string& bits);
};

/// Assign each eigenstate the label of its maximum-overlap product state,
/// made bijective by greedy descending-overlap assignment with conflict
/// deferral. Throws ValidationError when two conflicting overlaps tie within
/// 1e-9 (genuinely symmetric degeneracies are refused, not guessed).
LabelMap label_states(const EigenSystem& es, const SpinSystem& sys);

}  // namespace nmrqip
