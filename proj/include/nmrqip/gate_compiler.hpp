#pragma once

#include <vector>

#include "nmrqip/transitions.hpp"

namespace nmrqip {

/// Ordered transition-selective pi pulses realizing a basis permutation.
/// Equality holds at the population/permutation level; selective pi pulses
/// add phases on the touched subspace.
struct PulseSequence {
  std::vector<int> transition_ids;   // time order
  std::vector<int> net_permutation;  // level -> level after the sequence
  std::vector<int> path_levels;      // BFS path for single swaps, else empty

  int length() const { return static_cast<int>(transition_ids.size()); }
};

/// Compose the population permutation of a pi-pulse sequence.
std::vector<int> permutation_of_sequence(const TransitionTable& table,
                                         const std::vector<int>& transition_ids);

/// Shortest pulse sequence exchanging levels a and b: BFS over the transition
/// graph (lowest-id neighbor first) gives a path a=v0..vk=b; the palindrome
/// e1..e{k-1}, ek, e{k-1}..e1 of length 2k-1 is exactly the transposition
/// (a b). Throws ProtocolError("no pulse path ...") when a and b are
/// disconnected.
PulseSequence compile_level_swap(const TransitionTable& table, int level_a,
                                 int level_b);

/// Compile an arbitrary level permutation: decompose into cycles, each cycle
/// into transpositions compiled via compile_level_swap, concatenated so the
/// composition equals the target exactly (verified).
PulseSequence compile_permutation(const TransitionTable& table,
                                  const std::vector<int>& permutation);

}  // namespace nmrqip
