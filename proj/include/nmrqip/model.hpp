#pragma once

#include <optional>

#include "nmrqip/density_state.hpp"
#include "nmrqip/labeling.hpp"
#include "nmrqip/transitions.hpp"

namespace nmrqip {

/// A spin system together with everything derived from it. Labels stay empty
/// when the labeling is genuinely ambiguous; protocol entry points that need
/// them fail with the recorded reason.
struct Model {
  SpinSystem system;
  EigenSystemPtr eigen;
  TransitionTable table;
  std::optional<LabelMap> labels;
  std::string label_error;

  static Model build(SpinSystem sys, double rel_threshold = 1e-3,
                     Exec exec = Exec::parallel);

  const LabelMap& require_labels() const;
  DensityState equilibrium() const;

  /// Transition connecting the two labeled levels; throws when unobservable.
  const Transition& transition_between_labels(int label_a, int label_b) const;
};

}  // namespace nmrqip
