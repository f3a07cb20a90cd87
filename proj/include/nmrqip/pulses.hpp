#pragma once

#include <string>
#include <vector>

#include "nmrqip/density_state.hpp"
#include "nmrqip/transitions.hpp"

namespace nmrqip {

enum class CrushMode { all, retain_homonuclear_zq };
enum class ReadoutMode { exact, fast };

struct SpectrumLine {
  double freq_hz = 0.0;
  double amplitude = 0.0;  // signed; inverted lines negative
  int transition_id = 0;
  std::string species;
};

/// Frequency-domain 1D readout: one entry per table transition of the
/// observed species.
struct Spectrum1D {
  std::string species;
  double angle = 0.0;
  double linewidth_hz = 0.0;
  bool large_angle = false;  // set when angle > pi/8 (linear regime doubtful)
  std::vector<SpectrumLine> lines;

  const SpectrumLine* line_of(int transition_id) const;
};

/// Ideal transition-selective rotation: identity outside the two-level
/// subspace, R(angle*(1+flip_error), phase) inside it, expressed in the
/// (m_upper, m_lower) ordering. Elements not touching the pair are bitwise
/// unchanged.
DensityState selective_pulse(const DensityState& state, const TransitionTable& table,
                             int transition_id, double angle, double phase,
                             double flip_error = 0.0);

/// Hard species-selective rotation exp(-i a sum_i (Ix cos p + Iy sin p)).
DensityState hard_pulse(const DensityState& state, const SpinSystem& sys,
                        const std::string& species, double angle, double phase,
                        double flip_error = 0.0);

/// The hard-pulse unitary in the eigenbasis (exposed for oracle checks).
Eigen::MatrixXcd hard_pulse_unitary(const SpinSystem& sys, const EigenSystem& es,
                                    const std::string& species, double angle,
                                    double phase);

/// Gradient crusher: zero off-diagonals, optionally retaining coherences
/// between levels of identical per-species M (homonuclear zero quantum).
DensityState crush(const DensityState& state, CrushMode mode);

/// Small-angle linear-response readout. `exact` applies the small rotation
/// and extracts the matched transition coherences; `fast` uses
/// sin(angle) * intensity * population difference across the M ladder.
Spectrum1D readout_spectrum(const DensityState& state, const SpinSystem& sys,
                            const TransitionTable& table, const std::string& species,
                            double angle, double linewidth_hz = 0.0,
                            ReadoutMode mode = ReadoutMode::exact);

/// Continuous rendering of a stick spectrum as a sum of Lorentzians.
struct Trace {
  std::vector<double> freq_hz;
  std::vector<double> amplitude;
};
Trace render_lorentzian(const Spectrum1D& spec, int n_points = 2048,
                        double pad_linewidths = 8.0);

}  // namespace nmrqip
