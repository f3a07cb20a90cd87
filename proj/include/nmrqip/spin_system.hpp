#pragma once

#include <string>
#include <vector>

#include "nmrqip/common.hpp"

namespace nmrqip {

inline constexpr int kMaxSpins = 12;  // dense 2^N matrices

struct Coupling {
  int i = 0, j = 0;       // spin indices, i < j
  double d_hz = 0.0;      // dipolar coupling
  double j_hz = 0.0;      // scalar coupling
  bool heteronuclear = false;  // truncated Iz.Sz form when true
};

/// Raw parsed configuration rows, before validation.
struct SpinSystemConfig {
  struct SpinRow {
    int index;  // 1-based in files
    std::string species;
    double larmor_hz;
    double gamma_rel;
    int line = 0;
  };
  struct CouplingRow {
    int i, j;  // 1-based in files
    double d_hz, j_hz;
    int line = 0;
  };
  std::vector<SpinRow> spins;
  std::vector<CouplingRow> couplings;
};

/// Physical model: species, offsets and couplings of an N spin-1/2 system.
/// Spin 0 is the most significant spin of the product basis; |alpha> (m=+1/2)
/// sorts first within each spin.
struct SpinSystem {
  int n_spins = 0;
  std::vector<std::string> species;   // per-spin tag, e.g. "H", "F"
  std::vector<double> larmor_hz;      // per-spin offset frequency
  std::vector<double> gamma_rel;      // per-spin relative gyromagnetic weight
  std::vector<Coupling> couplings;    // i < j, no duplicates

  int dim() const { return 1 << n_spins; }

  /// Distinct species tags ordered for manifold bookkeeping: ascending spin
  /// count (the heteronucleus first), ties broken by tag.
  std::vector<std::string> manifold_species_order() const;

  /// Distinct species tags ordered for transition numbering: descending spin
  /// count, then descending gamma, then tag.
  std::vector<std::string> numbering_species_order() const;

  std::vector<int> spins_of(const std::string& tag) const;
  double gamma_of(const std::string& tag) const;
};

/// Validate a parsed configuration into a SpinSystem.
/// Rejects self-pairs, duplicate pairs, non-finite values, out-of-range
/// n_spins, inconsistent per-species gamma, and mismatched coupling forms.
SpinSystem build_spin_system(const SpinSystemConfig& config);

}  // namespace nmrqip
