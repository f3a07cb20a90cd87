#include "nmrqip/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace nmrqip {

namespace {

std::map<std::string, int> species_counts(const SpinSystem& sys) {
  std::map<std::string, int> counts;
  for (const auto& s : sys.species) counts[s]++;
  return counts;
}

}  // namespace

std::vector<std::string> SpinSystem::manifold_species_order() const {
  auto counts = species_counts(*this);
  std::vector<std::string> tags;
  for (const auto& [tag, _] : counts) tags.push_back(tag);
  std::sort(tags.begin(), tags.end(), [&](const auto& a, const auto& b) {
    if (counts.at(a) != counts.at(b)) return counts.at(a) < counts.at(b);
    return a < b;
  });
  return tags;
}

std::vector<std::string> SpinSystem::numbering_species_order() const {
  auto counts = species_counts(*this);
  std::vector<std::string> tags;
  for (const auto& [tag, _] : counts) tags.push_back(tag);
  std::sort(tags.begin(), tags.end(), [&](const auto& a, const auto& b) {
    if (counts.at(a) != counts.at(b)) return counts.at(a) > counts.at(b);
    double ga = gamma_of(a), gb = gamma_of(b);
    if (ga != gb) return ga > gb;
    return a < b;
  });
  return tags;
}

std::vector<int> SpinSystem::spins_of(const std::string& tag) const {
  std::vector<int> out;
  for (int i = 0; i < n_spins; ++i)
    if (species[i] == tag) out.push_back(i);
  return out;
}

double SpinSystem::gamma_of(const std::string& tag) const {
  for (int i = 0; i < n_spins; ++i)
    if (species[i] == tag) return gamma_rel[i];
  throw ValidationError("unknown species '" + tag + "'");
}

SpinSystem build_spin_system(const SpinSystemConfig& config) {
  auto fail = [](int line, const std::string& what) -> void {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << what;
    throw ValidationError(os.str());
  };

  const int n = static_cast<int>(config.spins.size());
  if (n < 1) throw ValidationError("spin system is empty");
  if (n > kMaxSpins)
    throw ValidationError("n_spins out of range: " + std::to_string(n) +
                          " (max " + std::to_string(kMaxSpins) + ")");

  SpinSystem sys;
  sys.n_spins = n;
  sys.species.resize(n);
  sys.larmor_hz.resize(n);
  sys.gamma_rel.resize(n);

  std::set<int> seen;
  for (const auto& row : config.spins) {
    if (row.index < 1 || row.index > n)
      fail(row.line, "spin index " + std::to_string(row.index) +
                         " out of range 1.." + std::to_string(n));
    if (!seen.insert(row.index).second)
      fail(row.line, "duplicate spin index " + std::to_string(row.index));
    if (row.species.empty()) fail(row.line, "empty species tag");
    if (!std::isfinite(row.larmor_hz))
      fail(row.line, "non-finite larmor frequency");
    if (!std::isfinite(row.gamma_rel) || row.gamma_rel <= 0.0)
      fail(row.line, "gamma_rel must be finite and positive");
    const int k = row.index - 1;
    sys.species[k] = row.species;
    sys.larmor_hz[k] = row.larmor_hz;
    sys.gamma_rel[k] = row.gamma_rel;
  }

  // Per-species gamma must be uniform.
  std::map<std::string, double> gammas;
  for (int i = 0; i < n; ++i) {
    auto [it, inserted] = gammas.emplace(sys.species[i], sys.gamma_rel[i]);
    if (!inserted && it->second != sys.gamma_rel[i])
      throw ValidationError("species '" + sys.species[i] +
                            "' declared with two different gamma_rel values");
  }

  std::set<std::pair<int, int>> pairs;
  for (const auto& row : config.couplings) {
    if (row.i == row.j)
      fail(row.line, "self-pair coupling (" + std::to_string(row.i) + "," +
                         std::to_string(row.j) + ")");
    if (row.i < 1 || row.i > n || row.j < 1 || row.j > n)
      fail(row.line, "coupling pair (" + std::to_string(row.i) + "," +
                         std::to_string(row.j) + ") out of range");
    if (!std::isfinite(row.d_hz) || !std::isfinite(row.j_hz))
      fail(row.line, "non-finite coupling value");
    Coupling c;
    c.i = std::min(row.i, row.j) - 1;
    c.j = std::max(row.i, row.j) - 1;
    if (!pairs.insert({c.i, c.j}).second)
      fail(row.line, "duplicate coupling pair (" + std::to_string(c.i + 1) +
                         "," + std::to_string(c.j + 1) + ")");
    c.d_hz = row.d_hz;
    c.j_hz = row.j_hz;
    c.heteronuclear = sys.species[c.i] != sys.species[c.j];
    sys.couplings.push_back(c);
  }
  std::sort(sys.couplings.begin(), sys.couplings.end(),
            [](const Coupling& a, const Coupling& b) {
              return std::tie(a.i, a.j) < std::tie(b.i, b.j);
            });
  return sys;
}

}  // namespace nmrqip
