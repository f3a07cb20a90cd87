#include "nmrqip/labeling.hpp"

#include <algorithm>
#include <sstream>

namespace nmrqip {

namespace {
constexpr double kAmbiguityTol = 1e-9;
constexpr double kOverlapFloor = 1e-12;
}  // namespace

std::string LabelMap::bits(int label, int n_spins) {
  std::string s(n_spins, '0');
  for (int i = 0; i < n_spins; ++i)
    if (label & (1 << (n_spins - 1 - i))) s[i] = '1';
  return s;
}

int LabelMap::parse_bits(const std::string& bits) {
  int v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw ValidationError("bad label bit string '" + bits + "'");
    v = (v << 1) | (c == '1');
  }
  return v;
}

std::string LabelMap::label_string(int level) const {
  return bits(label(level), n_spins);
}

LabelMap label_states(const EigenSystem& es, const SpinSystem& sys) {
  const int dim = es.dim();

  struct Entry {
    double overlap;
    int level;
    int label;
  };
  std::vector<Entry> entries;
  // Eigenvectors vanish outside their manifold block, so only block-local
  // product states can be label candidates.
  for (const auto& blk : es.blocks) {
    for (int k = 0; k < blk.size(); ++k) {
      const int level = blk.level_begin + k;
      for (int b : blk.basis_states) {
        const double ov = std::norm(es.vectors(b, level));
        if (ov >= kOverlapFloor) entries.push_back({ov, level, b});
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    return std::tie(a.level, a.label) < std::tie(b.level, b.label);
  });

  LabelMap map;
  map.n_spins = es.n_spins;
  map.label_of_level.assign(dim, -1);
  map.level_of_label.assign(dim, -1);

  int assigned = 0;
  for (size_t i = 0; i < entries.size() && assigned < dim; ++i) {
    const Entry& e = entries[i];
    if (map.label_of_level[e.level] >= 0 || map.level_of_label[e.label] >= 0)
      continue;
    // A conflicting candidate tied with the best choice means the greedy
    // assignment would be a guess; refuse instead.
    for (size_t j = i + 1; j < entries.size(); ++j) {
      const Entry& f = entries[j];
      if (e.overlap - f.overlap > kAmbiguityTol) break;
      if (map.label_of_level[f.level] >= 0 || map.level_of_label[f.label] >= 0)
        continue;
      if (f.level == e.level || f.label == e.label) {
        std::ostringstream os;
        os << "ambiguous labeling: levels " << e.level << " and " << f.level
           << " overlap product states " << LabelMap::bits(e.label, es.n_spins)
           << " and " << LabelMap::bits(f.label, es.n_spins)
           << " equally (" << e.overlap << ")";
        throw ValidationError(os.str());
      }
    }
    map.label_of_level[e.level] = e.label;
    map.level_of_label[e.label] = e.level;
    ++assigned;
  }
  if (assigned != dim)
    throw ValidationError("labeling incomplete: eigenstates too strongly mixed "
                          "to assign distinct product labels");
  return map;
}

}  // namespace nmrqip
