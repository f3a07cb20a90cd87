#include "nmrqip/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nmrqip {

namespace {

using std::numbers::pi;

// Two-level rotation R(theta, phi) in (upper, lower) ordering.
struct Rot2 {
  Complex uu, ul, lu, ll;
};

Rot2 rotation2(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex i(0.0, 1.0);
  return {c, -i * std::exp(Complex(0.0, -phi)) * s,
          -i * std::exp(Complex(0.0, phi)) * s, c};
}

}  // namespace

const SpectrumLine* Spectrum1D::line_of(int transition_id) const {
  for (const auto& l : lines)
    if (l.transition_id == transition_id) return &l;
  return nullptr;
}

DensityState selective_pulse(const DensityState& state, const TransitionTable& table,
                             int transition_id, double angle, double phase,
                             double flip_error) {
  const Transition& t = table.by_id(transition_id);
  const Rot2 u = rotation2(angle * (1.0 + flip_error), phase);
  const int a = t.m_upper, b = t.m_lower;

  DensityState out = state;
  auto& m = out.matrix;
  // rho' = U rho U+, touching only rows/columns a and b
  const Eigen::RowVectorXcd row_a = m.row(a), row_b = m.row(b);
  m.row(a) = u.uu * row_a + u.ul * row_b;
  m.row(b) = u.lu * row_a + u.ll * row_b;
  const Eigen::VectorXcd col_a = m.col(a), col_b = m.col(b);
  m.col(a) = col_a * std::conj(u.uu) + col_b * std::conj(u.ul);
  m.col(b) = col_a * std::conj(u.lu) + col_b * std::conj(u.ll);
  return out;
}

Eigen::MatrixXcd hard_pulse_unitary(const SpinSystem& sys, const EigenSystem& es,
                                    const std::string& species, double angle,
                                    double phase) {
  if (sys.spins_of(species).empty())
    throw ProtocolError("unknown species '" + species + "'");
  const Rot2 r = rotation2(angle, phase);

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < sys.n_spins; ++i) {
    Eigen::Matrix2cd gi;
    if (sys.species[i] == species)
      gi << r.uu, r.ul, r.lu, r.ll;
    else
      gi = Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
    next.topLeftCorner(u.rows(), u.cols()) = gi(0, 0) * u;
    next.topRightCorner(u.rows(), u.cols()) = gi(0, 1) * u;
    next.bottomLeftCorner(u.rows(), u.cols()) = gi(1, 0) * u;
    next.bottomRightCorner(u.rows(), u.cols()) = gi(1, 1) * u;
    u = std::move(next);
  }
  return es.vectors.adjoint() * u * es.vectors;
}

DensityState hard_pulse(const DensityState& state, const SpinSystem& sys,
                        const std::string& species, double angle, double phase,
                        double flip_error) {
  const Eigen::MatrixXcd u = hard_pulse_unitary(sys, *state.basis, species,
                                                angle * (1.0 + flip_error), phase);
  DensityState out;
  out.basis = state.basis;
  out.matrix = u * state.matrix * u.adjoint();
  return out;
}

DensityState crush(const DensityState& state, CrushMode mode) {
  const auto& es = *state.basis;
  DensityState out;
  out.basis = state.basis;
  out.matrix = state.matrix;
  const int dim = out.dim();
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      if (a == b) continue;
      if (mode == CrushMode::retain_homonuclear_zq && es.same_manifold(a, b))
        continue;
      out.matrix(a, b) = 0.0;
    }
  }
  return out;
}

Spectrum1D readout_spectrum(const DensityState& state, const SpinSystem& sys,
                            const TransitionTable& table, const std::string& species,
                            double angle, double linewidth_hz, ReadoutMode mode) {
  Spectrum1D spec;
  spec.species = species;
  spec.angle = angle;
  spec.linewidth_hz = linewidth_hz;
  if (angle > pi / 8.0) {
    spec.large_angle = true;
    warn("readout angle " + format_g9(angle) + " rad exceeds pi/8; linear "
         "response is unreliable");
  }

  Eigen::MatrixXcd rotated;
  if (mode == ReadoutMode::exact) {
    const Eigen::MatrixXcd u =
        hard_pulse_unitary(sys, *state.basis, species, angle, 0.0);
    rotated = u * state.matrix * u.adjoint();
  }

  for (const auto& t : table.rows) {
    if (t.species != species) continue;
    SpectrumLine line;
    line.freq_hz = t.freq_hz;
    line.transition_id = t.id;
    line.species = species;
    if (mode == ReadoutMode::exact) {
      line.amplitude =
          2.0 * std::imag(rotated(t.m_upper, t.m_lower) * std::conj(t.mu));
    } else {
      const double dp =
          state.population(t.m_upper) - state.population(t.m_lower);
      line.amplitude = std::sin(angle) * t.intensity * dp;
    }
    spec.lines.push_back(line);
  }
  return spec;
}

Trace render_lorentzian(const Spectrum1D& spec, int n_points,
                        double pad_linewidths) {
  Trace trace;
  if (spec.lines.empty() || spec.linewidth_hz <= 0.0 || n_points < 2)
    return trace;
  double fmin = spec.lines.front().freq_hz, fmax = fmin;
  for (const auto& l : spec.lines) {
    fmin = std::min(fmin, l.freq_hz);
    fmax = std::max(fmax, l.freq_hz);
  }
  fmin -= pad_linewidths * spec.linewidth_hz;
  fmax += pad_linewidths * spec.linewidth_hz;
  const double hw = 0.5 * spec.linewidth_hz;
  trace.freq_hz.resize(n_points);
  trace.amplitude.assign(n_points, 0.0);
  for (int k = 0; k < n_points; ++k) {
    const double f = fmin + (fmax - fmin) * k / (n_points - 1);
    trace.freq_hz[k] = f;
    double a = 0.0;
    for (const auto& l : spec.lines) {
      const double d = f - l.freq_hz;
      a += l.amplitude * hw * hw / (d * d + hw * hw);
    }
    trace.amplitude[k] = a;
  }
  return trace;
}

}  // namespace nmrqip
