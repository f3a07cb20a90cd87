#pragma once

#include <string>
#include <vector>

#include "nmrqip/model.hpp"
#include "nmrqip/pulses.hpp"

namespace nmrqip {

/// Line-oriented protocol script. One step per line:
///   pulse selective <id|bits-bits> <angle> <phase> [flip_error]
///   pulse hard <species> <angle> <phase> [flip_error]
///   crush <all|retain_homonuclear_zq>
///   subtract <tag>
///   snapshot <tag>
/// Angles accept plain numbers or pi fractions (pi, -pi/2, 3pi/4, 2pi).
/// '#' starts a comment. The tag `equilibrium` is predefined.
struct ScriptStep {
  enum class Kind { pulse_selective, pulse_hard, crush, subtract, snapshot };
  Kind kind;
  std::string target;  // transition id or label pair (selective), species (hard)
  double angle = 0.0;
  double phase = 0.0;
  double flip_error = 0.0;
  CrushMode crush_mode = CrushMode::all;
  std::string tag;
  int line = 0;
};

struct ProtocolScript {
  std::vector<ScriptStep> steps;
};

/// Parse script text; errors carry the line number.
ProtocolScript parse_script(const std::string& text);

double parse_angle(const std::string& token);  // shared with the CLI

struct ScriptResult {
  DensityState final_state;
  std::vector<std::pair<std::string, DensityState>> snapshots;
};

/// Execute a script starting from equilibrium. All referenced transitions,
/// labels and tags are resolved before the first step runs.
ScriptResult run_script(const Model& model, const ProtocolScript& script);

}  // namespace nmrqip
