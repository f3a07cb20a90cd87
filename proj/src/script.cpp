#include "nmrqip/script.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nmrqip {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ValidationError("script line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

double parse_number(const std::string& token, int line) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    fail(line, "bad number '" + token + "'");
  }
  if (pos != token.size()) fail(line, "bad number '" + token + "'");
  return v;
}

}  // namespace

double parse_angle(const std::string& token) {
  const auto bad = [&]() -> double {
    throw ValidationError("bad angle '" + token + "'");
  };
  try {
    const auto p = token.find("pi");
    if (p == std::string::npos) {
      size_t pos = 0;
      const double v = std::stod(token, &pos);
      if (pos != token.size()) return bad();
      return v;
    }
    double factor = 1.0;
    const std::string head = token.substr(0, p);
    if (head == "-") {
      factor = -1.0;
    } else if (!head.empty()) {
      size_t pos = 0;
      factor = std::stod(head, &pos);
      if (pos != head.size()) return bad();
    }
    const std::string tail = token.substr(p + 2);
    if (!tail.empty()) {
      if (tail[0] != '/') return bad();
      size_t pos = 0;
      const double d = std::stod(tail.substr(1), &pos);
      if (pos != tail.size() - 1 || d == 0.0) return bad();
      factor /= d;
    }
    return factor * std::numbers::pi;
  } catch (const std::invalid_argument&) {
    return bad();
  } catch (const std::out_of_range&) {
    return bad();
  }
}

ProtocolScript parse_script(const std::string& text) {
  ProtocolScript script;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    ScriptStep step;
    step.line = lineno;
    const std::string& kind = tokens[0];
    if (kind == "pulse") {
      if (tokens.size() < 5) fail(lineno, "pulse needs: pulse <selective|hard> <target> <angle> <phase> [flip_error]");
      if (tokens[1] == "selective")
        step.kind = ScriptStep::Kind::pulse_selective;
      else if (tokens[1] == "hard")
        step.kind = ScriptStep::Kind::pulse_hard;
      else
        fail(lineno, "pulse kind must be 'selective' or 'hard', got '" + tokens[1] + "'");
      step.target = tokens[2];
      try {
        step.angle = parse_angle(tokens[3]);
        step.phase = parse_angle(tokens[4]);
      } catch (const ValidationError& e) {
        fail(lineno, e.what());
      }
      if (tokens.size() > 5) step.flip_error = parse_number(tokens[5], lineno);
      if (tokens.size() > 6) fail(lineno, "trailing tokens after pulse");
      if (!std::isfinite(step.angle)) fail(lineno, "non-finite angle");
    } else if (kind == "crush") {
      if (tokens.size() != 2) fail(lineno, "crush needs one mode argument");
      step.kind = ScriptStep::Kind::crush;
      if (tokens[1] == "all")
        step.crush_mode = CrushMode::all;
      else if (tokens[1] == "retain_homonuclear_zq")
        step.crush_mode = CrushMode::retain_homonuclear_zq;
      else
        fail(lineno, "unknown crush mode '" + tokens[1] + "'");
    } else if (kind == "subtract") {
      if (tokens.size() != 2) fail(lineno, "subtract needs a reference tag");
      step.kind = ScriptStep::Kind::subtract;
      step.tag = tokens[1];
    } else if (kind == "snapshot") {
      if (tokens.size() != 2) fail(lineno, "snapshot needs a tag");
      step.kind = ScriptStep::Kind::snapshot;
      step.tag = tokens[1];
    } else {
      fail(lineno, "unknown step '" + kind + "'");
    }
    script.steps.push_back(step);
  }
  return script;
}

namespace {

int resolve_selective_target(const Model& model, const std::string& target,
                             int line) {
  const auto dash = target.find('-');
  if (dash == std::string::npos) {
    int id = 0;
    try {
      id = std::stoi(target);
    } catch (const std::exception&) {
      fail(line, "bad transition target '" + target + "'");
    }
    model.table.by_id(id);  // throws when unknown
    return id;
  }
  const int la = LabelMap::parse_bits(target.substr(0, dash));
  const int lb = LabelMap::parse_bits(target.substr(dash + 1));
  return model.transition_between_labels(la, lb).id;
}

}  // namespace

ScriptResult run_script(const Model& model, const ProtocolScript& script) {
  // Resolve every reference up front so a bad late step cannot leave a
  // half-executed run.
  std::vector<int> selective_ids(script.steps.size(), -1);
  std::vector<std::string> known_tags{"equilibrium"};
  for (size_t i = 0; i < script.steps.size(); ++i) {
    const auto& step = script.steps[i];
    switch (step.kind) {
      case ScriptStep::Kind::pulse_selective:
        try {
          selective_ids[i] = resolve_selective_target(model, step.target, step.line);
        } catch (const ProtocolError& e) {
          fail(step.line, e.what());
        }
        break;
      case ScriptStep::Kind::pulse_hard:
        if (model.system.spins_of(step.target).empty())
          fail(step.line, "unknown species '" + step.target + "'");
        break;
      case ScriptStep::Kind::subtract: {
        bool found = false;
        for (const auto& tag : known_tags) found |= tag == step.tag;
        if (!found) fail(step.line, "subtract references unknown tag '" + step.tag + "'");
        break;
      }
      case ScriptStep::Kind::snapshot:
        known_tags.push_back(step.tag);
        break;
      default:
        break;
    }
  }

  ScriptResult result;
  DensityState state = model.equilibrium();
  std::vector<std::pair<std::string, DensityState>> snaps{
      {"equilibrium", state}};
  for (size_t i = 0; i < script.steps.size(); ++i) {
    const auto& step = script.steps[i];
    switch (step.kind) {
      case ScriptStep::Kind::pulse_selective:
        state = selective_pulse(state, model.table, selective_ids[i], step.angle,
                                step.phase, step.flip_error);
        break;
      case ScriptStep::Kind::pulse_hard:
        state = hard_pulse(state, model.system, step.target, step.angle,
                           step.phase, step.flip_error);
        break;
      case ScriptStep::Kind::crush:
        state = crush(state, step.crush_mode);
        break;
      case ScriptStep::Kind::subtract: {
        for (const auto& [tag, snap] : snaps)
          if (tag == step.tag) {
            state = subtract_states(state, snap);
            break;
          }
        break;
      }
      case ScriptStep::Kind::snapshot:
        snaps.push_back({step.tag, state});
        result.snapshots.push_back({step.tag, state});
        break;
    }
  }
  result.final_state = state;
  return result;
}

}  // namespace nmrqip
