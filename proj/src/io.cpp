#include "nmrqip/io.hpp"

#include <fstream>
#include <sstream>

namespace nmrqip::io {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void row_error(int line, const std::string& row,
                            const std::string& what) {
  throw ValidationError("line " + std::to_string(line) + ": " + what +
                        " in row '" + row + "'");
}

double parse_double_field(const std::string& field, int line,
                          const std::string& row) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    row_error(line, row, "bad number '" + field + "'");
  }
  if (pos != field.size()) row_error(line, row, "bad number '" + field + "'");
  return v;
}

int parse_int_field(const std::string& field, int line, const std::string& row) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(field, &pos);
  } catch (const std::exception&) {
    row_error(line, row, "bad integer '" + field + "'");
  }
  if (pos != field.size()) row_error(line, row, "bad integer '" + field + "'");
  return v;
}

// header-checked CSV walker; calls fn(line_number, fields) per data row
template <typename Fn>
void walk_csv(const std::string& text, const std::string& expected_header,
              int n_fields, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != expected_header)
        throw ValidationError("line 1: expected header '" + expected_header +
                              "', got '" + line + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split_csv_row(line);
    if (static_cast<int>(fields.size()) != n_fields)
      row_error(lineno, line,
                "expected " + std::to_string(n_fields) + " fields, got " +
                    std::to_string(fields.size()));
    fn(lineno, line, fields);
  }
  if (!saw_header && !text.empty())
    throw ValidationError("missing CSV header");
}

json quantize(double v) { return json(round_g9(v)); }

}  // namespace

SpinSystemConfig parse_config(const std::string& text) {
  SpinSystemConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  enum class Section { none, spins, couplings } section = Section::none;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string first;
    if (!(row >> first)) continue;

    if (first.front() == '[') {
      if (first == "[spins]")
        section = Section::spins;
      else if (first == "[couplings]")
        section = Section::couplings;
      else
        throw ValidationError("line " + std::to_string(lineno) +
                              ": unknown section '" + first + "'");
      std::string extra;
      if (row >> extra)
        throw ValidationError("line " + std::to_string(lineno) +
                              ": trailing tokens after section header");
      continue;
    }
    if (line.find('=') != std::string::npos)
      throw ValidationError("line " + std::to_string(lineno) +
                            ": unknown key '" + first + "'");
    if (section == Section::none)
      throw ValidationError("line " + std::to_string(lineno) +
                            ": data before any section");

    if (section == Section::spins) {
      SpinSystemConfig::SpinRow s;
      s.line = lineno;
      std::istringstream fields(line);
      std::string extra;
      if (!(fields >> s.index >> s.species >> s.larmor_hz >> s.gamma_rel) ||
          (fields >> extra))
        throw ValidationError("line " + std::to_string(lineno) +
                              ": expected 'index species larmor_hz gamma_rel'");
      config.spins.push_back(s);
    } else {
      SpinSystemConfig::CouplingRow c;
      c.line = lineno;
      std::istringstream fields(line);
      std::string extra;
      if (!(fields >> c.i >> c.j >> c.d_hz >> c.j_hz) || (fields >> extra))
        throw ValidationError("line " + std::to_string(lineno) +
                              ": expected 'i j d_hz j_hz'");
      config.couplings.push_back(c);
    }
  }
  return config;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SpinSystem load_spin_system(const std::filesystem::path& path) {
  return build_spin_system(parse_config(read_file(path)));
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush())
      throw ValidationError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string transitions_csv(const TransitionTable& table, const LabelMap* labels) {
  std::ostringstream os;
  os << "id,freq_hz,intensity,species,upper,lower,upper_label,lower_label\n";
  for (const auto& t : table.rows) {
    os << t.id << ',' << format_g9(t.freq_hz) << ',' << format_g9(t.intensity)
       << ',' << t.species << ',' << t.upper << ',' << t.lower << ',';
    if (labels) os << labels->label_string(t.upper);
    os << ',';
    if (labels) os << labels->label_string(t.lower);
    os << '\n';
  }
  return os.str();
}

std::vector<TransitionRecord> parse_transitions_csv(const std::string& text) {
  std::vector<TransitionRecord> records;
  walk_csv(text, "id,freq_hz,intensity,species,upper,lower,upper_label,lower_label",
           8, [&](int lineno, const std::string& row, const auto& f) {
             TransitionRecord r;
             r.id = parse_int_field(f[0], lineno, row);
             r.freq_hz = parse_double_field(f[1], lineno, row);
             r.species = f[3];
             records.push_back(r);
           });
  if (records.empty()) warn("transition list is empty");
  return records;
}

std::string peaklist_csv(const PeakList2D& peaks) {
  std::ostringstream os;
  os << "omega1_hz,omega2_hz,t1_id,t2_id,amplitude,species\n";
  for (const auto& p : peaks.entries)
    os << format_g9(p.omega1_hz) << ',' << format_g9(p.omega2_hz) << ','
       << p.t1_id << ',' << p.t2_id << ',' << format_g9(p.amplitude) << ','
       << p.species << '\n';
  return os.str();
}

PeakList2D parse_peaklist_csv(const std::string& text) {
  PeakList2D peaks;
  walk_csv(text, "omega1_hz,omega2_hz,t1_id,t2_id,amplitude,species", 6,
           [&](int lineno, const std::string& row, const auto& f) {
             Peak2D p;
             p.omega1_hz = parse_double_field(f[0], lineno, row);
             p.omega2_hz = parse_double_field(f[1], lineno, row);
             p.t1_id = parse_int_field(f[2], lineno, row);
             p.t2_id = parse_int_field(f[3], lineno, row);
             p.amplitude = parse_double_field(f[4], lineno, row);
             p.species = f[5];
             peaks.entries.push_back(p);
           });
  if (peaks.entries.empty()) warn("peak list is empty");
  peaks.sort_canonical();
  return peaks;
}

std::string connectivity_csv(const ConnectivityMatrix& conn) {
  std::ostringstream os;
  os << "i,j,type\n";
  for (const auto& [key, type] : conn.entries) {
    if (type == Connectivity::none) continue;
    os << key.first << ',' << key.second << ','
       << (type == Connectivity::progressive ? "progressive" : "regressive")
       << '\n';
  }
  return os.str();
}

ConnectivityMatrix parse_connectivity_csv(const std::string& text) {
  ConnectivityMatrix conn;
  walk_csv(text, "i,j,type", 3,
           [&](int lineno, const std::string& row, const auto& f) {
             const int i = parse_int_field(f[0], lineno, row);
             const int j = parse_int_field(f[1], lineno, row);
             Connectivity type;
             if (f[2] == "progressive")
               type = Connectivity::progressive;
             else if (f[2] == "regressive")
               type = Connectivity::regressive;
             else
               row_error(lineno, row, "unknown connectivity type '" + f[2] + "'");
             if (i == j) row_error(lineno, row, "diagonal connectivity");
             conn.set(i, j, type);
           });
  return conn;
}

std::string spectrum_csv(const Spectrum1D& spec) {
  std::ostringstream os;
  os << "freq_hz,amplitude,transition_id,species\n";
  for (const auto& l : spec.lines)
    os << format_g9(l.freq_hz) << ',' << format_g9(l.amplitude) << ','
       << l.transition_id << ',' << l.species << '\n';
  return os.str();
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream os;
  os << "freq_hz,amplitude\n";
  for (size_t i = 0; i < trace.freq_hz.size(); ++i)
    os << format_g9(trace.freq_hz[i]) << ',' << format_g9(trace.amplitude[i])
       << '\n';
  return os.str();
}

json spectrum_json(const Spectrum1D& spec) {
  json lines = json::array();
  for (const auto& l : spec.lines)
    lines.push_back({{"freq_hz", quantize(l.freq_hz)},
                     {"amplitude", quantize(l.amplitude)},
                     {"transition_id", l.transition_id},
                     {"species", l.species}});
  return {{"species", spec.species},
          {"angle_rad", quantize(spec.angle)},
          {"linewidth_hz", quantize(spec.linewidth_hz)},
          {"lines", lines}};
}

json coherence_json(const CoherenceReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json order = json::object();
    for (const auto& [tag, q] : e.order) order[tag] = q;
    json entry = {{"level_a", e.level_a},
                  {"level_b", e.level_b},
                  {"label_a", e.label_a},
                  {"label_b", e.label_b},
                  {"order", order},
                  {"magnitude", quantize(e.magnitude)},
                  {"phase", quantize(e.phase)}};
    if (e.omega1_hz)
      entry["omega1_hz"] = quantize(*e.omega1_hz);
    else
      entry["omega1_hz"] = nullptr;
    entry["no_path"] = e.no_path;
    entries.push_back(entry);
  }
  return {{"floor", quantize(report.floor)}, {"entries", entries}};
}

json state_json(const Model& model, const DensityState& state,
                double coherence_floor) {
  json pops = json::array();
  for (int lv = 0; lv < state.dim(); ++lv) {
    json p = {{"level", lv}, {"population", quantize(state.population(lv))}};
    if (model.labels) p["label"] = model.labels->label_string(lv);
    pops.push_back(p);
  }
  return {{"populations", pops},
          {"coherences", coherence_json(coherence_report(model, state,
                                                         coherence_floor))}};
}

json diagram_json(const LevelDiagram& diagram) {
  json components = json::array();
  for (const auto& comp : diagram.components) {
    json levels = json::array();
    for (const auto& l : comp.levels) {
      json jl = {{"id", l.id}, {"energy_hz", quantize(l.energy_hz)}};
      if (!l.label.empty()) jl["label"] = l.label;
      levels.push_back(jl);
    }
    json edges = json::array();
    for (const auto& e : comp.edges)
      edges.push_back({{"transition_id", e.transition_id},
                       {"upper", e.upper},
                       {"lower", e.lower},
                       {"freq_hz", quantize(e.freq_hz)}});
    components.push_back({{"levels", levels}, {"edges", edges}});
  }
  json out = {{"components", components},
              {"n_levels", diagram.total_levels()},
              {"tolerance_hz", quantize(diagram.tol)},
              {"solutions_found", diagram.solutions_found},
              {"solution_count_capped", diagram.solution_count_capped}};
  if (diagram.expected_levels > 0)
    out["expected_levels"] = diagram.expected_levels;
  if (!diagram.ambiguity_notes.empty())
    out["ambiguity_notes"] = diagram.ambiguity_notes;
  return out;
}

json verify_json(const VerifyReport& report) {
  json flagged = json::array();
  for (const auto& [id, residual] : report.flagged_edges)
    flagged.push_back({{"transition_id", id}, {"residual_hz", quantize(residual)}});
  json out = {{"max_residual_hz", quantize(report.max_residual_hz)},
              {"flagged_edges", flagged},
              {"unassigned_transitions", report.unassigned_transitions},
              {"n_levels", report.n_levels},
              {"n_components", report.n_components},
              {"all_pass", report.all_pass()}};
  if (report.expected_levels > 0)
    out["expected_levels"] = report.expected_levels;
  return out;
}

json entanglement_json(const EntanglementResult& result) {
  json stages = json::array();
  for (const auto& s : result.stages) {
    json pops = json::array();
    for (int i = 0; i < s.populations.size(); ++i)
      pops.push_back(quantize(s.populations(i)));
    stages.push_back({{"name", s.name},
                      {"fidelity", quantize(s.fidelity)},
                      {"flagged", s.flagged},
                      {"populations", pops},
                      {"coherences", coherence_json(s.report)}});
  }
  return {{"flip_error", quantize(result.flip_error)},
          {"fidelity_floor", quantize(result.fidelity_floor)},
          {"subsystem_levels", result.subsystem_levels},
          {"stages", stages}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace nmrqip::io
