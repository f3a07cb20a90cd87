#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nmrqip/level_diagram.hpp"
#include "nmrqip/model.hpp"
#include "nmrqip/protocols.hpp"
#include "nmrqip/pulses.hpp"
#include "nmrqip/zcosy.hpp"

namespace nmrqip::io {

using json = nlohmann::json;

/// Spin-system configuration: sections [spins] (index species larmor_hz
/// gamma_rel) and [couplings] (i j d_hz j_hz), '#' comments. Unknown sections
/// or keys are rejected by name.
SpinSystemConfig parse_config(const std::string& text);
SpinSystem load_spin_system(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Write via a temporary file and rename, so partial outputs are never left
/// behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// CSV formats. All numbers carry 9 significant digits.
std::string transitions_csv(const TransitionTable& table, const LabelMap* labels);
std::vector<TransitionRecord> parse_transitions_csv(const std::string& text);

std::string peaklist_csv(const PeakList2D& peaks);
PeakList2D parse_peaklist_csv(const std::string& text);  // empty file -> warning

std::string connectivity_csv(const ConnectivityMatrix& conn);
ConnectivityMatrix parse_connectivity_csv(const std::string& text);

std::string spectrum_csv(const Spectrum1D& spec);
std::string trace_csv(const Trace& trace);

// JSON records (numbers quantized to 9 significant digits).
json spectrum_json(const Spectrum1D& spec);
json state_json(const Model& model, const DensityState& state,
                double coherence_floor = 1e-9);
json diagram_json(const LevelDiagram& diagram);
json verify_json(const VerifyReport& report);
json coherence_json(const CoherenceReport& report);
json entanglement_json(const EntanglementResult& result);

std::string dump_json(const json& j);

}  // namespace nmrqip::io
