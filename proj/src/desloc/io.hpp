#pragma once

#include <optional>
#include <string>
#include <vector>

#include "desloc/automaton.hpp"

namespace desloc {

/* --- automaton files ---
   Canonical JSON layout:
     {name, states, initial, marker, events: [{id, controllable, observable}],
      transitions: [[source, event, target], ...], annotations?}
   Events ascend by id, transitions sort lexicographically on (source, event),
   so save(load(save(g))) is byte-identical. */

std::string save_automaton(const Generator& g);
Generator load_automaton(const std::string& text, const std::string& origin);

Generator load_automaton_file(const std::string& path);
void save_automaton_file(const Generator& g, const std::string& path);

/* --- pipeline manifests --- */

struct SubsystemGroup {
  std::string name;
  std::vector<std::string> members;  /* spec names */
};

struct PipelineFlags {
  bool harmless_removal = false;  /* full-observation optimization, default off */
  int depth_product = 8;
  int depth_oracle = 10;
  int depth_verify = 12;
  long long state_budget = 10'000'000;  /* exact global verification cap */
};

struct PipelineManifest {
  std::vector<std::string> plant_paths;
  std::vector<std::string> spec_paths;
  std::set<EventId> unobservable;
  std::vector<SubsystemGroup> groups;
  std::vector<std::string> between;  /* spec names left between subsystems */
  std::optional<std::vector<EventId>> abstraction_seed;
  PipelineFlags flags;
  std::string out_dir;
};

std::string save_manifest(const PipelineManifest& m);
/* Paths inside the document are resolved against the manifest's directory. */
PipelineManifest load_manifest_file(const std::string& path);
void save_manifest_file(const PipelineManifest& m, const std::string& path);

/* --- run reports --- */

struct CheckEntry {
  std::string name;
  bool pass = true;
  std::string witness;  /* empty when passing */
};

struct StageReport {
  std::string stage;
  std::string artifact;
  int states = 0;
  std::vector<CheckEntry> checks;
};

std::string save_report(const std::vector<StageReport>& stages);

/* --- DOT export ---
   Markers double-circled, initial gets an entry arrow, controllable edges
   bold, unobservable edges dashed. */
std::string export_dot(const Generator& g);

/* --- plain text files --- */
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace desloc
