#include "desloc/fixtures.hpp"

#include <filesystem>

namespace desloc::fixtures {

namespace {

const std::set<EventId> kUnobservable = {13, 23, 31, 42, 53};

EventInfo attributes(EventId e) {
  EventInfo info;
  info.controllable = (e % 2) == 1;
  info.observable = kUnobservable.count(e) == 0;
  return info;
}

/* One loop route: state i takes seq[i] to state (i+1) mod n; rest at 0. */
Generator route(const std::string& name, const std::vector<EventId>& seq) {
  Generator g;
  g.name = name;
  g.state_count = static_cast<int>(seq.size());
  g.initial = 0;
  g.marker = {0};
  for (int i = 0; i < g.state_count; ++i) {
    g.events.add(seq[i], attributes(seq[i]));
    g.add_transition(i, seq[i], (i + 1) % g.state_count);
  }
  return g;
}

/* One-slot resource: any fill event takes it, any drain event frees it. */
Generator slot(const std::string& name, const std::vector<EventId>& fill,
               const std::vector<EventId>& drain) {
  Generator g;
  g.name = name;
  g.state_count = 2;
  g.initial = 0;
  g.marker = {0};
  for (EventId e : fill) {
    g.events.add(e, attributes(e));
    g.add_transition(0, e, 1);
  }
  for (EventId e : drain) {
    g.events.add(e, attributes(e));
    g.add_transition(1, e, 0);
  }
  return g;
}

}  // namespace

std::vector<Generator> agv_plants() {
  std::vector<Generator> plants;
  plants.push_back(route("A1", {11, 10, 13, 12}));
  plants.push_back(route("A2", {21, 18, 20, 22, 23, 24, 26, 28}));
  plants.push_back(route("A3", {33, 34, 31, 32}));
  plants.push_back(route("A4", {43, 44, 41, 42}));
  plants.push_back(route("A5", {51, 50, 53, 52}));
  return plants;
}

std::vector<Generator> agv_specs() {
  std::vector<Generator> specs;
  specs.push_back(slot("Z1", {11, 13, 20, 23}, {10, 12, 22, 24}));
  specs.push_back(slot("Z2", {18, 24, 31, 33}, {20, 26, 32, 34}));
  specs.push_back(slot("Z3", {21, 26, 41, 43}, {18, 28, 42, 44}));
  specs.push_back(slot("Z4", {41, 43, 51, 53}, {42, 44, 50, 52}));
  specs.push_back(slot("WS13", {31}, {50}));
  specs.push_back(slot("WS14", {43}, {51}));
  specs.push_back(slot("WS2", {13}, {34}));
  specs.push_back(slot("WS3", {28}, {42}));
  {
    /* Input station dock: one berth, held by A1 over [10..13) and by A2
       over [22..23). */
    Generator ips;
    ips.name = "IPS";
    ips.state_count = 3;
    ips.initial = 0;
    ips.marker = {0};
    for (EventId e : {10, 13, 22, 23}) ips.events.add(e, attributes(e));
    ips.add_transition(0, 10, 1);
    ips.add_transition(1, 13, 0);
    ips.add_transition(0, 22, 2);
    ips.add_transition(2, 23, 0);
    specs.push_back(ips);
  }
  return specs;
}

PipelineManifest agv_manifest() {
  PipelineManifest m;
  m.unobservable = kUnobservable;
  m.groups.push_back({"SUB1", {"Z3", "Z4", "WS14", "WS3"}});
  m.groups.push_back({"SUB2", {"WS13", "WS2"}});
  m.between = {"Z1", "Z2", "IPS"};
  /* pinned abstraction alphabet: the shared events of the five level-2
     inputs; pinning skips the observer-driven extension */
  m.abstraction_seed = {11, 12, 21, 24, 26, 32, 33, 50, 51, 52, 53};
  return m;
}

void write_agv(const std::string& dir) {
  std::filesystem::create_directories(dir);
  PipelineManifest m = agv_manifest();
  for (const Generator& g : agv_plants()) {
    save_automaton_file(g, dir + "/" + g.name + ".json");
    m.plant_paths.push_back(g.name + ".json");
  }
  for (const Generator& g : agv_specs()) {
    save_automaton_file(g, dir + "/" + g.name + ".json");
    m.spec_paths.push_back(g.name + ".json");
  }
  save_manifest_file(m, dir + "/agv.json");
}

}  // namespace desloc::fixtures
