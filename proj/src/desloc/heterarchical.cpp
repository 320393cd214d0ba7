#include "desloc/heterarchical.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <map>
#include <sstream>

#include "desloc/simulate.hpp"
#include "desloc/synthesis.hpp"

namespace desloc {

namespace {

std::set<EventId> alphabet_set(const Generator& g) {
  std::vector<EventId> v = g.alphabet();
  return std::set<EventId>(v.begin(), v.end());
}

const NamedSupervisor* find_by_base(const std::vector<NamedSupervisor>& v,
                                    const std::string& base) {
  for (const NamedSupervisor& ns : v)
    if (ns.base == base) return &ns;
  return nullptr;
}

/* Shortest event string from the initial state to `goal`. */
std::vector<EventId> path_to_state(const Generator& g, int goal) {
  if (goal < 0 || goal >= g.state_count) return {};
  std::vector<int> parent(g.state_count, -1);
  std::vector<EventId> via(g.state_count, -1);
  std::vector<char> seen(g.state_count, 0);
  std::deque<int> queue{g.initial};
  seen[g.initial] = 1;
  while (!queue.empty() && !seen[goal]) {
    int s = queue.front();
    queue.pop_front();
    for_each_transition_at(g, s, [&](EventId e, int t) {
      if (seen[t]) return;
      seen[t] = 1;
      parent[t] = s;
      via[t] = e;
      queue.push_back(t);
    });
  }
  std::vector<EventId> path;
  for (int s = goal; seen[goal] && s != g.initial; s = parent[s]) path.push_back(via[s]);
  std::reverse(path.begin(), path.end());
  return path;
}

StageReport stage_entry(const std::string& stage, const std::string& artifact,
                        int states) {
  StageReport r;
  r.stage = stage;
  r.artifact = artifact;
  r.states = states;
  return r;
}

}  // namespace

DecentralizedPlant build_decentralized_plant(
    const Generator& spec, const std::vector<const Generator*>& plants) {
  std::set<EventId> spec_events = alphabet_set(spec);
  std::vector<const Generator*> touching;
  std::vector<std::string> components;
  for (const Generator* p : plants) {
    for (EventId e : p->alphabet()) {
      if (spec_events.count(e)) {
        touching.push_back(p);
        components.push_back(p->name);
        break;
      }
    }
  }
  if (touching.empty())
    throw Error("decentralized: specification " + spec.name +
                " shares no events with any plant");
  Generator g = touching.size() == 1 ? *touching.front() : sync_all(touching);
  g.name = spec.name + "PLANT";
  return {std::move(g), std::move(components)};
}

std::vector<NamedSupervisor> synthesize_decentralized(
    const std::vector<const Generator*>& plants,
    const std::vector<const Generator*>& specs, const ObservationMask& mask) {
  std::vector<NamedSupervisor> out;
  for (const Generator* spec : specs) {
    DecentralizedPlant dp = build_decentralized_plant(*spec, plants);
    Generator k = sup_rco(SynthesisProblem(dp.plant, *spec, mask));
    if (k.empty())
      throw Error("decentralized: the supervisor for " + spec->name +
                  " is empty");
    POSupervisor sup = build_po_supervisor(k, dp.plant, mask);
    sup.automaton.name = spec->name + "SUP";
    NamedSupervisor ns;
    ns.name = spec->name + "SUP";
    ns.base = spec->name;
    ns.sup = std::move(sup);
    ns.plant = std::move(dp.plant);
    ns.components = std::move(dp.components);
    out.push_back(std::move(ns));
  }
  return out;
}

Generator compose_subsystem(const std::vector<const Generator*>& parts) {
  if (parts.empty()) throw Error("subsystem: nothing to compose");
  return sync_all(parts);
}

POSupervisor synthesize_coordinator(const Generator& sub,
                                    const ObservationMask& mask) {
  Generator legal = trim(sub);
  if (legal.empty())
    throw Error("coordinator: " + sub.name + " marks no reachable behavior");
  Generator k = is_nonblocking(sub).nonblocking
                    ? legal
                    : sup_rco(SynthesisProblem(sub, legal, mask));
  if (k.empty())
    throw Error("coordinator: synthesis for " + sub.name + " is empty");
  return build_po_supervisor(k, sub, mask);
}

HeterarchicalArray run_pipeline_loaded(const PipelineManifest& manifest,
                                       std::vector<Generator> plants,
                                       std::vector<Generator> specs) {
  HeterarchicalArray arr;
  arr.plants = std::move(plants);
  arr.specs = std::move(specs);
  arr.mask = ObservationMask(manifest.unobservable);

  /* Every specification must appear in exactly one group or in `between`. */
  std::map<std::string, int> spec_index;
  for (int i = 0; i < static_cast<int>(arr.specs.size()); ++i)
    if (!spec_index.emplace(arr.specs[i].name, i).second)
      throw Error("manifest: duplicate specification name " + arr.specs[i].name);
  std::map<std::string, int> uses;
  for (const SubsystemGroup& g : manifest.groups)
    for (const std::string& m : g.members) {
      if (!spec_index.count(m))
        throw Error("manifest: group " + g.name +
                    " lists unknown specification " + m);
      ++uses[m];
    }
  for (const std::string& m : manifest.between) {
    if (!spec_index.count(m))
      throw Error("manifest: unknown in-between specification " + m);
    ++uses[m];
  }
  for (const auto& [name, idx] : spec_index) {
    (void)idx;
    if (uses[name] == 0)
      throw Error("manifest: specification " + name +
                  " is in no group and not in between");
    if (uses[name] > 1)
      throw Error("manifest: specification " + name + " is listed twice");
  }

  std::vector<const Generator*> plant_ptrs;
  std::vector<const Generator*> spec_ptrs;
  for (const Generator& g : arr.plants) plant_ptrs.push_back(&g);
  for (const Generator& g : arr.specs) spec_ptrs.push_back(&g);

  /* one supervisor per specification, each on its own decentralized plant */
  arr.supervisors = synthesize_decentralized(plant_ptrs, spec_ptrs, arr.mask);
  for (NamedSupervisor& ns : arr.supervisors) {
    StageReport r = stage_entry("decentralized", ns.name,
                                ns.sup.automaton.state_count);
    r.checks.push_back({"nonempty", !ns.sup.automaton.empty(), ""});
    if (manifest.flags.harmless_removal) {
      bool disables = false;
      for (const std::set<EventId>& d : ns.sup.disabled_map)
        if (!d.empty()) disables = true;
      if (!disables &&
          language_equal(sync(ns.plant, ns.sup.automaton), ns.plant).equal) {
        ns.harmless = true;
        r.checks.push_back({"removed as harmless", true, ""});
      }
    }
    arr.report.push_back(std::move(r));
  }

  /* the decentralized plants jointly describe the same shop floor */
  {
    std::vector<const Generator*> covers;
    for (const NamedSupervisor& ns : arr.supervisors) covers.push_back(&ns.plant);
    if (!covers.empty()) {
      Generator joint = sync_all(covers);
      Generator whole = sync_all(plant_ptrs);
      LanguageCompareResult cmp =
          bounded_language_equal(joint, whole, manifest.flags.depth_product);
      StageReport r = stage_entry("decentralized", "plant cover",
                                  whole.state_count);
      r.checks.push_back({"covers the full plant", cmp.equal,
                          cmp.equal ? "" : format_string(cmp.witness)});
      arr.report.push_back(std::move(r));
    }
  }

  /* group the supervised modules and coordinate any blocking group */
  int co_counter = 0;
  for (const SubsystemGroup& group : manifest.groups) {
    std::vector<const NamedSupervisor*> members;
    for (const std::string& m : group.members)
      members.push_back(find_by_base(arr.supervisors, m));
    std::vector<const Generator*> parts;
    for (const Generator& p : arr.plants) {
      bool used = false;
      for (const NamedSupervisor* ns : members)
        if (std::find(ns->components.begin(), ns->components.end(), p.name) !=
            ns->components.end())
          used = true;
      if (used) parts.push_back(&p);
    }
    for (const NamedSupervisor* ns : members)
      if (!ns->harmless) parts.push_back(&ns->sup.automaton);

    Subsystem sub;
    sub.name = group.name;
    sub.behavior = compose_subsystem(parts);
    sub.behavior.name = group.name;
    NonblockingResult nb = is_nonblocking(sub.behavior);
    sub.blocking = !nb.nonblocking;
    {
      StageReport r = stage_entry("subsystem", group.name,
                                  sub.behavior.state_count);
      r.checks.push_back(
          {"nonblocking", nb.nonblocking,
           nb.nonblocking
               ? ""
               : format_string(path_to_state(sub.behavior, nb.witness_state))});
      arr.report.push_back(std::move(r));
    }

    if (sub.blocking) {
      std::string co_name = "CO" + std::to_string(++co_counter);
      POSupervisor co = synthesize_coordinator(sub.behavior, arr.mask);
      co.automaton.name = co_name;
      sub.coordinator = co_name;
      sub.coordinated = trim(sync(sub.behavior, co.automaton));
      sub.coordinated.name = "N" + group.name;
      StageReport r = stage_entry("coordinator", co_name,
                                  co.automaton.state_count);
      r.checks.push_back({"restores nonblocking",
                          is_nonblocking(sub.coordinated).nonblocking, ""});
      arr.report.push_back(std::move(r));
      NamedSupervisor nco;
      nco.name = co_name;
      nco.base = co_name;
      nco.sup = std::move(co);
      nco.plant = sub.behavior;
      nco.components = {group.name};
      arr.coordinators.push_back(std::move(nco));
    } else {
      sub.coordinated = trim(sub.behavior);
      sub.coordinated.name = group.name;
    }
    arr.subsystems.push_back(std::move(sub));
  }

  /* reduce the in-between supervisors to their control kernels */
  std::vector<const Generator*> sims;
  for (const std::string& m : manifest.between) {
    const NamedSupervisor* ns = find_by_base(arr.supervisors, m);
    if (ns->harmless) continue;
    Generator sim = reduce_supervisor(ns->sup, ns->plant);
    sim.name = ns->base + "SIM";
    arr.report.push_back(stage_entry("reduction", sim.name, sim.state_count));
    arr.reduced.emplace(sim.name, std::move(sim));
  }
  for (const std::string& m : manifest.between)
    if (arr.reduced.count(m + "SIM")) sims.push_back(&arr.reduced.at(m + "SIM"));

  /* abstract each coordinated subsystem over an observer-closed alphabet */
  std::vector<const Generator*> level;
  for (const Subsystem& s : arr.subsystems) level.push_back(&s.coordinated);
  std::vector<const Generator*> shared_inputs = level;
  shared_inputs.insert(shared_inputs.end(), sims.begin(), sims.end());

  std::vector<const Generator*> top_parts;
  if (!shared_inputs.empty()) {
    if (shared_inputs.size() >= 2)
      arr.shared = shared_alphabet(shared_inputs);
    else
      arr.shared = alphabet_set(*shared_inputs.front());
    /* A pinned seed fixes the abstraction alphabet as configuration and skips
       the observer-driven extension; the observer verdicts below still report
       honestly against the pinned set. Without a pin, grow the shared set
       until every input projects through an observer. */
    if (manifest.abstraction_seed)
      arr.shared_extended = std::set<EventId>(manifest.abstraction_seed->begin(),
                                              manifest.abstraction_seed->end());
    else
      arr.shared_extended = minimal_observer_extension(shared_inputs, arr.shared);
    {
      StageReport r = stage_entry("abstraction", "shared alphabet",
                                  static_cast<int>(arr.shared_extended.size()));
      if (manifest.abstraction_seed)
        r.checks.push_back({"pinned seed matches shared alphabet",
                            arr.shared_extended == arr.shared, ""});
      for (const Generator* g : shared_inputs) {
        ObserverCheckResult oc = check_natural_observer(*g, arr.shared_extended);
        r.checks.push_back({"natural observer for " + g->name, oc.ok,
                            oc.ok ? "" : oc.detail});
      }
      arr.report.push_back(std::move(r));
    }
    for (const Subsystem& s : arr.subsystems) {
      std::set<EventId> keep;
      for (EventId e : s.coordinated.alphabet())
        if (arr.shared_extended.count(e)) keep.insert(e);
      Generator qc = minimize(project_generator(s.coordinated, keep));
      qc.name = "QC_" + s.coordinated.name;
      arr.report.push_back(stage_entry("abstraction", qc.name, qc.state_count));
      arr.abstractions.emplace(qc.name, std::move(qc));
    }
    for (const Subsystem& s : arr.subsystems)
      top_parts.push_back(&arr.abstractions.at("QC_" + s.coordinated.name));
    top_parts.insert(top_parts.end(), sims.begin(), sims.end());
  }

  /* coordinate the abstracted level if its product blocks */
  if (!top_parts.empty()) {
    arr.top_product = sync_all(top_parts);
    arr.top_product.name = "TOP";
    NonblockingResult nb = is_nonblocking(arr.top_product);
    StageReport r = stage_entry("top", "TOP", arr.top_product.state_count);
    r.checks.push_back(
        {"nonblocking", nb.nonblocking,
         nb.nonblocking
             ? ""
             : format_string(path_to_state(arr.top_product, nb.witness_state))});
    arr.report.push_back(std::move(r));
    if (!nb.nonblocking) {
      std::string co_name = "CO" + std::to_string(++co_counter);
      POSupervisor co = synthesize_coordinator(arr.top_product, arr.mask);
      co.automaton.name = co_name;
      Generator closed = trim(sync(arr.top_product, co.automaton));
      StageReport cr = stage_entry("coordinator", co_name,
                                   co.automaton.state_count);
      cr.checks.push_back({"restores nonblocking",
                           is_nonblocking(closed).nonblocking, ""});
      arr.report.push_back(std::move(cr));
      NamedSupervisor nco;
      nco.name = co_name;
      nco.base = co_name;
      nco.sup = std::move(co);
      nco.plant = arr.top_product;
      nco.components = {"TOP"};
      arr.coordinators.push_back(std::move(nco));
    }
  }

  /* localize every supervisor and coordinator to per-event controllers */
  auto localize_one = [&](const NamedSupervisor& ns) {
    StageReport r = stage_entry("localization", ns.name,
                                ns.sup.automaton.state_count);
    if (ns.harmless) {
      r.checks.push_back({"removed as harmless", true, ""});
      arr.report.push_back(std::move(r));
      return;
    }
    LocalizationResult lr = localize(ns.sup, ns.plant);
    for (LocalController& lc : lr.controllers)
      lc.automaton.name = ns.base + "_" + std::to_string(lc.controlled_event);
    for (EventId e : lr.trivially_enabled) arr.suppressed.push_back({ns.name, e});
    std::vector<const LocalController*> locs;
    for (const LocalController& lc : lr.controllers) locs.push_back(&lc);
    LanguageCompareResult cmp = verify_control_equivalence(ns.plant, ns.sup, locs);
    r.checks.push_back({"control equivalent", cmp.equal,
                        cmp.equal ? "" : format_string(cmp.witness)});
    arr.report.push_back(std::move(r));
    for (LocalController& lc : lr.controllers) {
      StageReport cr = stage_entry("localization", lc.automaton.name,
                                   lc.automaton.state_count);
      std::vector<std::string> bad = local_controller_violations(lc, arr.mask);
      cr.checks.push_back({"feasible", bad.empty(), bad.empty() ? "" : bad.front()});
      arr.report.push_back(std::move(cr));
      NamedController nc;
      nc.name = lc.automaton.name;
      nc.owner = ns.name;
      nc.controller = std::move(lc);
      arr.controllers.push_back(std::move(nc));
    }
  };
  for (const NamedSupervisor& ns : arr.supervisors) localize_one(ns);
  for (const NamedSupervisor& ns : arr.coordinators) localize_one(ns);

  {
    std::vector<const LocalController*> locs;
    for (const NamedController& nc : arr.controllers)
      locs.push_back(&nc.controller);
    FeasibilityResult fr = check_feasibility(locs, arr.mask);
    StageReport r = stage_entry("localization", "controllers",
                                static_cast<int>(locs.size()));
    r.checks.push_back({"jointly feasible", fr.ok, fr.ok ? "" : fr.detail});
    arr.report.push_back(std::move(r));
  }
  return arr;
}

HeterarchicalArray run_pipeline(const PipelineManifest& manifest) {
  std::vector<Generator> plants;
  std::vector<Generator> specs;
  for (const std::string& path : manifest.plant_paths)
    plants.push_back(load_automaton_file(path));
  for (const std::string& path : manifest.spec_paths)
    specs.push_back(load_automaton_file(path));
  HeterarchicalArray arr =
      run_pipeline_loaded(manifest, std::move(plants), std::move(specs));
  if (!manifest.out_dir.empty()) write_artifacts(arr, manifest.out_dir);
  return arr;
}

void write_artifacts(const HeterarchicalArray& arr, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto put = [&](const Generator& g) {
    if (g.name.empty()) return;
    save_automaton_file(g, out_dir + "/" + g.name + ".json");
    write_text_file(out_dir + "/" + g.name + ".dot", export_dot(g));
  };
  for (const Generator& g : arr.plants) put(g);
  for (const Generator& g : arr.specs) put(g);
  for (const NamedSupervisor& ns : arr.supervisors) put(ns.sup.automaton);
  for (const Subsystem& s : arr.subsystems) {
    put(s.behavior);
    if (s.coordinated.name != s.behavior.name) put(s.coordinated);
  }
  for (const NamedSupervisor& ns : arr.coordinators) put(ns.sup.automaton);
  for (const auto& [name, g] : arr.abstractions) {
    (void)name;
    put(g);
  }
  for (const auto& [name, g] : arr.reduced) {
    (void)name;
    put(g);
  }
  if (!arr.top_product.empty()) put(arr.top_product);
  for (const NamedController& nc : arr.controllers) put(nc.controller.automaton);
  write_text_file(out_dir + "/report.json", save_report(arr.report));
}

namespace {

/* Depth-cut synchronous product: exact up to `depth`, with horizon states
   flagged open so bounded checks can treat their future as unknown. */
struct Truncation {
  Generator gen;
  std::vector<char> open;
};

Truncation truncated_product(const std::vector<const Generator*>& parts,
                             int depth) {
  Truncation out;
  Generator& p = out.gen;
  for (const Generator* g : parts) p.events.merge(g->events);
  p.name = "bounded product";
  for (const Generator* g : parts)
    if (g->empty()) return out;
  std::vector<EventId> alphabet = p.events.ids();
  const std::size_t n = parts.size();
  std::vector<std::vector<std::size_t>> movers(alphabet.size());
  for (std::size_t e = 0; e < alphabet.size(); ++e)
    for (std::size_t k = 0; k < n; ++k)
      if (parts[k]->events.contains(alphabet[e])) movers[e].push_back(k);

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> tuples;
  std::vector<int> dist;
  std::vector<int> start(n);
  for (std::size_t k = 0; k < n; ++k) start[k] = parts[k]->initial;
  index.emplace(start, 0);
  tuples.push_back(start);
  dist.push_back(0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    if (dist[s] >= depth) continue;
    std::vector<int> tuple = tuples[s];
    for (std::size_t e = 0; e < alphabet.size(); ++e) {
      std::vector<int> next = tuple;
      bool enabled = true;
      for (std::size_t k : movers[e]) {
        int t = parts[k]->target(tuple[k], alphabet[e]);
        if (t < 0) {
          enabled = false;
          break;
        }
        next[k] = t;
      }
      if (!enabled) continue;
      auto [it, inserted] = index.emplace(next, static_cast<int>(tuples.size()));
      if (inserted) {
        tuples.push_back(next);
        dist.push_back(dist[s] + 1);
        queue.push_back(it->second);
      }
      p.delta.emplace(std::make_pair(s, alphabet[e]), it->second);
    }
  }
  p.state_count = static_cast<int>(tuples.size());
  p.initial = 0;
  for (int s = 0; s < p.state_count; ++s) {
    bool marked = true;
    for (std::size_t k = 0; k < n; ++k)
      if (!parts[k]->marked(tuples[s][k])) {
        marked = false;
        break;
      }
    if (marked) p.marker.push_back(s);
  }
  out.open.assign(p.state_count, 0);
  for (int s = 0; s < p.state_count; ++s)
    if (dist[s] >= depth) out.open[s] = 1;
  return out;
}

/* Within the explored region a state is doomed only when its whole future is
   explored and marker-free; horizon states count as able to continue. */
bool truncation_nonblocking(const Truncation& t, std::vector<EventId>* witness) {
  const Generator& g = t.gen;
  if (g.empty()) return true;
  std::vector<std::vector<int>> preds(g.state_count);
  for (const auto& [key, target] : g.delta) preds[target].push_back(key.first);
  std::vector<char> good(g.state_count, 0);
  std::deque<int> queue;
  for (int s = 0; s < g.state_count; ++s)
    if (g.marked(s) || t.open[s]) {
      good[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int q : preds[s])
      if (!good[q]) {
        good[q] = 1;
        queue.push_back(q);
      }
  }
  for (int s = 0; s < g.state_count; ++s)
    if (!good[s]) {
      if (witness) *witness = path_to_state(g, s);
      return false;
    }
  return true;
}

}  // namespace

GlobalVerifyReport verify_global_equivalence(const HeterarchicalArray& arr,
                                             const PipelineManifest& manifest) {
  GlobalVerifyReport rep;
  std::vector<const Generator*> plant_ptrs;
  for (const Generator& g : arr.plants) plant_ptrs.push_back(&g);
  std::vector<const Generator*> legal_parts = plant_ptrs;
  for (const Generator& g : arr.specs) legal_parts.push_back(&g);
  std::vector<const Generator*> sys_parts = plant_ptrs;
  for (const NamedSupervisor& ns : arr.supervisors)
    if (!ns.harmless) sys_parts.push_back(&ns.sup.automaton);
  for (const NamedSupervisor& ns : arr.coordinators)
    sys_parts.push_back(&ns.sup.automaton);
  std::vector<const Generator*> loc_parts = plant_ptrs;
  for (const NamedController& nc : arr.controllers)
    loc_parts.push_back(&nc.controller.automaton);

  const long long budget = manifest.flags.state_budget;
  try {
    Generator legal = trim(sync_product(legal_parts, budget).gen);
    Generator sys = sync_product(sys_parts, budget).gen;
    Generator locsys = sync_product(loc_parts, budget).gen;
    rep.mode = "exact";
    LanguageCompareResult safety = language_subset(locsys, legal);
    rep.safe = safety.equal;
    rep.checks.push_back({"safety", safety.equal,
                          safety.equal ? "" : format_string(safety.witness)});
    NonblockingResult nb = is_nonblocking(locsys);
    rep.nonblocking = nb.nonblocking;
    rep.checks.push_back(
        {"nonblocking", nb.nonblocking,
         nb.nonblocking ? ""
                        : format_string(path_to_state(locsys, nb.witness_state))});
    LanguageCompareResult eq = language_equal(locsys, sys);
    rep.system_equal = eq.equal;
    rep.checks.push_back({"localized equals supervised", eq.equal,
                          eq.equal ? "" : format_string(eq.witness)});
  } catch (const BudgetExceeded&) {
    const int depth = manifest.flags.depth_verify;
    rep.mode = "depth-" + std::to_string(depth);
    Truncation legal_t = truncated_product(legal_parts, depth);
    Truncation sys_t = truncated_product(sys_parts, depth);
    Truncation loc_t = truncated_product(loc_parts, depth);
    /* horizon states stay: trimming a truncation would cut legal prefixes */
    LanguageCompareResult safety =
        bounded_language_subset(loc_t.gen, legal_t.gen, depth);
    rep.safe = safety.equal;
    rep.checks.push_back({"safety", safety.equal,
                          safety.equal ? "" : format_string(safety.witness)});
    std::vector<EventId> blocking;
    rep.nonblocking = truncation_nonblocking(loc_t, &blocking);
    rep.checks.push_back({"nonblocking", rep.nonblocking,
                          rep.nonblocking ? "" : format_string(blocking)});
    LanguageCompareResult eq = bounded_language_equal(loc_t.gen, sys_t.gen, depth);
    rep.system_equal = eq.equal;
    rep.checks.push_back({"localized equals supervised", eq.equal,
                          eq.equal ? "" : format_string(eq.witness)});
  }

  auto check_owner = [&](const NamedSupervisor& ns) {
    std::vector<const LocalController*> locs;
    for (const NamedController& nc : arr.controllers)
      if (nc.owner == ns.name) locs.push_back(&nc.controller);
    LanguageCompareResult cmp = verify_control_equivalence(ns.plant, ns.sup, locs);
    if (!cmp.equal) rep.per_supervisor = false;
    rep.checks.push_back({"control equivalence of " + ns.name, cmp.equal,
                          cmp.equal ? "" : format_string(cmp.witness)});
  };
  for (const NamedSupervisor& ns : arr.supervisors)
    if (!ns.harmless) check_owner(ns);
  for (const NamedSupervisor& ns : arr.coordinators) check_owner(ns);
  return rep;
}

}  // namespace desloc
