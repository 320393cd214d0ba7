#pragma once

#include "desloc/io.hpp"
#include "desloc/localization.hpp"
#include "desloc/observer.hpp"

namespace desloc {

/* A synthesized supervisor (or coordinator) together with the plant it was
   synthesized against. `base` prefixes the names of its local controllers. */
struct NamedSupervisor {
  std::string name;                    /* e.g. "Z1SUP", "CO1" */
  std::string base;                    /* e.g. "Z1", "CO1" */
  POSupervisor sup;
  Generator plant;                     /* decentralized plant or subsystem */
  std::vector<std::string> components; /* plant component names */
  bool harmless = false; /* proved identity and removed from composition */
};

struct NamedController {
  std::string name;  /* e.g. "Z1_11" */
  std::string owner; /* supervisor or coordinator name */
  LocalController controller;
};

struct Subsystem {
  std::string name;        /* group name, e.g. "SUB1" */
  Generator behavior;      /* sync of member plants and supervisors */
  bool blocking = false;
  std::string coordinator; /* empty when the group needed none */
  Generator coordinated;   /* trim of behavior (with its coordinator, if any) */
};

struct HeterarchicalArray {
  std::vector<Generator> plants;
  std::vector<Generator> specs;
  ObservationMask mask;
  std::vector<NamedSupervisor> supervisors;
  std::vector<Subsystem> subsystems;
  std::vector<NamedSupervisor> coordinators;
  std::set<EventId> shared;          /* shared alphabet of the abstraction round */
  std::set<EventId> shared_extended; /* alphabet the abstractions project onto:
                                        the manifest's pinned seed, or the
                                        observer extension of `shared` */
  std::map<std::string, Generator> abstractions; /* QC_*: minimized projections */
  std::map<std::string, Generator> reduced;      /* *SIM: reduced supervisors */
  Generator top_product; /* product of the final coordination round's group */
  std::vector<NamedController> controllers;
  std::vector<std::pair<std::string, EventId>> suppressed; /* never-binding */
  std::vector<StageReport> report;
};

struct DecentralizedPlant {
  Generator plant;
  std::vector<std::string> components;
};

/* Sync of every plant whose alphabet meets the spec's; errors when none do. */
DecentralizedPlant build_decentralized_plant(
    const Generator& spec, const std::vector<const Generator*>& plants);

/* One partial-observation supervisor per spec, each against its own
   decentralized plant. */
std::vector<NamedSupervisor> synthesize_decentralized(
    const std::vector<const Generator*>& plants,
    const std::vector<const Generator*>& specs, const ObservationMask& mask);

/* Sync of the listed parts; a subsystem is its plants plus its supervisors. */
Generator compose_subsystem(const std::vector<const Generator*>& parts);

/* Coordinator against a blocking subsystem: the ambient is the subsystem's
   own trim-marked behavior, so the result removes exactly the blocking
   strings that controllability and observability allow. A nonblocking input
   yields the identity supervisor (no disablements). */
POSupervisor synthesize_coordinator(const Generator& sub,
                                    const ObservationMask& mask);

/* The whole synthesis: decentralized supervisors, grouping and coordination,
   abstraction with reduced in-between supervisors, top-level coordination,
   and localization of every supervisor and coordinator. Pure in-memory
   variant; plants/specs must match the manifest's lists by position. */
HeterarchicalArray run_pipeline_loaded(const PipelineManifest& manifest,
                                       std::vector<Generator> plants,
                                       std::vector<Generator> specs);

/* Loads the manifest's files, runs the pipeline, and writes every artifact
   (canonical JSON plus DOT) and the run report under manifest.out_dir when
   it is nonempty. */
HeterarchicalArray run_pipeline(const PipelineManifest& manifest);

void write_artifacts(const HeterarchicalArray& array, const std::string& out_dir);

/* Global checks: safety of the localized system against the specs,
   nonblocking, per-supervisor control equivalence, and equality of the
   localized and supervised systems. Exact when the products fit the state
   budget, otherwise compared up to flags.depth_verify with the mode
   recorded. */
struct GlobalVerifyReport {
  bool safe = true;
  bool nonblocking = true;
  bool per_supervisor = true;
  bool system_equal = true;
  std::string mode; /* "exact" or "depth-N" */
  std::vector<CheckEntry> checks;
  bool ok() const { return safe && nonblocking && per_supervisor && system_equal; }
};

GlobalVerifyReport verify_global_equivalence(const HeterarchicalArray& array,
                                             const PipelineManifest& manifest);

}  // namespace desloc
