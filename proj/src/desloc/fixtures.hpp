#pragma once

#include "desloc/io.hpp"

namespace desloc::fixtures {

/* Five guided vehicles on fixed loop routes through four shared track zones,
   ferrying parts between two input stations, three workstations, and a
   completed-parts station. Odd events are vehicle departures (controllable);
   one event per vehicle is unobservable. */
std::vector<Generator> agv_plants();

/* Mutual exclusion for the four zones, one-slot buffer protection for the
   workstation transfer points, and alternating input-station loading. */
std::vector<Generator> agv_specs();

/* Grouping, in-between supervisors, and the unobservable event set for the
   guided-vehicle system; file paths are left empty for in-memory runs. */
PipelineManifest agv_manifest();

/* Writes the plant and specification files plus a manifest wired to them. */
void write_agv(const std::string& dir);

}  // namespace desloc::fixtures
