#include "desloc/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace desloc {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw Error(origin + ": " + what);
}

void require_keys(const ordered_json& obj, const std::string& origin,
                  const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
  for (const std::string& k : required)
    if (!obj.contains(k)) fail(origin, where + ": missing field '" + k + "'");
  for (const auto& [k, v] : obj.items()) {
    bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                 std::find(optional.begin(), optional.end(), k) != optional.end();
    if (!known) fail(origin, where + ": unknown field '" + k + "'");
  }
}

int get_int(const ordered_json& v, const std::string& origin, const std::string& field) {
  if (!v.is_number_integer())
    fail(origin, "field '" + field + "' must be an integer");
  return v.get<int>();
}

bool get_bool(const ordered_json& v, const std::string& origin, const std::string& field) {
  if (!v.is_boolean()) fail(origin, "field '" + field + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const ordered_json& v, const std::string& origin,
                       const std::string& field) {
  if (!v.is_string()) fail(origin, "field '" + field + "' must be a string");
  return v.get<std::string>();
}

ordered_json parse(const std::string& text, const std::string& origin) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    fail(origin, std::string("JSON parse error: ") + e.what());
  }
}

}  // namespace

/* ----- automata ----- */

std::string save_automaton(const Generator& g) {
  ordered_json doc;
  doc["name"] = g.name;
  doc["states"] = g.state_count;
  doc["initial"] = g.initial;
  doc["marker"] = g.marker;
  ordered_json events = ordered_json::array();
  for (const auto& [id, info] : g.events.entries()) {
    ordered_json e;
    e["id"] = id;
    e["controllable"] = info.controllable;
    e["observable"] = info.observable;
    events.push_back(std::move(e));
  }
  doc["events"] = std::move(events);
  ordered_json transitions = ordered_json::array();
  for (const auto& [key, tgt] : g.delta)
    transitions.push_back(ordered_json::array({key.first, key.second, tgt}));
  doc["transitions"] = std::move(transitions);
  if (!g.annotations.empty()) doc["annotations"] = g.annotations;
  return doc.dump(2) + "\n";
}

Generator load_automaton(const std::string& text, const std::string& origin) {
  ordered_json doc = parse(text, origin);
  if (!doc.is_object()) fail(origin, "document must be a JSON object");
  require_keys(doc, origin, "automaton",
               {"name", "states", "initial", "marker", "events", "transitions"},
               {"annotations"});
  Generator g;
  g.name = get_string(doc["name"], origin, "name");
  g.state_count = get_int(doc["states"], origin, "states");
  g.initial = get_int(doc["initial"], origin, "initial");
  if (!doc["marker"].is_array()) fail(origin, "field 'marker' must be an array");
  for (const auto& m : doc["marker"])
    g.marker.push_back(get_int(m, origin, "marker"));
  std::sort(g.marker.begin(), g.marker.end());
  g.marker.erase(std::unique(g.marker.begin(), g.marker.end()), g.marker.end());
  if (!doc["events"].is_array()) fail(origin, "field 'events' must be an array");
  for (const auto& e : doc["events"]) {
    if (!e.is_object()) fail(origin, "events entries must be objects");
    require_keys(e, origin, "event", {"id", "controllable", "observable"}, {});
    EventId id = get_int(e["id"], origin, "events.id");
    if (id < 0) fail(origin, "event id " + std::to_string(id) + " is negative");
    EventInfo info;
    info.controllable = get_bool(e["controllable"], origin, "events.controllable");
    info.observable = get_bool(e["observable"], origin, "events.observable");
    try {
      g.events.add(id, info);
    } catch (const Error& err) {
      fail(origin, err.what());
    }
  }
  if (!doc["transitions"].is_array())
    fail(origin, "field 'transitions' must be an array");
  for (const auto& t : doc["transitions"]) {
    if (!t.is_array() || t.size() != 3)
      fail(origin, "transitions entries must be [source, event, target] triples");
    try {
      g.add_transition(get_int(t[0], origin, "transitions.source"),
                       get_int(t[1], origin, "transitions.event"),
                       get_int(t[2], origin, "transitions.target"));
    } catch (const Error& err) {
      fail(origin, err.what());
    }
  }
  if (doc.contains("annotations")) {
    if (!doc["annotations"].is_array())
      fail(origin, "field 'annotations' must be an array");
    for (const auto& a : doc["annotations"])
      g.annotations.push_back(get_string(a, origin, "annotations"));
  }
  try {
    g.validate();
  } catch (const Error& err) {
    fail(origin, err.what());
  }
  return g;
}

Generator load_automaton_file(const std::string& path) {
  return load_automaton(read_text_file(path), path);
}

void save_automaton_file(const Generator& g, const std::string& path) {
  write_text_file(path, save_automaton(g));
}

/* ----- manifests ----- */

std::string save_manifest(const PipelineManifest& m) {
  ordered_json doc;
  doc["plants"] = m.plant_paths;
  doc["specs"] = m.spec_paths;
  doc["unobservable"] = std::vector<EventId>(m.unobservable.begin(), m.unobservable.end());
  ordered_json groups = ordered_json::array();
  for (const SubsystemGroup& grp : m.groups) {
    ordered_json g;
    g["name"] = grp.name;
    g["members"] = grp.members;
    groups.push_back(std::move(g));
  }
  doc["groups"] = std::move(groups);
  doc["between"] = m.between;
  if (m.abstraction_seed) doc["abstraction_seed"] = *m.abstraction_seed;
  ordered_json flags;
  flags["harmless_removal"] = m.flags.harmless_removal;
  flags["depth_product"] = m.flags.depth_product;
  flags["depth_oracle"] = m.flags.depth_oracle;
  flags["depth_verify"] = m.flags.depth_verify;
  flags["state_budget"] = m.flags.state_budget;
  doc["flags"] = std::move(flags);
  doc["out"] = m.out_dir;
  return doc.dump(2) + "\n";
}

PipelineManifest load_manifest_file(const std::string& path) {
  const std::string origin = path;
  ordered_json doc = parse(read_text_file(path), origin);
  if (!doc.is_object()) fail(origin, "document must be a JSON object");
  require_keys(doc, origin, "manifest",
               {"plants", "specs", "unobservable", "groups", "between", "out"},
               {"abstraction_seed", "flags"});
  PipelineManifest m;
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };
  auto read_paths = [&](const char* field, std::vector<std::string>& out) {
    if (!doc[field].is_array())
      fail(origin, std::string("field '") + field + "' must be an array");
    for (const auto& p : doc[field]) {
      std::string resolved = resolve(get_string(p, origin, field));
      if (!std::filesystem::exists(resolved))
        fail(origin, std::string(field) + " path does not resolve: " + resolved);
      out.push_back(resolved);
    }
  };
  read_paths("plants", m.plant_paths);
  read_paths("specs", m.spec_paths);
  if (!doc["unobservable"].is_array())
    fail(origin, "field 'unobservable' must be an array");
  for (const auto& e : doc["unobservable"])
    m.unobservable.insert(get_int(e, origin, "unobservable"));
  if (!doc["groups"].is_array()) fail(origin, "field 'groups' must be an array");
  for (const auto& grp : doc["groups"]) {
    if (!grp.is_object()) fail(origin, "groups entries must be objects");
    require_keys(grp, origin, "group", {"name", "members"}, {});
    SubsystemGroup g;
    g.name = get_string(grp["name"], origin, "groups.name");
    if (!grp["members"].is_array())
      fail(origin, "field 'groups.members' must be an array");
    for (const auto& mem : grp["members"])
      g.members.push_back(get_string(mem, origin, "groups.members"));
    m.groups.push_back(std::move(g));
  }
  if (!doc["between"].is_array()) fail(origin, "field 'between' must be an array");
  for (const auto& b : doc["between"])
    m.between.push_back(get_string(b, origin, "between"));
  if (doc.contains("abstraction_seed")) {
    if (!doc["abstraction_seed"].is_array())
      fail(origin, "field 'abstraction_seed' must be an array");
    std::vector<EventId> seed;
    for (const auto& e : doc["abstraction_seed"])
      seed.push_back(get_int(e, origin, "abstraction_seed"));
    m.abstraction_seed = std::move(seed);
  }
  if (doc.contains("flags")) {
    const ordered_json& flags = doc["flags"];
    if (!flags.is_object()) fail(origin, "field 'flags' must be an object");
    require_keys(flags, origin, "flags", {},
                 {"harmless_removal", "depth_product", "depth_oracle",
                  "depth_verify", "state_budget"});
    if (flags.contains("harmless_removal"))
      m.flags.harmless_removal = get_bool(flags["harmless_removal"], origin, "flags.harmless_removal");
    if (flags.contains("depth_product"))
      m.flags.depth_product = get_int(flags["depth_product"], origin, "flags.depth_product");
    if (flags.contains("depth_oracle"))
      m.flags.depth_oracle = get_int(flags["depth_oracle"], origin, "flags.depth_oracle");
    if (flags.contains("depth_verify"))
      m.flags.depth_verify = get_int(flags["depth_verify"], origin, "flags.depth_verify");
    if (flags.contains("state_budget")) {
      if (!flags["state_budget"].is_number_integer())
        fail(origin, "field 'flags.state_budget' must be an integer");
      m.flags.state_budget = flags["state_budget"].get<long long>();
    }
  }
  m.out_dir = resolve(get_string(doc["out"], origin, "out"));
  return m;
}

void save_manifest_file(const PipelineManifest& m, const std::string& path) {
  write_text_file(path, save_manifest(m));
}

/* ----- reports ----- */

std::string save_report(const std::vector<StageReport>& stages) {
  ordered_json doc = ordered_json::array();
  for (const StageReport& s : stages) {
    ordered_json entry;
    entry["stage"] = s.stage;
    entry["artifact"] = s.artifact;
    entry["states"] = s.states;
    ordered_json checks = ordered_json::array();
    for (const CheckEntry& c : s.checks) {
      ordered_json chk;
      chk["name"] = c.name;
      chk["pass"] = c.pass;
      chk["witness"] = c.witness;
      checks.push_back(std::move(chk));
    }
    entry["checks"] = std::move(checks);
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

/* ----- DOT ----- */

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string export_dot(const Generator& g) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(g.name.empty() ? "G" : g.name) << "\" {\n";
  if (!g.empty()) {
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle];\n";
    os << "  __init [shape=point];\n";
    for (int s = 0; s < g.state_count; ++s) {
      os << "  s" << s << " [label=\"" << s;
      if (!g.annotations.empty() && !g.annotations[s].empty())
        os << "\\n" << dot_escape(g.annotations[s]);
      os << "\"";
      if (g.marked(s)) os << ", shape=doublecircle";
      os << "];\n";
    }
    os << "  __init -> s" << g.initial << ";\n";
    for (const auto& [key, tgt] : g.delta) {
      const EventInfo& info = g.events.at(key.second);
      os << "  s" << key.first << " -> s" << tgt << " [label=\"" << key.second << "\"";
      if (!info.observable) os << ", style=dashed";
      if (info.controllable) os << ", penwidth=2";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

/* ----- text files ----- */

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

}  // namespace desloc
