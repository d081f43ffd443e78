#include "dfmp/netlist.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dfmp/error.hpp"

namespace dfmp {

using json = nlohmann::json;

std::string_view to_string(MasterKind kind) {
  switch (kind) {
    case MasterKind::Macro: return "macro";
    case MasterKind::Cell: return "cell";
    case MasterKind::IoPad: return "io_pad";
  }
  return "cell";
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::N: return "N";
    case Side::S: return "S";
    case Side::E: return "E";
    case Side::W: return "W";
  }
  return "N";
}

MasterKind parse_master_kind(std::string_view text) {
  if (text == "macro") return MasterKind::Macro;
  if (text == "cell") return MasterKind::Cell;
  if (text == "io_pad") return MasterKind::IoPad;
  throw Error(ErrorCode::Syntax, fmt::format("unknown master kind '{}'", text));
}

Side parse_side(std::string_view text) {
  if (text == "N") return Side::N;
  if (text == "S") return Side::S;
  if (text == "E") return Side::E;
  if (text == "W") return Side::W;
  throw Error(ErrorCode::Syntax, fmt::format("unknown outline side '{}'", text));
}

const PinOffset* Master::find_pin(std::string_view pin) const {
  for (const auto& p : pin_offsets) {
    if (p.name == pin) return &p;
  }
  return nullptr;
}

Point Master::pin_center() const {
  if (pin_offsets.empty()) return {width / 2.0, height / 2.0};
  Point sum;
  for (const auto& p : pin_offsets) sum += Point{p.dx, p.dy};
  return sum * (1.0 / static_cast<double>(pin_offsets.size()));
}

void validate(const Netlist& nl) {
  if (!(nl.outline.width > 0.0) || !(nl.outline.height > 0.0)) {
    throw Error(ErrorCode::BadOutline,
                fmt::format("outline must be positive, got {} x {}", nl.outline.width,
                            nl.outline.height));
  }
  if (nl.instances.empty()) throw Error(ErrorCode::MissingInstances, "netlist has no instances");

  std::unordered_set<std::string> master_names;
  for (const auto& m : nl.masters) {
    if (!master_names.insert(m.name).second) {
      throw Error(ErrorCode::DuplicateName, fmt::format("duplicate master '{}'", m.name));
    }
    if (m.kind == MasterKind::IoPad) {
      if (m.width != 0.0 || m.height != 0.0) {
        throw Error(ErrorCode::BadMaster, fmt::format("io_pad master '{}' must have zero area", m.name));
      }
    } else if (!(m.width > 0.0) || !(m.height > 0.0)) {
      throw Error(ErrorCode::BadMaster, fmt::format("master '{}' needs positive size", m.name));
    }
    for (const auto& p : m.pin_offsets) {
      if (p.dx < 0.0 || p.dx > m.width || p.dy < 0.0 || p.dy > m.height) {
        throw Error(ErrorCode::BadMaster,
                    fmt::format("pin '{}' of master '{}' lies outside its footprint", p.name, m.name));
      }
    }
  }

  std::unordered_set<std::string> inst_names;
  for (std::size_t i = 0; i < nl.instances.size(); ++i) {
    const auto& inst = nl.instances[i];
    if (inst.id != static_cast<int>(i)) {
      throw Error(ErrorCode::Syntax, fmt::format("instance '{}' has non-dense id {}", inst.name, inst.id));
    }
    if (!inst_names.insert(inst.name).second) {
      throw Error(ErrorCode::DuplicateName, fmt::format("duplicate instance '{}'", inst.name));
    }
    if (inst.master < 0 || inst.master >= static_cast<int>(nl.masters.size())) {
      throw Error(ErrorCode::UnknownMaster, fmt::format("instance '{}' has no master", inst.name));
    }
    if (inst.hierarchy_path.empty()) {
      throw Error(ErrorCode::Syntax, fmt::format("instance '{}' has an empty hierarchy path", inst.name));
    }
    const bool is_io = nl.masters[inst.master].kind == MasterKind::IoPad;
    if (is_io != inst.io_side.has_value()) {
      throw Error(ErrorCode::Syntax,
                  fmt::format("instance '{}': io_side is required for io pads and only for them", inst.name));
    }
  }

  auto check_pin = [&](const Net& net, const PinRef& ref) {
    if (ref.instance < 0 || ref.instance >= static_cast<int>(nl.instances.size())) {
      throw Error(ErrorCode::DanglingPin, fmt::format("net '{}' references an unknown instance", net.base_name));
    }
    if (nl.master_of(ref.instance).find_pin(ref.pin) == nullptr) {
      throw Error(ErrorCode::DanglingPin,
                  fmt::format("net '{}' references unknown pin '{}' of '{}'", net.base_name, ref.pin,
                              nl.instances[ref.instance].name));
    }
  };
  for (std::size_t i = 0; i < nl.nets.size(); ++i) {
    const auto& net = nl.nets[i];
    if (net.id != static_cast<int>(i)) {
      throw Error(ErrorCode::Syntax, fmt::format("net '{}' has non-dense id {}", net.base_name, net.id));
    }
    if (net.bit_width < 1) {
      throw Error(ErrorCode::Syntax, fmt::format("net '{}' has bit_width < 1", net.base_name));
    }
    check_pin(net, net.driver);
    for (const auto& s : net.sinks) check_pin(net, s);
  }
}

namespace {

template <typename T>
T require(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::Syntax, fmt::format("{}: missing key '{}'", where, key));
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Syntax, fmt::format("{}: bad value for '{}': {}", where, key, e.what()));
  }
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::Syntax, fmt::format("{}: unknown key '{}'", where, key));
    }
  }
}

PinOffset parse_pin(const json& j, std::string_view where) {
  if (!j.is_object()) throw Error(ErrorCode::Syntax, fmt::format("{}: pin must be an object", where));
  reject_unknown_keys(j, {"name", "dx", "dy", "direction"}, where);
  PinOffset p;
  p.name = require<std::string>(j, "name", where);
  p.dx = require<double>(j, "dx", where);
  p.dy = require<double>(j, "dy", where);
  if (auto it = j.find("direction"); it != j.end()) {
    const auto dir = it->get<std::string>();
    if (dir != "input" && dir != "output") {
      throw Error(ErrorCode::Syntax, fmt::format("{}: direction must be input or output", where));
    }
    p.output = dir == "output";
  }
  return p;
}

}  // namespace

// Shared with the Verilog reader, which takes masters from a sidecar file.
std::vector<Master> parse_masters_json(const json& arr) {
  if (!arr.is_array()) throw Error(ErrorCode::Syntax, "'masters' must be an array");
  std::vector<Master> masters;
  for (const auto& jm : arr) {
    if (!jm.is_object()) throw Error(ErrorCode::Syntax, "master entries must be objects");
    reject_unknown_keys(jm, {"name", "width", "height", "kind", "pin_offsets"}, "master");
    Master m;
    m.name = require<std::string>(jm, "name", "master");
    const std::string where = "master '" + m.name + "'";
    m.width = require<double>(jm, "width", where);
    m.height = require<double>(jm, "height", where);
    m.kind = parse_master_kind(require<std::string>(jm, "kind", where));
    if (auto it = jm.find("pin_offsets"); it != jm.end()) {
      if (!it->is_array()) throw Error(ErrorCode::Syntax, where + ": pin_offsets must be an array");
      for (const auto& jp : *it) m.pin_offsets.push_back(parse_pin(jp, where));
    }
    masters.push_back(std::move(m));
  }
  return masters;
}

Outline parse_outline_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Syntax, "'outline' must be an object");
  reject_unknown_keys(j, {"width", "height"}, "outline");
  return {require<double>(j, "width", "outline"), require<double>(j, "height", "outline")};
}

Netlist parse_netlist(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Syntax, fmt::format("netlist is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw Error(ErrorCode::Syntax, "netlist document must be a JSON object");
  reject_unknown_keys(doc, {"outline", "masters", "instances", "nets"}, "netlist");
  for (const char* key : {"outline", "masters", "instances", "nets"}) {
    if (!doc.contains(key)) throw Error(ErrorCode::Syntax, fmt::format("netlist: missing key '{}'", key));
  }

  Netlist nl;
  nl.outline = parse_outline_json(doc["outline"]);
  nl.masters = parse_masters_json(doc["masters"]);

  std::unordered_map<std::string, int> master_index;
  for (std::size_t i = 0; i < nl.masters.size(); ++i) master_index.emplace(nl.masters[i].name, static_cast<int>(i));

  const auto& insts = doc["instances"];
  if (!insts.is_array()) throw Error(ErrorCode::Syntax, "'instances' must be an array");
  if (insts.empty()) throw Error(ErrorCode::MissingInstances, "netlist has no instances");
  std::unordered_map<std::string, int> inst_index;
  for (const auto& ji : insts) {
    if (!ji.is_object()) throw Error(ErrorCode::Syntax, "instance entries must be objects");
    reject_unknown_keys(ji, {"name", "master", "hierarchy_path", "io_side"}, "instance");
    Instance inst;
    inst.id = static_cast<int>(nl.instances.size());
    inst.name = require<std::string>(ji, "name", "instance");
    const std::string where = "instance '" + inst.name + "'";
    const auto master = require<std::string>(ji, "master", where);
    auto mit = master_index.find(master);
    if (mit == master_index.end()) {
      throw Error(ErrorCode::UnknownMaster, fmt::format("{}: unknown master '{}'", where, master));
    }
    inst.master = mit->second;
    inst.hierarchy_path = require<std::vector<std::string>>(ji, "hierarchy_path", where);
    if (auto it = ji.find("io_side"); it != ji.end()) inst.io_side = parse_side(it->get<std::string>());
    if (!inst_index.emplace(inst.name, inst.id).second) {
      throw Error(ErrorCode::DuplicateName, fmt::format("duplicate instance '{}'", inst.name));
    }
    nl.instances.push_back(std::move(inst));
  }

  const auto& nets = doc["nets"];
  if (!nets.is_array()) throw Error(ErrorCode::Syntax, "'nets' must be an array");
  auto parse_ref = [&](const json& jr, std::string_view net) {
    if (!jr.is_object()) throw Error(ErrorCode::Syntax, fmt::format("net '{}': pin refs must be objects", net));
    reject_unknown_keys(jr, {"instance", "pin"}, "pin ref");
    const auto name = require<std::string>(jr, "instance", net);
    auto it = inst_index.find(name);
    if (it == inst_index.end()) {
      throw Error(ErrorCode::DanglingPin, fmt::format("net '{}' references unknown instance '{}'", net, name));
    }
    return PinRef{it->second, require<std::string>(jr, "pin", net)};
  };
  for (const auto& jn : nets) {
    if (!jn.is_object()) throw Error(ErrorCode::Syntax, "net entries must be objects");
    reject_unknown_keys(jn, {"base_name", "driver", "sinks", "bit_width"}, "net");
    Net net;
    net.id = static_cast<int>(nl.nets.size());
    net.base_name = require<std::string>(jn, "base_name", "net");
    if (!jn.contains("driver")) throw Error(ErrorCode::Syntax, fmt::format("net '{}': missing driver", net.base_name));
    net.driver = parse_ref(jn["driver"], net.base_name);
    if (auto it = jn.find("sinks"); it != jn.end()) {
      if (!it->is_array()) throw Error(ErrorCode::Syntax, fmt::format("net '{}': sinks must be an array", net.base_name));
      for (const auto& js : *it) net.sinks.push_back(parse_ref(js, net.base_name));
    }
    if (auto it = jn.find("bit_width"); it != jn.end()) net.bit_width = it->get<int>();
    nl.nets.push_back(std::move(net));
  }

  validate(nl);
  return nl;
}

std::string serialize_netlist(const Netlist& nl) {
  json doc;
  doc["outline"] = {{"width", nl.outline.width}, {"height", nl.outline.height}};
  json masters = json::array();
  for (const auto& m : nl.masters) {
    json pins = json::array();
    for (const auto& p : m.pin_offsets) {
      json jp = {{"name", p.name}, {"dx", p.dx}, {"dy", p.dy}};
      if (p.output) jp["direction"] = "output";
      pins.push_back(std::move(jp));
    }
    masters.push_back({{"name", m.name},
                       {"width", m.width},
                       {"height", m.height},
                       {"kind", std::string(to_string(m.kind))},
                       {"pin_offsets", std::move(pins)}});
  }
  doc["masters"] = std::move(masters);
  json instances = json::array();
  for (const auto& inst : nl.instances) {
    json ji = {{"name", inst.name},
               {"master", nl.masters[inst.master].name},
               {"hierarchy_path", inst.hierarchy_path}};
    if (inst.io_side) ji["io_side"] = std::string(to_string(*inst.io_side));
    instances.push_back(std::move(ji));
  }
  doc["instances"] = std::move(instances);
  json nets = json::array();
  auto ref = [&](const PinRef& r) { return json{{"instance", nl.instances[r.instance].name}, {"pin", r.pin}}; };
  for (const auto& net : nl.nets) {
    json sinks = json::array();
    for (const auto& s : net.sinks) sinks.push_back(ref(s));
    nets.push_back({{"base_name", net.base_name},
                    {"driver", ref(net.driver)},
                    {"sinks", std::move(sinks)},
                    {"bit_width", net.bit_width}});
  }
  doc["nets"] = std::move(nets);
  return doc.dump(1) + "\n";
}

std::optional<std::pair<std::string, int>> split_bit_index(std::string_view name) {
  if (name.size() < 4 || name.back() != ']') return std::nullopt;
  const auto open = name.rfind('[');
  if (open == std::string_view::npos || open == 0) return std::nullopt;
  const auto digits = name.substr(open + 1, name.size() - open - 2);
  int index = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || index < 0) {
    return std::nullopt;
  }
  return std::make_pair(std::string(name.substr(0, open)), index);
}

Netlist bundle_buses(const Netlist& nl) {
  struct Key {
    std::string base;
    int driver;
    std::vector<int> sinks;  // sorted multiset of sink instances
    auto operator<=>(const Key&) const = default;
  };

  Netlist out;
  out.outline = nl.outline;
  out.masters = nl.masters;
  out.instances = nl.instances;

  // Groups are emitted in order of their first member's appearance; the member
  // with the lowest bit index provides the representative pins.
  std::map<Key, std::size_t> group_of;
  struct Group {
    std::string base;
    const Net* representative = nullptr;
    int lowest_index = 0;
    int width = 0;
  };
  std::vector<Group> groups;

  for (const auto& net : nl.nets) {
    auto split = split_bit_index(net.base_name);
    if (!split) {
      groups.push_back({net.base_name, &net, 0, net.bit_width});
      continue;
    }
    Key key{split->first, net.driver.instance, {}};
    key.sinks.reserve(net.sinks.size());
    for (const auto& s : net.sinks) key.sinks.push_back(s.instance);
    std::sort(key.sinks.begin(), key.sinks.end());
    auto [it, inserted] = group_of.try_emplace(std::move(key), groups.size());
    if (inserted) {
      groups.push_back({split->first, &net, split->second, net.bit_width});
    } else {
      auto& g = groups[it->second];
      g.width += net.bit_width;
      if (split->second < g.lowest_index) {
        g.lowest_index = split->second;
        g.representative = &net;
      }
    }
  }

  out.nets.reserve(groups.size());
  for (const auto& g : groups) {
    Net merged = *g.representative;
    merged.id = static_cast<int>(out.nets.size());
    merged.base_name = g.base;
    merged.bit_width = g.width;
    out.nets.push_back(std::move(merged));
  }
  return out;
}

}  // namespace dfmp
