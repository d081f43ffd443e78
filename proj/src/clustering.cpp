#include "dfmp/clustering.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "dfmp/error.hpp"

namespace dfmp {

std::string_view to_string(ClusterKind kind) {
  return kind == ClusterKind::Macro ? "macro_cluster" : "cell_cluster";
}

namespace {

std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) {
    if (!out.empty()) out += '/';
    out += p;
  }
  return out;
}

struct Draft {
  ClusterKind kind;
  std::vector<std::string> root;
  std::vector<int> members;  // canonical order: hierarchy path, then name
};

void check_thresholds(const ClusterThresholds& t) {
  if (t.min_cells <= 0 || t.max_cells <= 0 || t.min_macros <= 0 || t.max_macros <= 0) {
    throw Error(ErrorCode::ThresholdConflict, "cluster thresholds must be positive");
  }
  if (t.min_cells >= t.max_cells) {
    throw Error(ErrorCode::ThresholdConflict,
                fmt::format("min_cells ({}) must be below max_cells ({})", t.min_cells, t.max_cells));
  }
  if (t.min_macros >= t.max_macros) {
    throw Error(ErrorCode::ThresholdConflict,
                fmt::format("min_macros ({}) must be below max_macros ({})", t.min_macros, t.max_macros));
  }
}

}  // namespace

ClusteredNetlist build_clusters(const Netlist& nl, const ClusterThresholds& t) {
  check_thresholds(t);

  auto canonical_less = [&](int a, int b) {
    const auto& ia = nl.instances[a];
    const auto& ib = nl.instances[b];
    return std::tie(ia.hierarchy_path, ia.name) < std::tie(ib.hierarchy_path, ib.name);
  };

  // Seeds: hierarchy leaf x kind.
  std::map<std::pair<std::vector<std::string>, ClusterKind>, std::vector<int>> seeds;
  std::map<Side, std::vector<int>> io;
  for (const auto& inst : nl.instances) {
    const auto kind = nl.masters[inst.master].kind;
    if (kind == MasterKind::IoPad) {
      io[*inst.io_side].push_back(inst.id);
    } else {
      const auto ck = kind == MasterKind::Macro ? ClusterKind::Macro : ClusterKind::Cell;
      seeds[{inst.hierarchy_path, ck}].push_back(inst.id);
    }
  }

  std::vector<Draft> drafts;
  // (parent path, kind) -> undersized seeds waiting to be merged
  std::map<std::pair<std::vector<std::string>, ClusterKind>, std::vector<Draft>> small;

  for (auto& [key, members] : seeds) {
    std::sort(members.begin(), members.end(), canonical_less);
    const auto& [path, kind] = key;
    const int max = kind == ClusterKind::Cell ? t.max_cells : t.max_macros;
    const int min = kind == ClusterKind::Cell ? t.min_cells : t.min_macros;
    const int n = static_cast<int>(members.size());
    if (n > max) {
      const int parts = (n + max - 1) / max;
      int begin = 0;
      for (int p = 0; p < parts; ++p) {
        const int size = n / parts + (p < n % parts ? 1 : 0);
        drafts.push_back({kind, path, {members.begin() + begin, members.begin() + begin + size}});
        begin += size;
      }
    } else if (n < min) {
      auto parent = path;
      parent.pop_back();
      small[{parent, kind}].push_back({kind, path, members});
    } else {
      drafts.push_back({kind, path, members});
    }
  }

  // First-fit decreasing: largest seed opens a cluster, later seeds join the
  // first open cluster they fit in without exceeding max.
  for (auto& [key, group] : small) {
    const auto& [parent, kind] = key;
    const std::size_t max = static_cast<std::size_t>(kind == ClusterKind::Cell ? t.max_cells : t.max_macros);
    std::stable_sort(group.begin(), group.end(),
                     [](const Draft& a, const Draft& b) { return a.members.size() > b.members.size(); });
    std::vector<std::vector<const Draft*>> bins;
    std::vector<std::size_t> fill;
    for (const auto& d : group) {
      std::size_t b = 0;
      while (b < bins.size() && fill[b] + d.members.size() > max) ++b;
      if (b == bins.size()) {
        bins.emplace_back();
        fill.push_back(0);
      }
      bins[b].push_back(&d);
      fill[b] += d.members.size();
    }
    for (const auto& bin : bins) {
      if (bin.size() == 1) {
        drafts.push_back(*bin.front());
        continue;
      }
      Draft merged{kind, parent, {}};
      for (const auto* d : bin) merged.members.insert(merged.members.end(), d->members.begin(), d->members.end());
      std::sort(merged.members.begin(), merged.members.end(), canonical_less);
      drafts.push_back(std::move(merged));
    }
  }

  std::sort(drafts.begin(), drafts.end(), [&](const Draft& a, const Draft& b) {
    if (a.root != b.root) return a.root < b.root;
    if (a.kind != b.kind) return a.kind < b.kind;
    return canonical_less(a.members.front(), b.members.front());
  });

  ClusteredNetlist cn;
  cn.instance_to_cluster.assign(nl.instances.size(), -1);
  std::map<std::string, int> name_uses;
  auto add = [&](ClusterKind kind, std::vector<std::string> root, std::vector<int> members,
                 std::optional<Side> side) {
    Cluster c;
    c.id = static_cast<int>(cn.clusters.size());
    c.kind = kind;
    c.hierarchy_root = std::move(root);
    c.io_side = side;
    std::sort(members.begin(), members.end());
    c.members = std::move(members);
    c.instance_count = static_cast<int>(c.members.size());
    for (int m : c.members) {
      c.area += nl.master_of(m).area();
      cn.instance_to_cluster[m] = c.id;
    }
    if (side) {
      c.name = fmt::format("io_{}", to_string(*side));
    } else {
      auto base = fmt::format("{}/{}", join_path(c.hierarchy_root), kind == ClusterKind::Macro ? "macros" : "cells");
      const int uses = name_uses[base]++;
      c.name = uses == 0 ? base : fmt::format("{}.{}", base, uses);
    }
    cn.clusters.push_back(std::move(c));
  };

  for (auto& d : drafts) add(d.kind, std::move(d.root), std::move(d.members), std::nullopt);
  for (Side side : {Side::N, Side::S, Side::E, Side::W}) {
    auto it = io.find(side);
    if (it == io.end()) continue;
    add(ClusterKind::Macro, {}, it->second, side);
  }
  return cn;
}

ClusteredNetlist compute_cluster_edges(const Netlist& nl, ClusteredNetlist cn) {
  std::map<std::pair<int, int>, long long> weights;
  std::set<int> sink_clusters;
  for (const auto& net : nl.nets) {
    const int src = cn.instance_to_cluster[net.driver.instance];
    sink_clusters.clear();
    for (const auto& s : net.sinks) sink_clusters.insert(cn.instance_to_cluster[s.instance]);
    for (int dst : sink_clusters) {
      if (dst != src) weights[{src, dst}] += net.bit_width;
    }
  }
  cn.edges.clear();
  cn.edges.reserve(weights.size());
  for (const auto& [key, w] : weights) cn.edges.push_back({key.first, key.second, w});
  return cn;
}

std::string dump_clusters(const ClusteredNetlist& cn) {
  std::string out;
  for (const auto& c : cn.clusters) {
    const auto root = join_path(c.hierarchy_root);
    out += fmt::format("{} {} {} {} {}\n", c.id, to_string(c.kind), c.instance_count, c.area,
                       c.is_io() ? c.name : (root.empty() ? "-" : root));
  }
  return out;
}

}  // namespace dfmp
