#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dfmp/clustering.hpp"
#include "dfmp/dataflow.hpp"
#include "dfmp/error.hpp"
#include "dfmp/metrics.hpp"
#include "dfmp/netlist.hpp"
#include "dfmp/pipeline.hpp"
#include "dfmp/synth.hpp"

namespace py = pybind11;
using namespace dfmp;

namespace {

PyObject* error_type = nullptr;  // kept alive for the process lifetime

// Rethrows library errors as dfmp.DfmpError with `code` set to the enum name.
template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    py::object exc = py::reinterpret_borrow<py::object>(error_type)(std::string(e.what()));
    exc.attr("code") = std::string(to_string(e.code()));
    PyErr_SetObject(error_type, exc.ptr());
    throw py::error_already_set();
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dataflow-aware macro placer";
  error_type = PyErr_NewException("dfmp.DfmpError", PyExc_RuntimeError, nullptr);
  m.attr("DfmpError") = py::handle(error_type);

  py::class_<Outline>(m, "Outline")
      .def_readonly("width", &Outline::width)
      .def_readonly("height", &Outline::height);

  py::class_<Netlist>(m, "Netlist")
      .def_readonly("outline", &Netlist::outline)
      .def_property_readonly("instance_count", [](const Netlist& n) { return n.instances.size(); })
      .def_property_readonly("net_count", [](const Netlist& n) { return n.nets.size(); })
      .def_property_readonly("macro_count", [](const Netlist& n) {
        int k = 0;
        for (std::size_t i = 0; i < n.instances.size(); ++i) k += n.kind_of(static_cast<int>(i)) == MasterKind::Macro;
        return k;
      })
      .def("to_json", [](const Netlist& n) { return serialize_netlist(n); });

  py::class_<ClusteredNetlist>(m, "ClusteredNetlist")
      .def_property_readonly("cluster_count", [](const ClusteredNetlist& c) { return c.clusters.size(); })
      .def_property_readonly("edges", [](const ClusteredNetlist& c) {
        std::vector<std::tuple<int, int, long long>> out;
        for (const auto& e : c.edges) out.emplace_back(e.src, e.dst, e.bit_width);
        return out;
      })
      .def("dump", [](const ClusteredNetlist& c) { return dump_clusters(c); });

  py::class_<DataflowGraph>(m, "DataflowGraph")
      .def_property_readonly("edge_count", [](const DataflowGraph& g) { return g.edges.size(); })
      .def("count", [](const DataflowGraph& g, const std::string& kind) {
        for (auto k : {EdgeKind::MMDirect, EdgeKind::MMIndirect, EdgeKind::MC, EdgeKind::CC, EdgeKind::MCC}) {
          if (to_string(k) == kind) return g.count(k);
        }
        throw py::value_error("unknown edge kind '" + kind + "'");
      })
      .def("export", [](const DataflowGraph& g) { return export_graph(g); });

  m.def("parse_netlist", [](const std::string& text) { return guarded([&] { return parse_netlist(text); }); },
        py::arg("text"));
  m.def("parse_verilog", [](const std::string& text, const std::string& geometry) {
        return guarded([&] { return parse_verilog_subset(text, geometry); });
      }, py::arg("text"), py::arg("geometry"));
  m.def("bundle", [](const Netlist& n) { return guarded([&] { return bundle_buses(n); }); }, py::arg("netlist"));

  m.def("cluster", [](const Netlist& n, int min_cells, int max_cells, int min_macros, int max_macros) {
        return guarded([&] {
          return compute_cluster_edges(n, build_clusters(n, {min_cells, max_cells, min_macros, max_macros}));
        });
      }, py::arg("netlist"), py::arg("min_cells") = 50, py::arg("max_cells") = 500, py::arg("min_macros") = 1,
      py::arg("max_macros") = 16);

  m.def("extract", [](const ClusteredNetlist& c, const Netlist& n, double k, int fanout_limit,
                      std::vector<std::string> name_filters) {
        return guarded([&] { return build_dataflow_graph(c, n, {k, fanout_limit, std::move(name_filters)}); });
      }, py::arg("clustered"), py::arg("netlist"), py::arg("k") = 1.0, py::arg("fanout_limit") = 32,
      py::arg("name_filters") = ExtractionOptions{}.name_filters);

  m.def("hpwl", [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<Point> p;
        for (const auto& [x, y] : pts) p.push_back({x, y});
        return guarded([&] { return hpwl(p); });
      }, py::arg("points"));

  m.def("generate", [](int macros, int modules, int cells_per_module, int macro_bus, int chain_bus,
                       int macro_link, int io_bus, double utilization, std::uint64_t seed) {
        SynthOptions o;
        o.macros = macros;
        o.modules = modules;
        o.cells_per_module = cells_per_module;
        o.macro_bus = macro_bus;
        o.chain_bus = chain_bus;
        o.macro_link = macro_link;
        o.io_bus = io_bus;
        o.utilization = utilization;
        return guarded([&] { return generate_synthetic(o, seed); });
      }, py::arg("macros") = 3, py::arg("modules") = 3, py::arg("cells_per_module") = 60, py::arg("macro_bus") = 32,
      py::arg("chain_bus") = 8, py::arg("macro_link") = 2, py::arg("io_bus") = 8, py::arg("utilization") = 0.45,
      py::arg("seed") = 1);

  // Runs the pipeline from a config file; returns the report and placement.
  m.def("run", [](const std::filesystem::path& config, const std::string& stage, py::object output_dir,
                  py::object seed) {
        return guarded([&] {
          PipelineConfig c = load_config(config);
          if (!output_dir.is_none()) c.output_dir = output_dir.cast<std::filesystem::path>();
          if (!seed.is_none()) c.seed = seed.cast<std::uint64_t>();
          check_config(c);
          const PipelineResult r = run_pipeline(c, parse_stage(stage));
          py::dict out;
          out["stage"] = std::string(to_string(r.reached));
          out["report"] = r.reached == Stage::Report ? py::object(py::str(r.report.to_json())) : py::none();
          const bool placed = static_cast<int>(r.reached) >= static_cast<int>(Stage::Gp);
          out["placement"] = placed ? py::object(py::str(format_placement(r.floorplan, r.clustered))) : py::none();
          std::vector<std::string> files;
          for (const auto& p : r.written) files.push_back(p.string());
          out["written"] = files;
          return out;
        });
      }, py::arg("config"), py::arg("stage") = "report", py::arg("output_dir") = py::none(),
      py::arg("seed") = py::none());
}
