"""Dataflow-aware macro placer."""

from ._core import (
    ClusteredNetlist,
    DataflowGraph,
    DfmpError,
    Netlist,
    Outline,
    bundle,
    cluster,
    extract,
    generate,
    hpwl,
    parse_netlist,
    parse_verilog,
    run,
)

__all__ = [
    "ClusteredNetlist",
    "DataflowGraph",
    "DfmpError",
    "Netlist",
    "Outline",
    "bundle",
    "cluster",
    "extract",
    "generate",
    "hpwl",
    "parse_netlist",
    "parse_verilog",
    "run",
]
