#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "dfmp/error.hpp"
#include "dfmp/netlist.hpp"
#include "dfmp/synth.hpp"
#include "helpers.hpp"

using namespace dfmp;

namespace {

const char* kMinimal = R"({
  "outline": {"width": 100, "height": 80},
  "masters": [
    {"name": "RAM", "width": 20, "height": 10, "kind": "macro",
     "pin_offsets": [{"name": "Q", "dx": 1, "dy": 2, "direction": "output"}]},
    {"name": "INV", "width": 1, "height": 1, "kind": "cell",
     "pin_offsets": [{"name": "A", "dx": 0, "dy": 0.5}]}
  ],
  "instances": [
    {"name": "u_ram", "master": "RAM", "hierarchy_path": ["top"]},
    {"name": "u_inv", "master": "INV", "hierarchy_path": ["top", "core"]}
  ],
  "nets": [
    {"base_name": "q", "driver": {"instance": "u_ram", "pin": "Q"},
     "sinks": [{"instance": "u_inv", "pin": "A"}]}
  ]
})";

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Config;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("parse_netlist reads a minimal document") {
  const Netlist nl = parse_netlist(kMinimal);
  CHECK(nl.instances.size() == 2);
  CHECK(nl.nets.size() == 1);
  CHECK(nl.instances[0].id == 0);
  CHECK(nl.instances[1].id == 1);
  CHECK(nl.instances[1].hierarchy_path == std::vector<std::string>{"top", "core"});
  CHECK(nl.nets[0].bit_width == 1);
  CHECK(nl.nets[0].driver.instance == 0);
  CHECK(nl.nets[0].sinks[0].instance == 1);
  CHECK(nl.outline.width == 100.0);
}

TEST_CASE("parse_netlist rejects broken documents") {
  const std::string doc = kMinimal;
  CHECK(code_of([] {
          parse_netlist(R"({"outline": {"width": 1, "height": 1}, "masters": [], "instances": [], "nets": []})");
        }) == ErrorCode::MissingInstances);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("instance": "u_inv")", R"("instance": "u99")")); }) ==
        ErrorCode::DanglingPin);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("pin": "A")", R"("pin": "B")")); }) == ErrorCode::DanglingPin);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("name": "u_inv")", R"("name": "u_ram")")); }) ==
        ErrorCode::DuplicateName);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("width": 100)", R"("width": 0)")); }) == ErrorCode::BadOutline);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("master": "INV")", R"("master": "NAND")")); }) ==
        ErrorCode::UnknownMaster);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("dx": 1)", R"("dx": 21)")); }) == ErrorCode::BadMaster);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("hierarchy_path": ["top"])", R"("hierarchy_path": [])")); }) ==
        ErrorCode::Syntax);
  CHECK(code_of([&] { parse_netlist("{ not json"); }) == ErrorCode::Syntax);
  CHECK(code_of([&] { parse_netlist(replace(doc, R"("nets": [)", R"("extra": 1, "nets": [)")); }) ==
        ErrorCode::Syntax);
}

TEST_CASE("serialize then parse is the identity") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const Netlist nl = testing::random_netlist(rng, 1 + rng.below(4), 1 + rng.below(5), 20);
    const Netlist again = parse_netlist(serialize_netlist(nl));
    CHECK(again == nl);
    CHECK(serialize_netlist(again) == serialize_netlist(nl));
  }
  SynthOptions o;
  const Netlist syn = generate_synthetic(o, 3);
  CHECK(parse_netlist(serialize_netlist(syn)) == syn);
}

TEST_CASE("instance ids are dense and in document order") {
  Rng rng(11);
  const Netlist nl = parse_netlist(serialize_netlist(testing::random_netlist(rng, 3, 4, 10)));
  for (std::size_t i = 0; i < nl.instances.size(); ++i) CHECK(nl.instances[i].id == static_cast<int>(i));
}

TEST_CASE("split_bit_index") {
  CHECK(split_bit_index("data[12]") == std::pair<std::string, int>{"data", 12});
  CHECK(split_bit_index("a[0]") == std::pair<std::string, int>{"a", 0});
  CHECK_FALSE(split_bit_index("rst"));
  CHECK_FALSE(split_bit_index("x[]"));
  CHECK_FALSE(split_bit_index("x[1]y"));
}

TEST_CASE("bundle_buses merges indexed nets with equal endpoints") {
  testing::Builder b;
  const int m = b.macro("m", {"top"});
  const int c = b.cell("c", {"top"});
  const int d = b.cell("d", {"top"});
  for (int i = 0; i < 8; ++i) b.net("data[" + std::to_string(i) + "]", m, {c});
  b.net("rst", c, {m});
  b.net("sel[0]", m, {c});
  b.net("sel[2]", m, {c});
  b.net("sel[1]", m, {d});  // different sink: separate bus
  const Netlist out = bundle_buses(b.nl);
  REQUIRE(out.nets.size() == 4);
  CHECK(out.nets[0].base_name == "data");
  CHECK(out.nets[0].bit_width == 8);
  CHECK(out.nets[1].base_name == "rst");
  CHECK(out.nets[1].bit_width == 1);
  CHECK(out.nets[2].base_name == "sel");
  CHECK(out.nets[2].bit_width == 2);  // gap in indices does not split
  CHECK(out.nets[3].bit_width == 1);
  for (std::size_t i = 0; i < out.nets.size(); ++i) CHECK(out.nets[i].id == static_cast<int>(i));
}

TEST_CASE("bundle_buses conserves scalar connectivity") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    testing::Builder b;
    std::vector<int> inst;
    for (int i = 0; i < 3; ++i) inst.push_back(b.macro("m" + std::to_string(i), {"top"}));
    for (int i = 0; i < 5; ++i) inst.push_back(b.cell("c" + std::to_string(i), {"top"}));
    const int nets = 1 + rng.below(60);
    for (int k = 0; k < nets; ++k) {
      const int drv = inst[rng.below(8)];
      int snk = inst[rng.below(8)];
      if (snk == drv) snk = inst[(rng.below(7) + 1 + drv) % 8];
      const std::string base = rng.below(4) == 0 ? "s" + std::to_string(k) : std::string(1, "abc"[rng.below(3)]);
      b.net(base + (base.size() == 1 ? "[" + std::to_string(rng.below(10)) + "]" : ""), drv, {snk});
    }
    const Netlist out = bundle_buses(b.nl);
    long long bits = 0;
    for (const auto& n : out.nets) bits += n.bit_width;
    CHECK(bits == static_cast<long long>(b.nl.nets.size()));
    CHECK(out.nets.size() <= b.nl.nets.size());
    validate(out);
  }
}

TEST_CASE("verilog: one module with two leaf masters and a wire") {
  const char* geometry = R"({
    "outline": {"width": 50, "height": 50},
    "masters": [
      {"name": "BUF", "width": 1, "height": 1, "kind": "cell",
       "pin_offsets": [{"name": "A", "dx": 0, "dy": 0.5}, {"name": "Y", "dx": 1, "dy": 0.5, "direction": "output"}]}
    ]
  })";
  const char* src = R"(
    // two buffers in a row
    module top();
      wire n1;
      BUF u0 (.A(), .Y(n1));
      BUF u1 (.A(n1), .Y());
    endmodule
  )";
  const Netlist nl = parse_verilog_subset(src, geometry);
  CHECK(nl.instances.size() == 2);
  REQUIRE(nl.nets.size() == 1);
  CHECK(nl.nets[0].driver.pin == "Y");
  CHECK(nl.instances[nl.nets[0].driver.instance].name == "u0");
  CHECK(nl.instances[0].hierarchy_path == std::vector<std::string>{"top"});
}

TEST_CASE("verilog: hierarchy, buses and top-level ports") {
  const char* geometry = R"({
    "outline": {"width": 50, "height": 50},
    "masters": [
      {"name": "DFF", "width": 2, "height": 1, "kind": "cell",
       "pin_offsets": [{"name": "D", "dx": 0, "dy": 0.5}, {"name": "Q", "dx": 2, "dy": 0.5, "direction": "output"}]},
      {"name": "SRAM", "width": 10, "height": 8, "kind": "macro",
       "pin_offsets": [{"name": "DI", "dx": 0, "dy": 1}, {"name": "DO", "dx": 10, "dy": 1, "direction": "output"}]}
    ],
    "io_sides": {"din": "S"}
  })";
  const char* src = R"(
    module stage(input [1:0] d, output [1:0] q);
      DFF r0 (.D(d[0]), .Q(q[0]));
      DFF r1 (.D(d[1]), .Q(q[1]));
    endmodule
    module top(input [1:0] din, output [1:0] dout);
      wire [1:0] a;
      wire [1:0] b;
      stage u_s (.d(din), .q(a));
      SRAM u_m0 (.DI(a[0]), .DO(b[0]));
      SRAM u_m1 (.DI(a[1]), .DO(b[1]));
      assign_free_zone u_dummy ();
    endmodule
  )";
  // The stray instance of an unknown module must be reported.
  try {
    parse_verilog_subset(src, geometry);
    FAIL("expected UnknownMaster");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownMaster);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }

  std::string fixed = src;
  fixed.erase(fixed.find("      assign_free_zone"), std::string("      assign_free_zone u_dummy ();\n").size());
  const Netlist nl = parse_verilog_subset(fixed, geometry);
  // 2 flops, 2 srams, 2 input pads, 2 output pads
  CHECK(nl.instances.size() == 8);
  auto find = [&](const std::string& name) {
    auto it = std::find_if(nl.instances.begin(), nl.instances.end(), [&](const Instance& i) { return i.name == name; });
    REQUIRE(it != nl.instances.end());
    return *it;
  };
  CHECK(find("u_s/r1").hierarchy_path == std::vector<std::string>{"top", "u_s"});
  CHECK(find("din[0]").io_side == Side::S);
  CHECK(find("dout[1]").io_side == Side::E);
  // din[i] -> r_i and r_i -> sram_i; b and dout have a single attachment each.
  CHECK(nl.nets.size() == 4);
}

TEST_CASE("verilog: behavioral code is rejected with its line") {
  const char* geometry = R"({"outline": {"width": 5, "height": 5}, "masters": []})";
  const char* src = "module top(input a);\n  wire b;\n  always @(a) begin end\nendmodule\n";
  try {
    parse_verilog_subset(src, geometry);
    FAIL("expected UnsupportedConstruct");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedConstruct);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(code_of([&] { parse_verilog_subset("module top(); assign x = y; endmodule", geometry); }) ==
        ErrorCode::UnsupportedConstruct);
  CHECK(code_of([&] { parse_verilog_subset("module top(); BUF #(2) u (); endmodule", geometry); }) ==
        ErrorCode::UnsupportedConstruct);
  CHECK(code_of([&] { parse_verilog_subset("`define X 1\nmodule top(); endmodule", geometry); }) ==
        ErrorCode::UnsupportedConstruct);
}

TEST_CASE("verilog and JSON paths agree") {
  const char* geometry = R"({
    "outline": {"width": 40, "height": 30},
    "masters": [
      {"name": "BUF", "width": 1, "height": 1, "kind": "cell",
       "pin_offsets": [{"name": "A", "dx": 0, "dy": 0.5}, {"name": "Y", "dx": 1, "dy": 0.5, "direction": "output"}]}
    ]
  })";
  const char* src = "module top(); wire n; BUF u0 (.Y(n)); BUF u1 (.A(n)); endmodule";
  const Netlist from_v = parse_verilog_subset(src, geometry);
  const char* doc = R"({
    "outline": {"width": 40, "height": 30},
    "masters": [
      {"name": "BUF", "width": 1, "height": 1, "kind": "cell",
       "pin_offsets": [{"name": "A", "dx": 0, "dy": 0.5}, {"name": "Y", "dx": 1, "dy": 0.5, "direction": "output"}]}
    ],
    "instances": [
      {"name": "u0", "master": "BUF", "hierarchy_path": ["top"]},
      {"name": "u1", "master": "BUF", "hierarchy_path": ["top"]}
    ],
    "nets": [{"base_name": "n", "driver": {"instance": "u0", "pin": "Y"}, "sinks": [{"instance": "u1", "pin": "A"}]}]
  })";
  CHECK(from_v == parse_netlist(doc));
}
