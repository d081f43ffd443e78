// Structural Verilog subset: module headers (ANSI or plain port lists), port
// and wire declarations, and named-port instantiations. Hierarchy is flattened
// at bit level; every connected bit group becomes one scalar net.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dfmp/error.hpp"
#include "dfmp/netlist.hpp"

namespace dfmp {

std::vector<Master> parse_masters_json(const nlohmann::json& arr);
Outline parse_outline_json(const nlohmann::json& j);

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
};

[[noreturn]] void fail(ErrorCode code, int line, const std::string& what) {
  throw Error(code, fmt::format("line {}: {}", line, what));
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  const auto n = src.size();
  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      const int start = line;
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      if (i + 1 >= n) fail(ErrorCode::Syntax, start, "unterminated block comment");
      i += 2;
    } else if (c == '`') {
      fail(ErrorCode::UnsupportedConstruct, line, "compiler directives are not supported");
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      const auto start = i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '$')) ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), line});
    } else if (c == '\\') {
      const auto start = ++i;
      while (i < n && !std::isspace(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), line});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
      // Plain or sized constants (8'hff, 'b0, 1'bx).
      const auto start = i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '\'' || src[i] == '_')) ++i;
      out.push_back({Tok::Number, std::string(src.substr(start, i - start)), line});
    } else if (std::string_view("()[]{},;.:#").find(c) != std::string_view::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), line});
      ++i;
    } else {
      fail(ErrorCode::UnsupportedConstruct, line, fmt::format("unexpected character '{}'", c));
    }
  }
  out.push_back({Tok::End, "", line});
  return out;
}

// A bit range [msb:lsb]; scalar signals have no range.
struct Range {
  int msb = 0;
  int lsb = 0;
  bool vector = false;
  int width() const { return std::abs(msb - lsb) + 1; }
  // Bit indices in declaration order, msb first.
  std::vector<int> bits() const {
    std::vector<int> b;
    const int step = msb >= lsb ? -1 : 1;
    for (int i = msb;; i += step) {
      b.push_back(i);
      if (i == lsb) break;
    }
    return b;
  }
};

enum class Dir { None, Input, Output, Inout };

struct Signal {
  std::string name;
  Range range;
  Dir dir = Dir::None;
  int line = 0;
};

// One piece of a connection expression.
struct ExprPart {
  enum Kind { Whole, Bit, Slice, Constant } kind = Whole;
  std::string name;
  int msb = 0;
  int lsb = 0;
  int const_width = 0;
  int line = 0;
};
using Expr = std::vector<ExprPart>;  // concatenation, msb part first

struct Connection {
  std::string port;
  Expr expr;  // empty: explicitly unconnected
  int line = 0;
};

struct InstanceStmt {
  std::string module;
  std::string name;
  std::vector<Connection> connections;
  int line = 0;
};

struct Module {
  std::string name;
  std::vector<std::string> port_order;
  std::vector<Signal> signals;  // ports and wires, declaration order
  std::unordered_map<std::string, std::size_t> signal_index;
  std::vector<InstanceStmt> instances;
  int line = 0;

  Signal* find(const std::string& n) {
    auto it = signal_index.find(n);
    return it == signal_index.end() ? nullptr : &signals[it->second];
  }
  void declare(Signal s) {
    if (auto* existing = find(s.name)) {
      // "output x;" followed by "wire x;" (or the reverse) refers to one signal.
      if (s.dir != Dir::None) existing->dir = s.dir;
      if (s.range.vector) existing->range = s.range;
      return;
    }
    signal_index.emplace(s.name, signals.size());
    signals.push_back(std::move(s));
  }
};

const std::set<std::string> kBehavioral = {
    "always", "always_ff", "always_comb", "always_latch", "initial", "assign", "reg", "logic",
    "integer", "function", "task", "generate", "genvar", "if", "case", "for", "while",
    "parameter", "localparam", "defparam", "specify", "primitive", "fork", "begin"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<Module> parse() {
    std::vector<Module> modules;
    while (peek().kind != Tok::End) {
      if (peek().text != "module") unsupported_or(peek(), "expected 'module'");
      modules.push_back(parse_module());
    }
    return modules;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(std::string_view sym) {
    if (peek().kind == Tok::Symbol && peek().text == sym) {
      next();
      return true;
    }
    return false;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) fail(ErrorCode::Syntax, peek().line, fmt::format("expected '{}' near '{}'", sym, peek().text));
  }
  std::string ident() {
    const Token& t = next();
    if (t.kind != Tok::Ident) fail(ErrorCode::Syntax, t.line, fmt::format("expected identifier, got '{}'", t.text));
    if (kBehavioral.count(t.text)) unsupported_or(t, "");
    return t.text;
  }
  int number() {
    const Token& t = next();
    if (t.kind != Tok::Number || t.text.find('\'') != std::string::npos) {
      fail(ErrorCode::Syntax, t.line, fmt::format("expected integer, got '{}'", t.text));
    }
    return std::stoi(t.text);
  }
  [[noreturn]] void unsupported_or(const Token& t, const std::string& otherwise) {
    if (t.kind == Tok::Ident && kBehavioral.count(t.text)) {
      fail(ErrorCode::UnsupportedConstruct, t.line, fmt::format("unsupported construct '{}'", t.text));
    }
    fail(ErrorCode::Syntax, t.line, otherwise.empty() ? fmt::format("unexpected '{}'", t.text) : otherwise);
  }

  std::optional<Range> maybe_range() {
    if (!accept("[")) return std::nullopt;
    Range r;
    r.vector = true;
    r.msb = number();
    expect(":");
    r.lsb = number();
    expect("]");
    return r;
  }

  void reject_parameters() {
    // #( ... ) on a module header or instantiation
    if (!accept("#")) return;
    fail(ErrorCode::UnsupportedConstruct, peek().line, "parameterized modules are not supported");
  }

  static Dir direction_of(const std::string& word) {
    if (word == "input") return Dir::Input;
    if (word == "output") return Dir::Output;
    if (word == "inout") return Dir::Inout;
    return Dir::None;
  }

  Module parse_module() {
    Module m;
    m.line = next().line;  // 'module'
    m.name = ident();
    reject_parameters();
    if (accept("(")) {
      if (!accept(")")) {
        Dir ansi_dir = Dir::None;
        Range ansi_range;
        do {
          if (peek().kind == Tok::Ident && direction_of(peek().text) != Dir::None) {
            ansi_dir = direction_of(next().text);
            if (peek().text == "wire") next();
            ansi_range = maybe_range().value_or(Range{});
          }
          const int line = peek().line;
          auto name = ident();
          m.port_order.push_back(name);
          if (ansi_dir != Dir::None) m.declare({name, ansi_range, ansi_dir, line});
        } while (accept(","));
        expect(")");
      }
    }
    expect(";");

    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::End) fail(ErrorCode::Syntax, t.line, fmt::format("module '{}' lacks endmodule", m.name));
      if (t.kind == Tok::Ident && t.text == "endmodule") {
        next();
        break;
      }
      if (t.kind != Tok::Ident) fail(ErrorCode::Syntax, t.line, fmt::format("unexpected '{}'", t.text));
      if (kBehavioral.count(t.text)) unsupported_or(t, "");
      const Dir dir = direction_of(t.text);
      if (dir != Dir::None || t.text == "wire" || t.text == "tri") {
        next();
        if (dir != Dir::None && peek().text == "wire") next();
        const auto range = maybe_range().value_or(Range{});
        do {
          const int line = peek().line;
          m.declare({ident(), range, dir, line});
        } while (accept(","));
        expect(";");
        continue;
      }
      parse_instantiation(m);
    }
    for (const auto& p : m.port_order) {
      const auto* s = m.find(p);
      if (s == nullptr || s->dir == Dir::None) {
        fail(ErrorCode::Syntax, m.line, fmt::format("port '{}' of module '{}' has no direction", p, m.name));
      }
    }
    return m;
  }

  void parse_instantiation(Module& m) {
    const Token& head = next();
    const std::string module = head.text;
    reject_parameters();
    do {
      InstanceStmt inst;
      inst.module = module;
      inst.line = peek().line;
      inst.name = ident();
      expect("(");
      if (!accept(")")) {
        do {
          if (!accept(".")) {
            fail(ErrorCode::UnsupportedConstruct, peek().line, "only named port connections are supported");
          }
          Connection c;
          c.line = peek().line;
          c.port = ident();
          expect("(");
          if (!accept(")")) {
            c.expr = parse_expr();
            expect(")");
          }
          inst.connections.push_back(std::move(c));
        } while (accept(","));
        expect(")");
      }
      m.instances.push_back(std::move(inst));
    } while (accept(","));
    expect(";");
  }

  Expr parse_expr() {
    Expr e;
    if (accept("{")) {
      do {
        auto part = parse_expr();
        e.insert(e.end(), part.begin(), part.end());
      } while (accept(","));
      expect("}");
      return e;
    }
    ExprPart p;
    p.line = peek().line;
    if (peek().kind == Tok::Number) {
      const auto text = next().text;
      p.kind = ExprPart::Constant;
      const auto tick = text.find('\'');
      p.const_width = tick == std::string::npos || tick == 0 ? 32 : std::stoi(text.substr(0, tick));
      e.push_back(p);
      return e;
    }
    p.name = ident();
    if (accept("[")) {
      p.msb = number();
      if (accept(":")) {
        p.lsb = number();
        p.kind = ExprPart::Slice;
      } else {
        p.lsb = p.msb;
        p.kind = ExprPart::Bit;
      }
      expect("]");
    }
    e.push_back(p);
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Elaboration

struct Attachment {
  int instance;
  std::string pin;
  bool drives;
};

struct BitNode {
  std::string name;  // hierarchical bit name
  int depth = 0;
  std::vector<Attachment> attachments;
};

class Elaborator {
 public:
  Elaborator(std::vector<Module>& modules, const nlohmann::json& sidecar) : modules_(modules) {
    if (!sidecar.is_object()) throw Error(ErrorCode::Syntax, "geometry sidecar must be a JSON object");
    for (const auto& [key, _] : sidecar.items()) {
      if (key != "outline" && key != "masters" && key != "io_sides" && key != "top") {
        throw Error(ErrorCode::Syntax, fmt::format("geometry sidecar: unknown key '{}'", key));
      }
    }
    if (!sidecar.contains("outline") || !sidecar.contains("masters")) {
      throw Error(ErrorCode::Syntax, "geometry sidecar needs 'outline' and 'masters'");
    }
    nl_.outline = parse_outline_json(sidecar["outline"]);
    nl_.masters = parse_masters_json(sidecar["masters"]);
    for (std::size_t i = 0; i < nl_.masters.size(); ++i) master_index_.emplace(nl_.masters[i].name, i);
    if (auto it = sidecar.find("io_sides"); it != sidecar.end()) {
      for (const auto& [port, side] : it->items()) io_sides_.emplace(port, parse_side(side.get<std::string>()));
    }
    if (auto it = sidecar.find("top"); it != sidecar.end()) top_name_ = it->get<std::string>();
    for (std::size_t i = 0; i < modules_.size(); ++i) {
      if (!module_index_.emplace(modules_[i].name, i).second) {
        fail(ErrorCode::Syntax, modules_[i].line, fmt::format("module '{}' defined twice", modules_[i].name));
      }
      if (master_index_.count(modules_[i].name)) {
        fail(ErrorCode::Syntax, modules_[i].line,
             fmt::format("module '{}' is also a geometry master", modules_[i].name));
      }
    }
  }

  Netlist run() {
    Module& top = find_top();
    make_io_pads(top);
    elaborate(top, {top.name}, "", 0, top_bindings_);
    build_nets();
    validate(nl_);
    return std::move(nl_);
  }

 private:
  Module& find_top() {
    if (modules_.empty()) throw Error(ErrorCode::MissingInstances, "source defines no modules");
    if (!top_name_.empty()) {
      auto it = module_index_.find(top_name_);
      if (it == module_index_.end()) throw Error(ErrorCode::Syntax, fmt::format("top module '{}' not found", top_name_));
      return modules_[it->second];
    }
    std::set<std::string> instantiated;
    for (const auto& m : modules_) {
      for (const auto& i : m.instances) instantiated.insert(i.module);
    }
    Module* top = nullptr;
    for (auto& m : modules_) {
      if (instantiated.count(m.name)) continue;
      if (top != nullptr) {
        throw Error(ErrorCode::Syntax,
                    fmt::format("several top-level modules ('{}', '{}'); name one with \"top\" in the sidecar",
                                top->name, m.name));
      }
      top = &m;
    }
    if (top == nullptr) throw Error(ErrorCode::Syntax, "module instantiation graph has no root");
    return *top;
  }

  int new_node(std::string name, int depth) {
    nodes_.push_back({std::move(name), depth, {}});
    return static_cast<int>(nodes_.size()) - 1;
  }

  static std::string bit_name(const std::string& prefix, const Signal& s, int bit) {
    return s.range.vector ? fmt::format("{}{}[{}]", prefix, s.name, bit) : prefix + s.name;
  }

  void make_io_pads(Module& top) {
    if (top.port_order.empty()) return;
    std::string pad_master = "IOPAD";
    while (master_index_.count(pad_master)) pad_master = "_" + pad_master;
    Master pad;
    pad.name = pad_master;
    pad.kind = MasterKind::IoPad;
    // Inputs drive the design from the pad; outputs are sinks at the pad.
    pad.pin_offsets.push_back({"P", 0.0, 0.0, true});
    pad.pin_offsets.push_back({"I", 0.0, 0.0, false});
    const int master = static_cast<int>(nl_.masters.size());
    nl_.masters.push_back(pad);

    for (const auto& port : top.port_order) {
      const Signal& s = *top.find(port);
      Side side = s.dir == Dir::Input ? Side::W : s.dir == Dir::Output ? Side::E : Side::N;
      if (auto it = io_sides_.find(port); it != io_sides_.end()) side = it->second;
      std::vector<int> bits;
      for (int b : s.range.bits()) {
        const auto name = bit_name("", s, b);
        Instance inst{static_cast<int>(nl_.instances.size()), name, master, {top.name}, side};
        nl_.instances.push_back(inst);
        const int node = new_node(name, 0);
        nodes_[node].attachments.push_back(
            {inst.id, s.dir == Dir::Input ? "P" : "I", s.dir == Dir::Input});
        bits.push_back(node);
      }
      top_bindings_.emplace(port, std::move(bits));
    }
  }

  using Bindings = std::map<std::string, std::vector<int>>;

  void elaborate(Module& m, const std::vector<std::string>& path, const std::string& prefix, int depth,
                 const Bindings& bindings) {
    if (std::find(stack_.begin(), stack_.end(), m.name) != stack_.end()) {
      fail(ErrorCode::Syntax, m.line, fmt::format("module '{}' instantiates itself", m.name));
    }
    stack_.push_back(m.name);

    // Local bit nodes for every declared signal; bound ports reuse the parent's.
    std::unordered_map<std::string, std::vector<int>> local;
    for (const auto& s : m.signals) {
      if (auto it = bindings.find(s.name); it != bindings.end()) {
        local.emplace(s.name, it->second);
        continue;
      }
      std::vector<int> bits;
      for (int b : s.range.bits()) bits.push_back(new_node(bit_name(prefix, s, b), depth));
      local.emplace(s.name, std::move(bits));
    }

    auto resolve = [&](const Expr& expr) {
      std::vector<int> bits;  // -1 marks a constant bit
      for (const auto& part : expr) {
        if (part.kind == ExprPart::Constant) {
          bits.insert(bits.end(), part.const_width, -1);
          continue;
        }
        Signal* s = m.find(part.name);
        if (s == nullptr) {
          // Implicit one-bit net.
          if (part.kind != ExprPart::Whole) {
            fail(ErrorCode::Syntax, part.line, fmt::format("undeclared vector '{}'", part.name));
          }
          m.declare({part.name, Range{}, Dir::None, part.line});
          s = m.find(part.name);
          local.emplace(part.name, std::vector<int>{new_node(prefix + part.name, depth)});
        }
        const auto& sbits = local.at(part.name);
        const auto order = s->range.bits();
        auto pick = [&](int bit) {
          auto it = std::find(order.begin(), order.end(), bit);
          if (it == order.end() || (!s->range.vector && part.kind != ExprPart::Whole)) {
            fail(ErrorCode::Syntax, part.line, fmt::format("bit {} out of range for '{}'", bit, part.name));
          }
          bits.push_back(sbits[static_cast<std::size_t>(it - order.begin())]);
        };
        if (part.kind == ExprPart::Whole) {
          bits.insert(bits.end(), sbits.begin(), sbits.end());
        } else {
          const int step = part.msb >= part.lsb ? -1 : 1;
          for (int b = part.msb;; b += step) {
            pick(b);
            if (b == part.lsb) break;
          }
        }
      }
      return bits;
    };

    for (const auto& inst : m.instances) {
      const std::string inst_name = prefix + inst.name;
      if (auto mit = master_index_.find(inst.module); mit != master_index_.end()) {
        const Master& master = nl_.masters[mit->second];
        Instance leaf{static_cast<int>(nl_.instances.size()), inst_name, static_cast<int>(mit->second), path, {}};
        nl_.instances.push_back(leaf);
        for (const auto& c : inst.connections) {
          const PinOffset* pin = master.find_pin(c.port);
          if (pin == nullptr) {
            fail(ErrorCode::DanglingPin, c.line,
                 fmt::format("master '{}' has no pin '{}'", master.name, c.port));
          }
          if (c.expr.empty()) continue;
          const auto bits = resolve(c.expr);
          if (bits.size() != 1) {
            fail(ErrorCode::UnsupportedConstruct, c.line,
                 fmt::format("pin '{}' of leaf '{}' must connect exactly one bit", c.port, inst_name));
          }
          if (bits[0] >= 0) nodes_[bits[0]].attachments.push_back({leaf.id, c.port, pin->output});
        }
        continue;
      }
      auto dit = module_index_.find(inst.module);
      if (dit == module_index_.end()) {
        fail(ErrorCode::UnknownMaster, inst.line,
             fmt::format("'{}' instantiates '{}', which has no geometry entry", inst_name, inst.module));
      }
      Module& child = modules_[dit->second];
      Bindings child_bindings;
      for (const auto& c : inst.connections) {
        const Signal* port = child.find(c.port);
        if (port == nullptr || std::find(child.port_order.begin(), child.port_order.end(), c.port) ==
                                   child.port_order.end()) {
          fail(ErrorCode::DanglingPin, c.line, fmt::format("module '{}' has no port '{}'", child.name, c.port));
        }
        if (c.expr.empty()) continue;
        auto bits = resolve(c.expr);
        const auto width = static_cast<std::size_t>(port->range.width());
        if (bits.size() != width) {
          fail(ErrorCode::Syntax, c.line,
               fmt::format("port '{}' of '{}' is {} bits wide but {} bits are connected", c.port, child.name,
                           width, bits.size()));
        }
        // Constant bits get a private node so the child still sees a full port.
        for (std::size_t b = 0; b < bits.size(); ++b) {
          if (bits[b] < 0) bits[b] = new_node(fmt::format("{}/{}[const]", inst_name, c.port), depth + 1);
        }
        child_bindings.emplace(c.port, std::move(bits));
      }
      auto child_path = path;
      child_path.push_back(inst.name);
      elaborate(child, child_path, inst_name + "/", depth + 1, child_bindings);
    }
    stack_.pop_back();
  }

  // Port bindings pass the parent's node ids down, so each node already is one
  // flattened net named at the shallowest level that declares it.
  void build_nets() {
    for (const auto& node : nodes_) {
      const auto& all = node.attachments;
      auto drv = std::find_if(all.begin(), all.end(), [](const Attachment& a) { return a.drives; });
      if (drv == all.end() || all.size() < 2) continue;
      Net net;
      net.id = static_cast<int>(nl_.nets.size());
      net.base_name = node.name;
      net.driver = {drv->instance, drv->pin};
      for (auto it = all.begin(); it != all.end(); ++it) {
        if (it != drv) net.sinks.push_back({it->instance, it->pin});
      }
      nl_.nets.push_back(std::move(net));
    }
  }

  std::vector<Module>& modules_;
  Netlist nl_;
  std::unordered_map<std::string, std::size_t> master_index_;
  std::unordered_map<std::string, std::size_t> module_index_;
  std::map<std::string, Side> io_sides_;
  std::string top_name_;
  std::vector<BitNode> nodes_;
  Bindings top_bindings_;
  std::vector<std::string> stack_;
};

}  // namespace

Netlist parse_verilog_subset(std::string_view text, std::string_view geometry) {
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(geometry);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Syntax, fmt::format("geometry sidecar is not valid JSON: {}", e.what()));
  }
  auto modules = Parser(tokenize(text)).parse();
  return Elaborator(modules, sidecar).run();
}

}  // namespace dfmp
