#include "pqk/simulator.hpp"

#include <cmath>
#include <random>
#include <string>

namespace pqk {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\n");
  return std::string(text.substr(begin, end - begin + 1));
}

[[noreturn]] void unsupported(const std::string& gate, const std::string& why) {
  throw Error(ErrorKind::UnsupportedGate, "gate " + gate + ": " + why);
}

}  // namespace

WireInit WireInit::plus() { return {{kInvSqrt2, 0}, {kInvSqrt2, 0}}; }
WireInit WireInit::minus() { return {{kInvSqrt2, 0}, {-kInvSqrt2, 0}}; }

InitSpec parse_init_spec(std::string_view text) {
  InitSpec spec;
  std::size_t column = 1;
  while (!trim(text).empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    auto eq = item.find('=');
    SourceSpan where{1, static_cast<int>(column)};
    if (eq == std::string_view::npos) throw SyntaxError(where, "expected label=value in init spec");
    std::string name = trim(item.substr(0, eq));
    std::string value = trim(item.substr(eq + 1));
    if (name.empty()) throw SyntaxError(where, "missing label in init spec");
    WireInit init;
    if (value == "0") {
      init = WireInit::basis(false);
    } else if (value == "1") {
      init = WireInit::basis(true);
    } else if (value == "+") {
      init = WireInit::plus();
    } else if (value == "-") {
      init = WireInit::minus();
    } else {
      throw SyntaxError(where, "init value for " + name + " must be 0, 1, + or -");
    }
    if (!spec.emplace(Label(name), init).second) throw SyntaxError(where, "label " + name + " initialized twice");
    if (comma == std::string_view::npos) break;
    column += comma + 1;
    text.remove_prefix(comma + 1);
  }
  return spec;
}

QuantumState QuantumState::product(const LabelContext& input, const InitSpec& init, std::size_t max_qubits) {
  for (const auto& [label, _] : init) {
    if (!input.contains(label)) {
      throw Error(ErrorKind::UnboundLabel, "init names " + label.name() + ", which is not an input wire");
    }
  }
  QuantumState state;
  for (const auto& [label, type] : input.entries()) {
    auto it = init.find(label);
    WireInit value = it == init.end() ? WireInit{} : it->second;
    if (type == WireType::Qubit) {
      state.add_qubit(label, value, max_qubits);
    } else {
      bool zero = std::abs(value.zero) == 1.0 && value.one == Amplitude{};
      bool one = std::abs(value.one) == 1.0 && value.zero == Amplitude{};
      if (!zero && !one) throw Error(ErrorKind::WrongWireType, "bit wire " + label.name() + " needs 0 or 1");
      state.set_bit(label, one);
    }
  }
  return state;
}

double QuantumState::norm() const {
  double sum = 0;
  for (const auto& amp : amplitudes_) sum += std::norm(amp);
  return std::sqrt(sum);
}

LabelContext QuantumState::wires() const {
  LabelContext q;
  for (const auto& [label, _] : wire_index_) q.add(label, WireType::Qubit);
  for (const auto& [label, _] : classical_) q.add(label, WireType::Bit);
  return q;
}

std::size_t QuantumState::slot(const Label& wire) const {
  auto it = wire_index_.find(wire);
  if (it == wire_index_.end()) throw Error(ErrorKind::UnboundLabel, "no live qubit wire " + wire.name());
  return it->second;
}

std::vector<Amplitude> QuantumState::amplitudes_in(const std::vector<Label>& order) const {
  if (order.size() != wire_index_.size()) {
    throw Error(ErrorKind::InvalidArgument, "qubit order must list every live qubit wire");
  }
  std::vector<std::size_t> slots;
  for (const auto& l : order) slots.push_back(slot(l));
  std::vector<Amplitude> out(amplitudes_.size());
  for (std::size_t index = 0; index < amplitudes_.size(); ++index) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if ((index >> slots[i]) & 1U) target |= std::size_t{1} << i;
    }
    out[target] = amplitudes_[index];
  }
  return out;
}

void QuantumState::add_qubit(const Label& wire, WireInit init, std::size_t max_qubits) {
  if (wire_index_.contains(wire) || classical_.contains(wire)) {
    throw Error(ErrorKind::DuplicateLabel, "wire " + wire.name() + " is already live");
  }
  if (wire_index_.size() + 1 > max_qubits) {
    throw Error(ErrorKind::SimulationLimit, "more than " + std::to_string(max_qubits) + " live qubits");
  }
  double scale = std::sqrt(std::norm(init.zero) + std::norm(init.one));
  if (scale == 0) throw Error(ErrorKind::InvalidArgument, "zero vector for qubit " + wire.name());
  std::size_t size = amplitudes_.size();
  std::vector<Amplitude> next(2 * size);
  for (std::size_t i = 0; i < size; ++i) {
    next[i] = amplitudes_[i] * init.zero / scale;
    next[i + size] = amplitudes_[i] * init.one / scale;
  }
  amplitudes_ = std::move(next);
  std::size_t slot = wire_index_.size();
  wire_index_.emplace(wire, slot);
}

void QuantumState::set_bit(const Label& wire, bool value) {
  if (wire_index_.contains(wire) || classical_.contains(wire)) {
    throw Error(ErrorKind::DuplicateLabel, "wire " + wire.name() + " is already live");
  }
  classical_.emplace(wire, value);
}

bool QuantumState::take_bit(const Label& wire) {
  auto it = classical_.find(wire);
  if (it == classical_.end()) throw Error(ErrorKind::UnboundLabel, "no live bit wire " + wire.name());
  bool value = it->second;
  classical_.erase(it);
  return value;
}

void QuantumState::relabel_qubits(const std::vector<Label>& from, const std::vector<Label>& to) {
  if (from.size() != to.size()) throw Error(ErrorKind::InvalidArgument, "relabeling arity mismatch");
  std::vector<std::size_t> slots;
  for (const auto& l : from) slots.push_back(slot(l));
  for (const auto& l : from) wire_index_.erase(l);
  for (std::size_t i = 0; i < to.size(); ++i) {
    if (classical_.contains(to[i]) || !wire_index_.emplace(to[i], slots[i]).second) {
      throw Error(ErrorKind::DuplicateLabel, "wire " + to[i].name() + " is already live");
    }
  }
}

void QuantumState::apply_single(const Label& wire, const std::array<Amplitude, 4>& matrix) {
  std::size_t bit = std::size_t{1} << slot(wire);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & bit) continue;
    Amplitude zero = amplitudes_[i];
    Amplitude one = amplitudes_[i | bit];
    amplitudes_[i] = matrix[0] * zero + matrix[1] * one;
    amplitudes_[i | bit] = matrix[2] * zero + matrix[3] * one;
  }
}

void QuantumState::apply_cnot(const Label& control, const Label& target) {
  std::size_t control_bit = std::size_t{1} << slot(control);
  std::size_t target_bit = std::size_t{1} << slot(target);
  if (control_bit == target_bit) throw Error(ErrorKind::InvalidArgument, "CNOT control and target coincide");
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if ((i & control_bit) && !(i & target_bit)) std::swap(amplitudes_[i], amplitudes_[i | target_bit]);
  }
}

bool QuantumState::measure(const Label& wire, double uniform) {
  std::size_t k = slot(wire);
  std::size_t bit = std::size_t{1} << k;
  double p_one = 0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & bit) p_one += std::norm(amplitudes_[i]);
  }
  bool outcome = uniform < p_one;
  double p = outcome ? p_one : 1.0 - p_one;
  double scale = 1.0 / std::sqrt(p);
  std::vector<Amplitude> next(amplitudes_.size() / 2);
  std::size_t low_mask = bit - 1;
  for (std::size_t j = 0; j < next.size(); ++j) {
    std::size_t index = ((j & ~low_mask) << 1) | (outcome ? bit : 0) | (j & low_mask);
    next[j] = amplitudes_[index] * scale;
  }
  amplitudes_ = std::move(next);
  wire_index_.erase(wire);
  for (auto& [_, s] : wire_index_) {
    if (s > k) --s;
  }
  return outcome;
}

double fidelity(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "fidelity of states of different dimension");
  Amplitude overlap{};
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_arity(const GateApp& g, const std::vector<Label>& in, const std::vector<Label>& out, std::size_t n_in,
                   std::size_t n_out) {
  if (in.size() != n_in || out.size() != n_out) unsupported(g.gate, "operand shape has no semantics");
}

void apply_gate(QuantumState& state, const GateApp& g, std::mt19937_64& rng, const SimOptions& options) {
  static const std::map<std::string, std::array<Amplitude, 4>> kSingle = {
      {"H", {Amplitude{kInvSqrt2}, Amplitude{kInvSqrt2}, Amplitude{kInvSqrt2}, Amplitude{-kInvSqrt2}}},
      {"X", {Amplitude{0}, Amplitude{1}, Amplitude{1}, Amplitude{0}}},
      {"Z", {Amplitude{1}, Amplitude{0}, Amplitude{0}, Amplitude{-1}}},
  };
  auto in = labels_of(g.in);
  auto out = labels_of(g.out);
  if (auto it = kSingle.find(g.gate); it != kSingle.end()) {
    require_arity(g, in, out, 1, 1);
    state.apply_single(in[0], it->second);
    state.relabel_qubits(in, out);
  } else if (g.gate == "CNOT") {
    require_arity(g, in, out, 2, 2);
    state.apply_cnot(in[0], in[1]);
    state.relabel_qubits(in, out);
  } else if (g.gate == "Meas" || g.gate == "Meas2") {
    std::size_t n = g.gate == "Meas" ? 1 : 2;
    require_arity(g, in, out, n, n);
    std::vector<bool> bits;
    for (const auto& l : in) bits.push_back(state.measure(l, uniform01(rng)));
    for (std::size_t i = 0; i < n; ++i) state.set_bit(out[i], bits[i]);
  } else if (g.gate == "Init0" || g.gate == "Init1") {
    require_arity(g, in, out, 0, 1);
    state.add_qubit(out[0], WireInit::basis(g.gate == "Init1"), options.max_qubits);
  } else if (g.gate == "Discard") {
    require_arity(g, in, out, 1, 0);
    state.take_bit(in[0]);
  } else {
    unsupported(g.gate, "no simulation semantics");
  }
}

bool fires(const Assignment& cond, const Assignment& sampled) {
  for (const auto& [var, bit] : cond.bindings()) {
    if (sampled.get(var) != bit) return false;
  }
  return true;
}

RunTrace run(const Circuit& c, const CircuitSignature& sig, const QuantumState& init, std::uint64_t seed,
             const SimOptions& options) {
  if (!(init.wires() == c.input)) {
    throw Error(ErrorKind::PreconditionViolated,
                "initial state wires " + init.wires().to_string() + " do not match circuit input " +
                    c.input.to_string());
  }
  if (init.qubit_count() > options.max_qubits) {
    throw Error(ErrorKind::SimulationLimit, "more than " + std::to_string(options.max_qubits) + " live qubits");
  }
  std::mt19937_64 rng(seed);
  RunTrace trace;
  trace.state = init;
  for (const auto& instr : c.instructions) {
    bool on = fires(condition(instr), trace.path);
    trace.fired.push_back(on);
    if (!on) continue;
    if (const auto* g = std::get_if<GateApp>(&instr)) {
      apply_gate(trace.state, *g, rng, options);
    } else {
      const auto& lift = std::get<LiftInstr>(instr);
      bool bit = trace.state.take_bit(lift.wire);
      trace.path = trace.path.with(lift.var, bit);
      trace.lifts.emplace_back(lift.var, bit);
    }
  }
  if (!is_path(sig.tree, trace.path)) {
    throw Error(ErrorKind::PreconditionViolated, "sampled " + trace.path.to_string() + " is not a path of " +
                                                     sig.tree.to_string());
  }
  trace.outputs = sig.outputs.at(trace.path);
  if (!(trace.state.wires() == trace.outputs)) {
    throw Error(ErrorKind::PreconditionViolated, "live wires " + trace.state.wires().to_string() +
                                                     " disagree with the signature output " +
                                                     trace.outputs.to_string());
  }
  return trace;
}

}  // namespace

RunTrace simulate(const Circuit& c, const QuantumState& init, std::uint64_t seed, const GateSet& gates,
                  const SimOptions& options) {
  return run(c, check_signature(c, gates), init, seed, options);
}

std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step over the combined value.
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::map<Assignment, std::uint64_t> branch_distribution(const Circuit& c, const QuantumState& init,
                                                        std::uint64_t shots, std::uint64_t seed,
                                                        const GateSet& gates, const SimOptions& options) {
  CircuitSignature sig = check_signature(c, gates);
  std::map<Assignment, std::uint64_t> counts;
  for (const auto& p : path_set(sig.tree)) counts[p] = 0;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    ++counts[run(c, sig, init, shot_seed(seed, shot), options).path];
  }
  return counts;
}

}  // namespace pqk
