#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "pqk/crl.hpp"
#include "pqk/lifting.hpp"

namespace pqk {

using Amplitude = std::complex<double>;

// α|0⟩ + β|1⟩ for a qubit wire; a bit wire takes a basis value.
struct WireInit {
  Amplitude zero{1.0, 0.0};
  Amplitude one{0.0, 0.0};

  static WireInit basis(bool bit) { return bit ? WireInit{{0, 0}, {1, 0}} : WireInit{}; }
  static WireInit plus();
  static WireInit minus();
};

using InitSpec = std::map<Label, WireInit>;

// `q=0,a=+`: values 0, 1, + and -. SyntaxError on malformed text.
InitSpec parse_init_spec(std::string_view text);

// Dense state over the live qubit wires plus the values of live bit wires.
// Slot i of wire_index is bit i of an amplitude index.
class QuantumState {
 public:
  QuantumState() = default;

  // Tensor product over `input`; wires missing from `init` start at |0⟩ / 0.
  static QuantumState product(const LabelContext& input, const InitSpec& init = {}, std::size_t max_qubits = 20);

  std::size_t qubit_count() const { return wire_index_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
  const std::map<Label, std::size_t>& wire_index() const { return wire_index_; }
  const std::map<Label, bool>& classical() const { return classical_; }
  double norm() const;
  // The live wires with their types.
  LabelContext wires() const;

  // Amplitudes with slot i holding order[i]; order must list every qubit wire.
  std::vector<Amplitude> amplitudes_in(const std::vector<Label>& order) const;

  void add_qubit(const Label& wire, WireInit init, std::size_t max_qubits);
  void set_bit(const Label& wire, bool value);
  bool take_bit(const Label& wire);
  // Simultaneous renaming of qubit wires.
  void relabel_qubits(const std::vector<Label>& from, const std::vector<Label>& to);
  // 2x2 unitary in row-major order.
  void apply_single(const Label& wire, const std::array<Amplitude, 4>& matrix);
  void apply_cnot(const Label& control, const Label& target);
  // Computational-basis measurement; `uniform` in [0, 1) drives the outcome.
  // The qubit slot is removed and the state renormalized.
  bool measure(const Label& wire, double uniform);

 private:
  std::size_t slot(const Label& wire) const;

  std::vector<Amplitude> amplitudes_{Amplitude{1.0, 0.0}};
  std::map<Label, std::size_t> wire_index_;
  std::map<Label, bool> classical_;
};

// |⟨a|b⟩|², ignoring global phase.
double fidelity(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b);

struct SimOptions {
  std::size_t max_qubits = 20;
};

struct RunTrace {
  Assignment path;
  // Lifted variables in the order their lifts fired, with the sampled bit.
  std::vector<std::pair<LiftedVar, bool>> lifts;
  // One flag per instruction.
  std::vector<bool> fired;
  LabelContext outputs;
  QuantumState state;
};

// Runs `c` once; an instruction fires iff its condition agrees with the
// lifted bits sampled so far. UnsupportedGate for gates without semantics,
// SimulationLimit past max_qubits.
RunTrace simulate(const Circuit& c, const QuantumState& init, std::uint64_t seed,
                  const GateSet& gates = GateSet::default_set(), const SimOptions& options = {});

// Frequencies of the sampled path over `shots` runs with per-shot seeds
// derived from `seed`.
std::map<Assignment, std::uint64_t> branch_distribution(const Circuit& c, const QuantumState& init,
                                                        std::uint64_t shots, std::uint64_t seed,
                                                        const GateSet& gates = GateSet::default_set(),
                                                        const SimOptions& options = {});

// Seed of shot `index` under base seed `seed`.
std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace pqk
