#pragma once

// Word circuits and sentence circuits.
//
// Base fragments by wire count:
//   0 wires  the scalar 1
//   1 wire   Rx(theta)|0>
//   2 wires  (Rx(theta) x I) on the Bell pair, scaled by sqrt(2)
//   3 wires  GHZ, no parameters, scaled by sqrt(2)
//   >3       |0...0> with Rx(theta) on wire 0 (depth >= 2 only)
// Each extra depth layer is H on every wire then CRz on adjacent pairs (Rz for
// a single wire). A cap between two wires is CNOT, H on the first wire and a
// postselection of both on 0; the sentence scalar carries sqrt(2) per cap.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qnlp/meaning.hpp"
#include "qnlp/pregroup.hpp"
#include "qnlp/qsim.hpp"

namespace qnlp {

enum class AngleUnit { Turns, HalfTurns, Radians };

AngleUnit parse_angle_unit(const std::string& text);
std::string to_string(AngleUnit unit);
double to_radians(double value, AngleUnit unit);

struct AnsatzConfig {
  std::map<std::string, std::size_t> qubits_per_type{{"n", 1}, {"s", 0}};
  std::size_t depth = 1;
  AngleUnit angle_unit = AngleUnit::Turns;
  std::string sentence_type = "s";

  std::size_t qubits_for(const std::string& base) const;
  std::size_t wire_count(const PregroupType& type) const;
  // True when the sentence type carries a qubit.
  bool connector_mode() const;
  void validate() const;
};

// {"qubits_per_type": {...}, "depth": d, "angle_unit": "..."}
AnsatzConfig parse_ansatz_config(const std::string& json_text);
AnsatzConfig load_ansatz_config(const std::string& path);
std::string ansatz_config_json(const AnsatzConfig& config);

struct ParamSlot {
  std::string word;
  std::size_t layer = 0;  // 0 is the base fragment
  std::size_t pair = 0;
  std::string name() const;
};

std::size_t slot_count(std::size_t wires, std::size_t depth);

// Global parameter ordering: vocabulary order, then layer, then pair.
class ParamLayout {
 public:
  ParamLayout(const Vocabulary& vocabulary, const AnsatzConfig& config);

  const std::vector<ParamSlot>& slots() const { return slots_; }
  std::size_t size() const { return slots_.size(); }
  std::size_t offset(const std::string& word) const;
  std::size_t count(const std::string& word) const;
  std::size_t wires(const std::string& word) const;
  bool contains(const std::string& word) const { return entries_.contains(word); }

 private:
  struct Entry {
    std::size_t offset;
    std::size_t count;
    std::size_t wires;
  };
  std::map<std::string, Entry> entries_;
  std::vector<ParamSlot> slots_;
};

struct WordFragment {
  std::size_t wires = 0;
  std::vector<Gate> gates;  // on local wires, from |0...0>
  double scale = 1.0;
};

// Throws UnsupportedArity (more than 3 wires at depth 1) and InvalidInput
// when the parameter count is wrong.
WordFragment word_circuit(const TypedWord& word, const AnsatzConfig& config,
                          const std::vector<double>& params);

StateVector fragment_state(const WordFragment& fragment);

// The scaled fragment state reshaped with one index per simple type.
ComplexWordTensor word_tensor(const TypedWord& word, const AnsatzConfig& config,
                              const std::vector<double>& params);

struct SentenceCircuit {
  Circuit circuit;
  double scale = 1.0;
  std::vector<std::size_t> word_first_wire;
};

// Throws VocabularyMiss and WidthExceeded.
SentenceCircuit sentence_circuit(const ReductionDiagram& diagram, const ParamLayout& layout,
                                 const AnsatzConfig& config, const std::vector<double>& params);

// Word tensors for the same sentence, for csc_meaning.
std::vector<ComplexWordTensor> sentence_tensors(const ReductionDiagram& diagram,
                                                const ParamLayout& layout,
                                                const AnsatzConfig& config,
                                                const std::vector<double>& params);

std::vector<double> word_params(const ParamLayout& layout, const std::string& word,
                                const std::vector<double>& params);

struct ConnectorOptions {
  std::vector<std::string> negations{"not"};
  std::vector<std::string> conjunctions{"and", "or"};
  // Type the binary connectors "-1s.s" instead of "-1s.n".
  bool sentence_to_sentence = false;
};

struct ConnectorSetup {
  Vocabulary vocabulary;
  AnsatzConfig config;
};

// Adds the connectors and gives the sentence type one qubit. Intransitive and
// transitive verbs then get 2 and 3 wires, so they pick up the Bell and GHZ
// fragments from the wire-count rule.
ConnectorSetup connector_vocabulary(const Vocabulary& base, const AnsatzConfig& config,
                                    const ConnectorOptions& options = {});

}  // namespace qnlp
