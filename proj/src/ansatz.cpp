#include "qnlp/ansatz.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qnlp/error.hpp"

namespace qnlp {

AngleUnit parse_angle_unit(const std::string& text) {
  if (text == "turns") return AngleUnit::Turns;
  if (text == "half_turns") return AngleUnit::HalfTurns;
  if (text == "radians") return AngleUnit::Radians;
  throw Error(ErrorCode::InvalidInput, "unknown angle unit '" + text + "'");
}

std::string to_string(AngleUnit unit) {
  switch (unit) {
    case AngleUnit::Turns: return "turns";
    case AngleUnit::HalfTurns: return "half_turns";
    case AngleUnit::Radians: return "radians";
  }
  return "?";
}

double to_radians(double value, AngleUnit unit) {
  switch (unit) {
    case AngleUnit::Turns: return 2.0 * std::numbers::pi * value;
    case AngleUnit::HalfTurns: return std::numbers::pi * value;
    case AngleUnit::Radians: return value;
  }
  return value;
}

std::size_t AnsatzConfig::qubits_for(const std::string& base) const {
  auto it = qubits_per_type.find(base);
  if (it == qubits_per_type.end()) {
    throw Error(ErrorCode::InvalidInput, "no qubit count for type '" + base + "'");
  }
  return it->second;
}

std::size_t AnsatzConfig::wire_count(const PregroupType& type) const {
  std::size_t w = 0;
  for (const auto& s : type.simples) w += qubits_for(s.base);
  return w;
}

bool AnsatzConfig::connector_mode() const { return qubits_for(sentence_type) > 0; }

void AnsatzConfig::validate() const {
  if (depth < 1) throw Error(ErrorCode::InvalidInput, "depth must be at least 1");
  bool any = false;
  for (const auto& [name, q] : qubits_per_type) any = any || q > 0;
  if (!any) throw Error(ErrorCode::InvalidInput, "every type has zero qubits");
  if (qubits_for(sentence_type) > 1) {
    throw Error(ErrorCode::InvalidInput, "the sentence type takes 0 or 1 qubits");
  }
}

AnsatzConfig parse_ansatz_config(const std::string& json_text) {
  AnsatzConfig cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("ansatz config: ") + e.what());
  }
  if (j.contains("qubits_per_type")) {
    cfg.qubits_per_type.clear();
    for (const auto& [k, v] : j["qubits_per_type"].items()) {
      cfg.qubits_per_type[k] = v.get<std::size_t>();
    }
  }
  if (j.contains("depth")) cfg.depth = j["depth"].get<std::size_t>();
  if (j.contains("angle_unit")) cfg.angle_unit = parse_angle_unit(j["angle_unit"].get<std::string>());
  if (j.contains("sentence_type")) cfg.sentence_type = j["sentence_type"].get<std::string>();
  cfg.validate();
  return cfg;
}

AnsatzConfig load_ansatz_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open ansatz config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ansatz_config(buf.str());
}

std::string ansatz_config_json(const AnsatzConfig& config) {
  nlohmann::json j;
  j["qubits_per_type"] = config.qubits_per_type;
  j["depth"] = config.depth;
  j["angle_unit"] = to_string(config.angle_unit);
  j["sentence_type"] = config.sentence_type;
  return j.dump();
}

std::string ParamSlot::name() const {
  if (layer == 0) return word;
  return word + "@" + std::to_string(layer) + "." + std::to_string(pair);
}

namespace {

std::size_t base_slots(std::size_t wires) { return wires == 0 || wires == 3 ? 0 : 1; }
std::size_t layer_slots(std::size_t wires) { return wires == 0 ? 0 : (wires == 1 ? 1 : wires - 1); }

}  // namespace

std::size_t slot_count(std::size_t wires, std::size_t depth) {
  return base_slots(wires) + (depth - 1) * layer_slots(wires);
}

ParamLayout::ParamLayout(const Vocabulary& vocabulary, const AnsatzConfig& config) {
  config.validate();
  for (const auto& w : vocabulary.entries()) {
    const std::size_t wires = config.wire_count(w.type);
    if (wires > 3 && config.depth == 1) {
      throw Error(ErrorCode::UnsupportedArity,
                  "'" + w.surface + "' needs " + std::to_string(wires) + " wires at depth 1");
    }
    Entry e{slots_.size(), slot_count(wires, config.depth), wires};
    for (std::size_t k = 0; k < base_slots(wires); ++k) slots_.push_back({w.surface, 0, 0});
    for (std::size_t layer = 1; layer < config.depth; ++layer) {
      for (std::size_t p = 0; p < layer_slots(wires); ++p) slots_.push_back({w.surface, layer, p});
    }
    entries_.emplace(w.surface, e);
  }
}

std::size_t ParamLayout::offset(const std::string& word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) throw Error(ErrorCode::VocabularyMiss, "'" + word + "' has no circuit");
  return it->second.offset;
}

std::size_t ParamLayout::count(const std::string& word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) throw Error(ErrorCode::VocabularyMiss, "'" + word + "' has no circuit");
  return it->second.count;
}

std::size_t ParamLayout::wires(const std::string& word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) throw Error(ErrorCode::VocabularyMiss, "'" + word + "' has no circuit");
  return it->second.wires;
}

WordFragment word_circuit(const TypedWord& word, const AnsatzConfig& config,
                          const std::vector<double>& params) {
  WordFragment f;
  f.wires = config.wire_count(word.type);
  const std::size_t d = config.depth;
  if (d < 1) throw Error(ErrorCode::InvalidInput, "depth must be at least 1");
  if (f.wires > 3 && d == 1) {
    throw Error(ErrorCode::UnsupportedArity,
                "'" + word.surface + "' needs " + std::to_string(f.wires) + " wires at depth 1");
  }
  if (params.size() != slot_count(f.wires, d)) {
    throw Error(ErrorCode::InvalidInput, "'" + word.surface + "' takes " +
                                             std::to_string(slot_count(f.wires, d)) +
                                             " parameters, got " + std::to_string(params.size()));
  }
  auto angle = [&](std::size_t k) { return to_radians(params[k], config.angle_unit); };

  std::size_t k = 0;
  switch (f.wires) {
    case 0:
      break;
    case 1:
      f.gates.push_back(Gate::rx(0, angle(k++)));
      break;
    case 2:
      f.gates.push_back(Gate::h(0));
      f.gates.push_back(Gate::cnot(0, 1));
      f.gates.push_back(Gate::rx(0, angle(k++)));
      f.scale = std::sqrt(2.0);
      break;
    case 3:
      f.gates.push_back(Gate::h(0));
      f.gates.push_back(Gate::cnot(0, 1));
      f.gates.push_back(Gate::cnot(1, 2));
      f.scale = std::sqrt(2.0);
      break;
    default:
      f.gates.push_back(Gate::rx(0, angle(k++)));
      break;
  }
  for (std::size_t layer = 1; layer < d && f.wires > 0; ++layer) {
    for (std::size_t q = 0; q < f.wires; ++q) f.gates.push_back(Gate::h(q));
    if (f.wires == 1) {
      f.gates.push_back(Gate::rz(0, angle(k++)));
    } else {
      for (std::size_t q = 0; q + 1 < f.wires; ++q) f.gates.push_back(Gate::crz(q, q + 1, angle(k++)));
    }
  }
  return f;
}

StateVector fragment_state(const WordFragment& fragment) {
  StateVector s = StateVector::zeros(fragment.wires);
  for (const auto& g : fragment.gates) apply(s, g);
  return s;
}

ComplexWordTensor word_tensor(const TypedWord& word, const AnsatzConfig& config,
                              const std::vector<double>& params) {
  const auto fragment = word_circuit(word, config, params);
  const auto state = fragment_state(fragment);
  ComplexWordTensor t;
  t.word = word.surface;
  for (const auto& s : word.type.simples) t.shape.push_back(std::size_t{1} << config.qubits_for(s.base));
  t.data = state.amplitudes;
  for (auto& a : t.data) a *= fragment.scale;
  return t;
}

std::vector<double> word_params(const ParamLayout& layout, const std::string& word,
                                const std::vector<double>& params) {
  if (params.size() != layout.size()) {
    throw Error(ErrorCode::InvalidInput, "expected " + std::to_string(layout.size()) +
                                             " parameters, got " + std::to_string(params.size()));
  }
  const auto off = layout.offset(word);
  const auto n = layout.count(word);
  return {params.begin() + static_cast<std::ptrdiff_t>(off),
          params.begin() + static_cast<std::ptrdiff_t>(off + n)};
}

SentenceCircuit sentence_circuit(const ReductionDiagram& diagram, const ParamLayout& layout,
                                 const AnsatzConfig& config, const std::vector<double>& params) {
  SentenceCircuit out;
  const auto simples = diagram.flattened();

  // First wire of every flattened simple.
  std::vector<std::size_t> simple_wire;
  std::size_t width = 0;
  for (const auto& s : simples) {
    simple_wire.push_back(width);
    width += config.qubits_for(s.base);
  }
  if (width > kMaxWidth) {
    throw Error(ErrorCode::WidthExceeded, "'" + surface_of(diagram.words) + "' needs " +
                                              std::to_string(width) + " qubits");
  }
  out.circuit.width = width;

  std::size_t wire = 0;
  for (const auto& w : diagram.words) {
    if (!layout.contains(w.surface)) {
      throw Error(ErrorCode::VocabularyMiss, "'" + w.surface + "' is not in the vocabulary");
    }
    const auto fragment = word_circuit(w, config, word_params(layout, w.surface, params));
    out.word_first_wire.push_back(wire);
    for (auto g : fragment.gates) {
      g.target += wire;
      if (g.is_controlled()) g.control += wire;
      out.circuit.gates.push_back(g);
    }
    out.scale *= fragment.scale;
    wire += fragment.wires;
  }

  for (const auto& link : diagram.links) {
    const std::size_t q = config.qubits_for(simples[link.left].base);
    for (std::size_t k = 0; k < q; ++k) {
      const std::size_t a = simple_wire[link.left] + k;
      const std::size_t b = simple_wire[link.right] + k;
      out.circuit.gates.push_back(Gate::cnot(a, b));
      out.circuit.gates.push_back(Gate::h(a));
      out.circuit.postselections.push_back({a, 0});
      out.circuit.postselections.push_back({b, 0});
      out.scale *= std::sqrt(2.0);
    }
  }
  for (auto r : diagram.residue) {
    const std::size_t q = config.qubits_for(simples[r].base);
    for (std::size_t k = 0; k < q; ++k) out.circuit.measured.push_back(simple_wire[r] + k);
  }
  out.circuit.validate();
  return out;
}

std::vector<ComplexWordTensor> sentence_tensors(const ReductionDiagram& diagram,
                                                const ParamLayout& layout,
                                                const AnsatzConfig& config,
                                                const std::vector<double>& params) {
  std::vector<ComplexWordTensor> out;
  for (const auto& w : diagram.words) {
    if (!layout.contains(w.surface)) {
      throw Error(ErrorCode::VocabularyMiss, "'" + w.surface + "' is not in the vocabulary");
    }
    out.push_back(word_tensor(w, config, word_params(layout, w.surface, params)));
  }
  return out;
}

ConnectorSetup connector_vocabulary(const Vocabulary& base, const AnsatzConfig& config,
                                    const ConnectorOptions& options) {
  ConnectorSetup out{base, config};
  out.config.qubits_per_type[config.sentence_type] = 1;
  const std::string& s = config.sentence_type;
  const std::string n = "n";
  for (const auto& neg : options.negations) {
    if (!out.vocabulary.find(neg)) {
      out.vocabulary.add(TypedWord(neg, PregroupType{{SimpleType(n, 1), SimpleType(n, 0)}}));
    }
  }
  for (const auto& conj : options.conjunctions) {
    if (!out.vocabulary.find(conj)) {
      const std::string right = options.sentence_to_sentence ? s : n;
      out.vocabulary.add(TypedWord(conj, PregroupType{{SimpleType(s, 1), SimpleType(right, 0)}}));
    }
  }
  return out;
}

}  // namespace qnlp
