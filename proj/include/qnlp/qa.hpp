#pragma once

// Truth-value prediction from sentence circuits, and parameter training.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnlp/ansatz.hpp"
#include "qnlp/pregroup.hpp"

namespace qnlp {

// Statevector runs the compiled circuit. Tensor contracts the same word
// fragments directly and gives the same numbers much faster.
enum class Backend { Statevector, Tensor };

struct Prediction {
  double probability = 0.0;
  int label = 0;
  bool zero_probability = false;
};

struct CompiledSentence {
  std::string text;
  ReductionDiagram diagram;
};

class QaModel {
 public:
  QaModel(Vocabulary vocabulary, AnsatzConfig config, Backend backend = Backend::Tensor);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  const AnsatzConfig& config() const { return config_; }
  const ParamLayout& layout() const { return layout_; }
  Backend backend() const { return backend_; }
  void set_backend(Backend b) { backend_ = b; }
  std::size_t param_count() const { return layout_.size(); }

  // Throws VocabularyMiss / NoParse.
  CompiledSentence compile(const std::string& text) const;

  // Scalar mode: p = min(1, |value|^2). Connector mode: p = P(s = 1) given
  // every cap succeeded, 0.5 when the caps have zero probability. label is
  // p >= 0.5.
  Prediction predict(const std::vector<double>& params, const CompiledSentence& sentence) const;
  Prediction predict(const std::vector<double>& params, const std::string& text) const;

  // Sentence value before squaring (scalar mode) and the unnormalized
  // s-wire amplitudes (connector mode).
  std::vector<Complex> raw_output(const std::vector<double>& params,
                                  const CompiledSentence& sentence) const;

 private:
  Vocabulary vocabulary_;
  AnsatzConfig config_;
  ParamLayout layout_;
  Backend backend_;
};

struct LabeledItem {
  std::string sentence;
  int label = 0;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  std::vector<bool> in_train;  // empty means everything is training data
  std::uint64_t seed = 0;
};

// Lines "sentence<TAB>0|1"; blank lines and '#' comments skipped.
LabeledDataset parse_dataset(const std::string& text);
LabeledDataset load_dataset(const std::string& path);
std::string dataset_tsv(const LabeledDataset& data);

// Seeded shuffle; the first round(fraction * size) items train.
void split_dataset(LabeledDataset& data, double train_fraction, std::uint64_t seed);

LabeledDataset self_label(const QaModel& model, const std::vector<double>& params,
                          const std::vector<std::string>& sentences);

// Mean of (p - label)^2 over the given item indices; 0 for no items.
double loss(const QaModel& model, const std::vector<double>& params,
            const std::vector<CompiledSentence>& sentences, const std::vector<int>& labels,
            const std::vector<std::size_t>& indices);

struct TrainReport {
  std::vector<double> loss_curve;
  double train_score = 0.0;
  std::optional<double> test_score;
  double total_score = 0.0;
  std::size_t train_correct = 0;
  std::size_t test_correct = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<double> best_params;
  double best_loss = 0.0;
  std::size_t zero_probability_events = 0;
  std::uint64_t seed = 0;
};

struct SpsaOptions {
  std::size_t iterations = 500;
  double a = 1.0;
  double c = 0.1;
  double alpha = 0.602;
  double gamma = 0.101;
  std::uint64_t seed = 0;
};

struct RandomSearchOptions {
  std::size_t samples = 2000;
  double range = 1.0;
  std::uint64_t seed = 0;
};

// Compiles every item once; throws on the first sentence that fails.
class Trainer {
 public:
  Trainer(const QaModel& model, const LabeledDataset& data);

  const std::vector<std::size_t>& train_indices() const { return train_; }
  const std::vector<std::size_t>& test_indices() const { return test_; }
  double train_loss(const std::vector<double>& params) const;

  // Scores for fixed parameters; loss_curve is left empty.
  TrainReport evaluate(const std::vector<double>& params) const;

  TrainReport spsa(const std::vector<double>& init, const SpsaOptions& options) const;
  TrainReport random_search(const RandomSearchOptions& options) const;

 private:
  const QaModel& model_;
  std::vector<CompiledSentence> sentences_;
  std::vector<int> labels_;
  std::vector<std::size_t> train_;
  std::vector<std::size_t> test_;
};

// Uniform draw in [0, range) per parameter.
std::vector<double> random_params(std::size_t n, double range, std::uint64_t seed);

std::string report_json(const TrainReport& report, const std::string& config_json);
std::string loss_curve_csv(const TrainReport& report);

}  // namespace qnlp
