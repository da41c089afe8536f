#include "qnlp/qa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qnlp/error.hpp"
#include "qnlp/meaning.hpp"

namespace qnlp {

QaModel::QaModel(Vocabulary vocabulary, AnsatzConfig config, Backend backend)
    : vocabulary_(std::move(vocabulary)),
      config_(std::move(config)),
      layout_(vocabulary_, config_),
      backend_(backend) {}

CompiledSentence QaModel::compile(const std::string& text) const {
  const auto words = vocabulary_.tokenize(text);
  return {text, reduce_or_throw(words, AtomicType(config_.sentence_type))};
}

std::vector<Complex> QaModel::raw_output(const std::vector<double>& params,
                                         const CompiledSentence& sentence) const {
  if (backend_ == Backend::Tensor) {
    const auto tensors = sentence_tensors(sentence.diagram, layout_, config_, params);
    return csc_meaning(tensors, sentence.diagram).data;
  }
  const auto sc = sentence_circuit(sentence.diagram, layout_, config_, params);
  const auto state = simulate(sc.circuit);
  auto projected = project(state, sc.circuit.postselections).amplitudes;
  for (auto& a : projected) a *= sc.scale;
  return projected;
}

Prediction QaModel::predict(const std::vector<double>& params,
                            const CompiledSentence& sentence) const {
  const auto out = raw_output(params, sentence);
  Prediction p;
  if (out.size() == 1) {
    p.probability = std::min(1.0, std::norm(out[0]));
  } else {
    double total = 0.0;
    for (const auto& a : out) total += std::norm(a);
    if (std::sqrt(total) < kZeroProbabilityNorm) {
      p.probability = 0.5;
      p.zero_probability = true;
    } else {
      p.probability = std::norm(out[1]) / total;
    }
  }
  p.label = p.probability >= 0.5 ? 1 : 0;
  return p;
}

Prediction QaModel::predict(const std::vector<double>& params, const std::string& text) const {
  return predict(params, compile(text));
}

LabeledDataset parse_dataset(const std::string& text) {
  LabeledDataset data;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "dataset line " + std::to_string(lineno) + " has no TAB");
    }
    std::string label = line.substr(tab + 1);
    label.erase(0, label.find_first_not_of(' '));
    label.erase(label.find_last_not_of(' ') + 1);
    if (label != "0" && label != "1") {
      throw Error(ErrorCode::InvalidInput, "dataset line " + std::to_string(lineno) +
                                               " label must be 0 or 1");
    }
    std::string sentence = line.substr(0, tab);
    sentence.erase(sentence.find_last_not_of(' ') + 1);
    sentence.erase(0, sentence.find_first_not_of(' '));
    data.items.push_back({sentence, label == "1" ? 1 : 0});
  }
  return data;
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open dataset " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string dataset_tsv(const LabeledDataset& data) {
  std::ostringstream out;
  for (const auto& item : data.items) out << item.sentence << '\t' << item.label << '\n';
  return out.str();
}

void split_dataset(LabeledDataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "train fraction must lie in [0, 1]");
  }
  const std::size_t n = data.items.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  data.in_train.assign(n, false);
  for (std::size_t k = 0; k < n_train; ++k) data.in_train[order[k]] = true;
  data.seed = seed;
}

LabeledDataset self_label(const QaModel& model, const std::vector<double>& params,
                          const std::vector<std::string>& sentences) {
  LabeledDataset out;
  for (const auto& s : sentences) out.items.push_back({s, model.predict(params, s).label});
  return out;
}

double loss(const QaModel& model, const std::vector<double>& params,
            const std::vector<CompiledSentence>& sentences, const std::vector<int>& labels,
            const std::vector<std::size_t>& indices) {
  if (indices.empty()) return 0.0;
  double sum = 0.0;
  for (auto i : indices) {
    const double d = model.predict(params, sentences[i]).probability - labels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(indices.size());
}

Trainer::Trainer(const QaModel& model, const LabeledDataset& data) : model_(model) {
  for (std::size_t i = 0; i < data.items.size(); ++i) {
    sentences_.push_back(model.compile(data.items[i].sentence));
    labels_.push_back(data.items[i].label);
    const bool train = data.in_train.empty() || data.in_train[i];
    (train ? train_ : test_).push_back(i);
  }
}

double Trainer::train_loss(const std::vector<double>& params) const {
  return loss(model_, params, sentences_, labels_, train_);
}

TrainReport Trainer::evaluate(const std::vector<double>& params) const {
  TrainReport r;
  r.best_params = params;
  r.best_loss = train_loss(params);
  auto count = [&](const std::vector<std::size_t>& idx) {
    std::size_t correct = 0;
    for (auto i : idx) {
      const auto p = model_.predict(params, sentences_[i]);
      if (p.zero_probability) ++r.zero_probability_events;
      if (p.label == labels_[i]) ++correct;
    }
    return correct;
  };
  r.train_correct = count(train_);
  r.test_correct = count(test_);
  r.train_size = train_.size();
  r.test_size = test_.size();
  r.train_score = train_.empty() ? 0.0 : static_cast<double>(r.train_correct) / train_.size();
  if (!test_.empty()) r.test_score = static_cast<double>(r.test_correct) / test_.size();
  const std::size_t total = train_.size() + test_.size();
  r.total_score = total == 0 ? 0.0 : static_cast<double>(r.train_correct + r.test_correct) / total;
  return r;
}

TrainReport Trainer::spsa(const std::vector<double>& init, const SpsaOptions& o) const {
  if (o.iterations < 1) throw Error(ErrorCode::InvalidInput, "iterations must be at least 1");
  if (init.size() != model_.param_count()) {
    throw Error(ErrorCode::InvalidInput, "initial parameter vector has the wrong length");
  }
  std::mt19937_64 rng(o.seed);
  std::bernoulli_distribution coin(0.5);
  const double A = 0.1 * static_cast<double>(o.iterations);
  const std::size_t n = init.size();

  std::vector<double> theta = init;
  std::vector<double> best = theta;
  double best_loss = train_loss(theta);
  std::vector<double> curve;
  curve.reserve(o.iterations);

  std::vector<double> delta(n), plus(n), minus(n);
  for (std::size_t k = 0; k < o.iterations; ++k) {
    const double ak = o.a / std::pow(static_cast<double>(k) + 1.0 + A, o.alpha);
    const double ck = o.c / std::pow(static_cast<double>(k) + 1.0, o.gamma);
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = coin(rng) ? 1.0 : -1.0;
      plus[i] = theta[i] + ck * delta[i];
      minus[i] = theta[i] - ck * delta[i];
    }
    if (n > 0) {
      const double diff = train_loss(plus) - train_loss(minus);
      for (std::size_t i = 0; i < n; ++i) theta[i] -= ak * diff / (2.0 * ck * delta[i]);
    }
    const double current = train_loss(theta);
    curve.push_back(current);
    if (current < best_loss) {
      best_loss = current;
      best = theta;
    }
  }

  TrainReport r = evaluate(best);
  r.loss_curve = std::move(curve);
  r.best_loss = best_loss;
  r.seed = o.seed;
  return r;
}

std::vector<double> random_params(std::size_t n, double range, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, range);
  std::vector<double> out(n);
  for (auto& v : out) v = u(rng);
  return out;
}

TrainReport Trainer::random_search(const RandomSearchOptions& o) const {
  if (o.samples < 1) throw Error(ErrorCode::InvalidInput, "samples must be at least 1");
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, o.range);
  const std::size_t n = model_.param_count();

  std::vector<double> best;
  double best_loss = 0.0;
  std::vector<double> curve;
  curve.reserve(o.samples);
  std::vector<double> theta(n);
  for (std::size_t k = 0; k < o.samples; ++k) {
    for (auto& v : theta) v = u(rng);
    const double l = train_loss(theta);
    curve.push_back(l);
    if (k == 0 || l < best_loss) {
      best_loss = l;
      best = theta;
    }
  }
  TrainReport r = evaluate(best);
  r.loss_curve = std::move(curve);
  r.best_loss = best_loss;
  r.seed = o.seed;
  return r;
}

std::string report_json(const TrainReport& r, const std::string& config_json) {
  nlohmann::json j;
  j["config"] = config_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(config_json);
  j["seed"] = r.seed;
  j["train_score"] = r.train_score;
  j["test_score"] = r.test_score ? nlohmann::json(*r.test_score) : nlohmann::json(nullptr);
  j["total_score"] = r.total_score;
  j["train_correct"] = r.train_correct;
  j["test_correct"] = r.test_correct;
  j["train_size"] = r.train_size;
  j["test_size"] = r.test_size;
  j["best_loss"] = r.best_loss;
  j["best_params"] = r.best_params;
  j["zero_probability_events"] = r.zero_probability_events;
  j["loss_curve"] = r.loss_curve;
  return j.dump(2);
}

std::string loss_curve_csv(const TrainReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,mean_loss\n";
  for (std::size_t i = 0; i < r.loss_curve.size(); ++i) out << i << ',' << r.loss_curve[i] << '\n';
  return out.str();
}

}  // namespace qnlp
