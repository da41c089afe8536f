#include "qnlp/positive.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnlp/error.hpp"

namespace qnlp {

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

PositiveOperator::PositiveOperator(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "operator must be a non-empty square matrix");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::InvalidInput, "operator is not symmetric");
  }
  m_ = 0.5 * (m_ + m_.transpose());
  if (qnlp::min_eigenvalue(m_) < -kPsdTolerance * scale) {
    throw Error(ErrorCode::InvalidInput, "operator is not positive semidefinite");
  }
}

double PositiveOperator::min_eigenvalue() const { return qnlp::min_eigenvalue(m_); }
double PositiveOperator::max_eigenvalue() const { return qnlp::max_eigenvalue(m_); }

PositiveOperator pure_operator(const Eigen::VectorXd& v) {
  if (v.size() == 0 || v.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "vector is zero");
  return PositiveOperator(v * v.transpose());
}

PositiveOperator hyperonym_operator(const std::vector<Eigen::VectorXd>& hyponyms) {
  if (hyponyms.empty()) throw Error(ErrorCode::EmptyHyponymSet, "no hyponyms given");
  const auto d = hyponyms.front().size();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  for (const auto& v : hyponyms) {
    if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "hyponyms differ in dimension");
    sum += v * v.transpose();
  }
  return PositiveOperator(sum);
}

namespace {

void same_dim(const PositiveOperator& a, const PositiveOperator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "operators differ in dimension");
}

}  // namespace

bool loewner_leq(const PositiveOperator& a, const PositiveOperator& b, double tol) {
  same_dim(a, b);
  return min_eigenvalue(b.matrix() - a.matrix()) >= -tol;
}

double graded_hyponymy(const PositiveOperator& a, const PositiveOperator& b) {
  same_dim(a, b);
  if (a.matrix().isZero(0.0)) throw Error(ErrorCode::ZeroOperator, "hyponym operator is zero");
  if (loewner_leq(a, b)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kGradedPrecision / 4) {
    const double mid = 0.5 * (lo + hi);
    if (min_eigenvalue(b.matrix() - mid * a.matrix()) >= -kPsdTolerance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

PositiveOperator normalize(const PositiveOperator& w) {
  const double top = w.max_eigenvalue();
  if (top <= kPsdTolerance) throw Error(ErrorCode::ZeroOperator, "cannot normalize a zero operator");
  return PositiveOperator(w.matrix() / top);
}

PositiveOperator negate(const PositiveOperator& w) {
  if (w.max_eigenvalue() > 1.0 + kPsdTolerance) {
    throw Error(ErrorCode::InvalidInput, "negation needs the largest eigenvalue at most 1");
  }
  const auto d = w.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(d, d) - w.matrix();
  return PositiveOperator(out);
}

CompositionModel parse_composition_model(const std::string& text) {
  if (text == "verb_only") return CompositionModel::VerbOnly;
  if (text == "addition") return CompositionModel::Addition;
  if (text == "mult") return CompositionModel::Mult;
  throw Error(ErrorCode::InvalidInput, "unknown composition model '" + text + "'");
}

std::string to_string(CompositionModel model) {
  switch (model) {
    case CompositionModel::VerbOnly: return "verb_only";
    case CompositionModel::Addition: return "addition";
    case CompositionModel::Mult: return "mult";
  }
  return "?";
}

PositiveOperator verb_marginal(const PositiveOperator& verb, Eigen::Index d) {
  if (verb.dim() == d) return normalize(verb);
  if (verb.dim() != d * d) {
    throw Error(ErrorCode::DimensionMismatch, "verb operator matches neither d nor d^2");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  const auto& v = verb.matrix();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) m(i, j) += v(i * d + k, j * d + k);
    }
  }
  return normalize(PositiveOperator(m));
}

PositiveOperator compose_sentence(const PositiveOperator& subject, const PositiveOperator& verb,
                                  const std::optional<PositiveOperator>& object,
                                  CompositionModel model) {
  const auto d = subject.dim();
  if (object && object->dim() != d) {
    throw Error(ErrorCode::DimensionMismatch, "subject and object differ in dimension");
  }
  const auto v = verb_marginal(verb, d);
  switch (model) {
    case CompositionModel::VerbOnly:
      return v;
    case CompositionModel::Addition: {
      Eigen::MatrixXd sum = subject.matrix() + v.matrix();
      if (object) sum += object->matrix();
      return normalize(PositiveOperator(sum));
    }
    case CompositionModel::Mult: {
      Eigen::MatrixXd prod = subject.matrix().cwiseProduct(v.matrix());
      if (object) prod = prod.cwiseProduct(object->matrix());
      return normalize(PositiveOperator(prod));
    }
  }
  return v;
}

Entailment entails(const PositiveOperator& premise, const PositiveOperator& hypothesis) {
  const auto a = normalize(premise);
  const auto b = normalize(hypothesis);
  return {loewner_leq(a, b), graded_hyponymy(a, b)};
}

PositiveOperator WordSpace::word_operator(const std::string& word) const {
  if (auto it = hyperonyms.find(word); it != hyperonyms.end()) {
    std::vector<Eigen::VectorXd> hyponyms;
    for (const auto& h : it->second) {
      auto v = vectors.find(h);
      if (v == vectors.end()) throw Error(ErrorCode::UnknownWord, "'" + h + "' has no vector");
      hyponyms.push_back(v->second);
    }
    return hyperonym_operator(hyponyms);
  }
  auto v = vectors.find(word);
  if (v == vectors.end()) throw Error(ErrorCode::UnknownWord, "'" + word + "' has no vector");
  return pure_operator(v->second);
}

WordSpace parse_word_space(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("word space JSON: ") + e.what());
  }
  WordSpace ws;
  ws.basis = j.at("basis").get<std::vector<std::string>>();
  for (const auto& [word, arr] : j.at("vectors").items()) {
    const auto values = arr.get<std::vector<double>>();
    if (values.size() != ws.basis.size()) {
      throw Error(ErrorCode::DimensionMismatch, "'" + word + "' does not match the basis size");
    }
    ws.vectors[word] = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                         static_cast<Eigen::Index>(values.size()));
  }
  if (j.contains("hyperonyms")) {
    for (const auto& [word, list] : j["hyperonyms"].items()) {
      ws.hyperonyms[word] = list.get<std::vector<std::string>>();
    }
  }
  return ws;
}

WordSpace load_word_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open word space " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_word_space(buf.str());
}

}  // namespace qnlp
