#pragma once

// Positive operators for words and sentences: Loewner order, graded
// hyponymy, negation and simple sentence composition.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qnlp {

inline constexpr double kPsdTolerance = 1e-9;
inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kGradedPrecision = 1e-6;

// Real symmetric positive semidefinite matrix. Construction checks symmetry
// (relative to the largest entry) and the smallest eigenvalue.
class PositiveOperator {
 public:
  explicit PositiveOperator(Eigen::MatrixXd m);

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  Eigen::MatrixXd m_;
};

double min_eigenvalue(const Eigen::MatrixXd& symmetric);
double max_eigenvalue(const Eigen::MatrixXd& symmetric);

// Throws ZeroVector.
PositiveOperator pure_operator(const Eigen::VectorXd& v);
// Throws EmptyHyponymSet, DimensionMismatch.
PositiveOperator hyperonym_operator(const std::vector<Eigen::VectorXd>& hyponyms);

// B - A has no eigenvalue below -tol.
bool loewner_leq(const PositiveOperator& a, const PositiveOperator& b, double tol = kPsdTolerance);

// Largest k in [0, 1] with B - kA positive, by bisection. Throws ZeroOperator.
double graded_hyponymy(const PositiveOperator& a, const PositiveOperator& b);

// Divides by the largest eigenvalue. Throws ZeroOperator.
PositiveOperator normalize(const PositiveOperator& w);

// I - W. Throws InvalidInput when the largest eigenvalue of W exceeds 1.
PositiveOperator negate(const PositiveOperator& w);

enum class CompositionModel { VerbOnly, Addition, Mult };

CompositionModel parse_composition_model(const std::string& text);
std::string to_string(CompositionModel model);

// The verb is either a noun-space operator (d x d) or an operator on the
// subject-object space (d^2 x d^2), which is reduced to its subject marginal
// by tracing out the object factor. Results are normalized.
PositiveOperator verb_marginal(const PositiveOperator& verb, Eigen::Index noun_dim);

PositiveOperator compose_sentence(const PositiveOperator& subject, const PositiveOperator& verb,
                                  const std::optional<PositiveOperator>& object,
                                  CompositionModel model);

struct Entailment {
  bool crisp = false;
  double k = 0.0;
};

// Both sides are normalized first.
Entailment entails(const PositiveOperator& premise, const PositiveOperator& hypothesis);

struct WordSpace {
  std::vector<std::string> basis;
  std::map<std::string, Eigen::VectorXd> vectors;
  std::map<std::string, std::vector<std::string>> hyperonyms;

  // A hyperonym becomes the sum of its hyponyms' pure operators; any other
  // word its pure operator. Throws UnknownWord.
  PositiveOperator word_operator(const std::string& word) const;
};

// {"basis": [...], "vectors": {word: [...]}, "hyperonyms": {word: [...]}}
WordSpace parse_word_space(const std::string& json_text);
WordSpace load_word_space(const std::string& path);

}  // namespace qnlp
