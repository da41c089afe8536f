#include "qnlp/positive.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qnlp/error.hpp"
#include "support.hpp"

using namespace qnlp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(xs.size());
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

MatrixXd random_psd(Eigen::Index d, Eigen::Index rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd m = MatrixXd::Zero(d, d);
  for (Eigen::Index r = 0; r < rank; ++r) {
    VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = g(rng);
    m += v * v.transpose();
  }
  return m;
}

// Largest k in [0, 1] with B - kA PSD, from the pseudo-inverse square root of
// B: zero when A reaches outside B's support, else 1 / max eig(B^-1/2 A B^-1/2).
double generalized_eigen_k(const MatrixXd& a, const MatrixXd& b) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b);
  const double tol = 1e-9 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const Eigen::Index d = b.rows();
  MatrixXd half_inv = MatrixXd::Zero(d, d), support = MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) > tol) {
      const VectorXd u = es.eigenvectors().col(i);
      half_inv += u * u.transpose() / std::sqrt(es.eigenvalues()(i));
      support += u * u.transpose();
    }
  }
  const MatrixXd outside = MatrixXd::Identity(d, d) - support;
  if ((outside * a * outside).norm() > 1e-9 * std::max(1.0, a.norm())) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> g(half_inv * a * half_inv);
  const double top = g.eigenvalues().maxCoeff();
  return top <= 1.0 ? 1.0 : 1.0 / top;
}

WordSpace pets() { return load_word_space(test::fixture("wordspace_pets.json")); }

}  // namespace

TEST(Operator, Validation) {
  MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  EXPECT_THROW(PositiveOperator{asym}, Error);
  MatrixXd neg(2, 2);
  neg << 1, 0, 0, -1;
  EXPECT_THROW(PositiveOperator{neg}, Error);
  EXPECT_THROW(PositiveOperator{MatrixXd(2, 3)}, Error);
  MatrixXd ok(2, 2);
  ok << 2, 1, 1, 2;
  PositiveOperator p(ok);
  EXPECT_NEAR(p.min_eigenvalue(), 1.0, 1e-12);
  EXPECT_NEAR(p.max_eigenvalue(), 3.0, 1e-12);
}

TEST(Operator, PureAndHyperonym) {
  auto pug = pure_operator(vec({3, 4, 0, 0}));
  EXPECT_EQ(pug.matrix()(0, 0), 9);
  EXPECT_EQ(pug.matrix()(0, 1), 12);
  EXPECT_EQ(pug.matrix()(1, 1), 16);

  auto pet = hyperonym_operator({vec({3, 4, 0, 0}), vec({0, 5, 0, 6}), vec({5, 5, 0, 0})});
  MatrixXd expected(4, 4);
  expected << 34, 37, 0, 0, 37, 66, 0, 30, 0, 0, 0, 0, 0, 30, 0, 36;
  EXPECT_EQ(pet.matrix(), expected);

  EXPECT_TRUE(loewner_leq(pug, pet));
  EXPECT_FALSE(loewner_leq(pet, pug));

  try {
    pure_operator(VectorXd::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
  try {
    hyperonym_operator({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyHyponymSet);
  }
  EXPECT_THROW(hyperonym_operator({vec({1, 0}), vec({1, 0, 0})}), Error);
}

TEST(Operator, WordSpaceFixture) {
  auto ws = pets();
  EXPECT_EQ(ws.basis.size(), 4u);
  auto pet = ws.word_operator("pet");
  EXPECT_EQ(pet.matrix()(1, 3), 30);
  EXPECT_DOUBLE_EQ(graded_hyponymy(ws.word_operator("pug"), pet), 1.0);
  EXPECT_THROW(ws.word_operator("dragon"), Error);
  EXPECT_THROW(parse_word_space("{"), Error);
}

TEST(Graded, WorkedValues) {
  MatrixXd a(2, 2), b(2, 2);
  a << 1, 0, 0, 1;
  b << 0.5, 0, 0, 1;
  EXPECT_NEAR(graded_hyponymy(PositiveOperator(a), PositiveOperator(b)), 0.5, 1e-6);
  // Orthogonal supports give 0.
  auto x = pure_operator(vec({1, 0})), y = pure_operator(vec({0, 1}));
  EXPECT_NEAR(graded_hyponymy(x, y), 0.0, 1e-6);
  EXPECT_THROW(graded_hyponymy(PositiveOperator(MatrixXd::Zero(2, 2)), y), Error);
  EXPECT_THROW(graded_hyponymy(x, PositiveOperator(MatrixXd::Identity(3, 3))), Error);
}

TEST(Graded, BisectionMatchesGeneralizedEigenOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 2 + rng() % 4;
    const MatrixXd a = random_psd(d, 1 + rng() % d, rng);
    // Full-rank B; half of the cases add a multiple of A so k lands in (0, 1].
    MatrixXd b = random_psd(d, d, rng);
    if (trial % 2) b += (0.2 + 0.8 * (rng() % 1000) / 1000.0) * a;
    const double k = graded_hyponymy(PositiveOperator(a), PositiveOperator(b));
    ASSERT_NEAR(k, generalized_eigen_k(a, b), 1e-5) << trial;
    ASSERT_GE(k, 0.0);
    ASSERT_LE(k, 1.0);
  }
}

TEST(Graded, CrispConsistency) {
  std::mt19937_64 rng(78);
  int crisp = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 2 + rng() % 3;
    const MatrixXd a = random_psd(d, 1 + rng() % d, rng);
    MatrixXd b = random_psd(d, d, rng);
    if (trial % 2) b += a;
    PositiveOperator pa(a), pb(b);
    const bool leq = loewner_leq(pa, pb);
    const double k = graded_hyponymy(pa, pb);
    ASSERT_EQ(leq, k == 1.0) << trial;
    crisp += leq;
  }
  EXPECT_GT(crisp, 400);
}

TEST(Properties, PsdClosure) {
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> u(0, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 1 + rng() % 5;
    PositiveOperator a(random_psd(d, 1 + rng() % d, rng)), b(random_psd(d, 1 + rng() % d, rng));
    ASSERT_NO_THROW(PositiveOperator(a.matrix() + b.matrix()));
    ASSERT_NO_THROW(PositiveOperator(u(rng) * a.matrix()));
    ASSERT_NO_THROW(PositiveOperator(a.matrix().cwiseProduct(b.matrix())));
    auto n = normalize(a);
    ASSERT_NEAR(n.max_eigenvalue(), 1.0, 1e-9);
    auto neg = negate(n);
    ASSERT_GE(neg.min_eigenvalue(), -kPsdTolerance);
    ASSERT_LE((negate(neg).matrix() - n.matrix()).norm(), 1e-9);
  }
}

TEST(Properties, LoewnerTransitivityAndMonotonicity) {
  std::mt19937_64 rng(80);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 2 + rng() % 4;
    const MatrixXd a = random_psd(d, 1 + rng() % d, rng);
    const MatrixXd b = a + random_psd(d, 1, rng);
    const MatrixXd c = b + random_psd(d, 1, rng);
    PositiveOperator pa(a), pb(b), pc(c);
    ASSERT_TRUE(loewner_leq(pa, pb));
    ASSERT_TRUE(loewner_leq(pb, pc));
    ASSERT_TRUE(loewner_leq(pa, pc));

    // Enlarging the hypothesis never lowers k.
    const MatrixXd x = random_psd(d, 1 + rng() % d, rng);
    const MatrixXd y = random_psd(d, 1 + rng() % d, rng);
    PositiveOperator px(x), py(y), py_big(y + random_psd(d, 1, rng));
    ASSERT_LE(graded_hyponymy(px, py), graded_hyponymy(px, py_big) + 1e-6);
  }
}

TEST(Properties, SupersetHyperonymDominates) {
  std::mt19937_64 rng(81);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 2 + rng() % 4;
    std::vector<VectorXd> set;
    for (std::size_t i = 0, n = 2 + rng() % 4; i < n; ++i) {
      VectorXd v(d);
      for (Eigen::Index j = 0; j < d; ++j) v(j) = g(rng);
      set.push_back(v);
    }
    std::vector<VectorXd> subset(set.begin(), set.begin() + 1 + rng() % (set.size() - 1));
    auto small = hyperonym_operator(subset), big = hyperonym_operator(set);
    ASSERT_TRUE(loewner_leq(small, big));
    for (const auto& v : subset) ASSERT_TRUE(loewner_leq(pure_operator(v), big));
  }
}

TEST(Normalize, AndNegate) {
  MatrixXd m(2, 2);
  m << 4, 0, 0, 2;
  auto n = normalize(PositiveOperator(m));
  EXPECT_NEAR(n.matrix()(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(n.matrix()(1, 1), 0.5, 1e-12);
  auto neg = negate(n);
  EXPECT_NEAR(neg.matrix()(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(neg.matrix()(1, 1), 0.5, 1e-12);
  EXPECT_THROW(negate(PositiveOperator(m)), Error);
  EXPECT_THROW(normalize(PositiveOperator(MatrixXd::Zero(2, 2))), Error);
}

TEST(Compose, Models) {
  EXPECT_EQ(parse_composition_model("verb_only"), CompositionModel::VerbOnly);
  EXPECT_EQ(parse_composition_model(to_string(CompositionModel::Mult)), CompositionModel::Mult);
  EXPECT_THROW(parse_composition_model("tensor"), Error);

  auto ws = pets();
  auto pug = ws.word_operator("pug"), pet = ws.word_operator("pet");
  auto verb = pure_operator(vec({1, 1, 0, 1}));
  auto s1 = compose_sentence(pug, verb, std::nullopt, CompositionModel::VerbOnly);
  EXPECT_NEAR(s1.max_eigenvalue(), 1.0, 1e-12);
  EXPECT_LE((s1.matrix() - normalize(verb).matrix()).norm(), 1e-12);

  auto add = compose_sentence(pug, verb, pet, CompositionModel::Addition);
  MatrixXd expected = pug.matrix() + normalize(verb).matrix() + pet.matrix();
  expected /= PositiveOperator(expected).max_eigenvalue();
  EXPECT_LE((add.matrix() - expected).norm(), 1e-10);

  auto mult = compose_sentence(pet, verb, std::nullopt, CompositionModel::Mult);
  EXPECT_GE(mult.min_eigenvalue(), -kPsdTolerance);

  // A d^2 verb reduces to its subject marginal.
  MatrixXd big = MatrixXd::Zero(4, 4);
  big(0, 0) = 2;  // |00><00|
  big(3, 3) = 1;  // |11><11|
  auto marg = verb_marginal(PositiveOperator(big), 2);
  EXPECT_NEAR(marg.matrix()(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(marg.matrix()(1, 1), 0.5, 1e-12);
  EXPECT_THROW(verb_marginal(PositiveOperator(MatrixXd::Identity(3, 3)), 2), Error);
  EXPECT_THROW(compose_sentence(pug, verb, PositiveOperator(MatrixXd::Identity(3, 3)),
                                CompositionModel::Addition),
               Error);
}

TEST(Entails, NormalizesBothSides) {
  auto ws = pets();
  auto pug = ws.word_operator("pug"), pet = ws.word_operator("pet");
  auto forward = entails(pug, pet);
  const double k = generalized_eigen_k(normalize(pug).matrix(), normalize(pet).matrix());
  EXPECT_NEAR(forward.k, k, 1e-5);
  EXPECT_NEAR(forward.k, 0.2487, 1e-4);
  EXPECT_FALSE(forward.crisp);
  auto backward = entails(pet, pug);
  EXPECT_FALSE(backward.crisp);
  EXPECT_NEAR(backward.k, 0.0, 1e-6);
  auto self = entails(pet, pet);
  EXPECT_TRUE(self.crisp);
  EXPECT_DOUBLE_EQ(self.k, 1.0);

  // Sentences under verb_only with a shared verb entail each other fully.
  auto verb = pure_operator(vec({1, 0, 1, 0}));
  auto a = compose_sentence(pug, verb, std::nullopt, CompositionModel::VerbOnly);
  auto b = compose_sentence(pet, verb, std::nullopt, CompositionModel::VerbOnly);
  EXPECT_TRUE(entails(a, b).crisp);
}
