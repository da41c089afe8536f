#include "qnlp/qmem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "qnlp/error.hpp"
#include "support.hpp"

using namespace qnlp;

namespace {

double cycle_cost(const std::vector<std::vector<double>>& w, const std::vector<std::size_t>& order) {
  double c = 0;
  for (std::size_t i = 0; i < order.size(); ++i) c += w[order[i]][order[(i + 1) % order.size()]];
  return c;
}

double brute_force_tour(const std::vector<std::vector<double>>& w) {
  std::vector<std::size_t> rest(w.size() - 1);
  std::iota(rest.begin(), rest.end(), 1);
  double best = 1e300;
  do {
    std::vector<std::size_t> order{0};
    order.insert(order.end(), rest.begin(), rest.end());
    best = std::min(best, cycle_cost(w, order));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

std::size_t min_gap(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t g = SIZE_MAX;
  for (auto x : a)
    for (auto y : b) g = std::min(g, x > y ? x - y : y - x);
  return g;
}

BasisEncoding toy() { return parse_encoding_json(test::slurp(test::fixture("qmem_toy_encoding.json"))); }

const std::vector<Bitstring> kJohn{"01100", "01000", "01110", "01010"};
const std::vector<Bitstring> kMary{"10011", "10111", "10001", "10101"};

}  // namespace

TEST(Hamming, Basics) {
  EXPECT_EQ(hamming("00", "11"), 2u);
  EXPECT_EQ(hamming("01100", "10011"), 5u);
  EXPECT_EQ(hamming("", ""), 0u);
  try {
    hamming("0", "01");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WidthMismatch);
  }
  EXPECT_THROW(check_bitstring("012"), Error);
}

TEST(Hamming, MetricProperties) {
  std::mt19937_64 rng(6);
  auto random_bits = [&](std::size_t n) {
    Bitstring b;
    for (std::size_t i = 0; i < n; ++i) b += (rng() & 1) ? '1' : '0';
    return b;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    auto a = random_bits(n), b = random_bits(n), c = random_bits(n);
    ASSERT_EQ(hamming(a, b), hamming(b, a));
    ASSERT_EQ(hamming(a, a), 0u);
    ASSERT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
  }
}

TEST(HeldKarp, SmallCases) {
  std::vector<std::vector<double>> three{{0, 2, 5}, {2, 0, 4}, {5, 4, 0}};
  EXPECT_DOUBLE_EQ(shortest_cycle(three).cost, 11.0);

  // A B C D with AB 1, AC 4, AD 3, BC 2, BD 5, CD 1.
  std::vector<std::vector<double>> four{{0, 1, 4, 3}, {1, 0, 2, 5}, {4, 2, 0, 1}, {3, 5, 1, 0}};
  auto t = shortest_cycle(four);
  EXPECT_DOUBLE_EQ(t.cost, 7.0);
  EXPECT_EQ(t.order.front(), 0u);
  EXPECT_DOUBLE_EQ(cycle_cost(four, t.order), 7.0);
  const bool forward = t.order == std::vector<std::size_t>{0, 1, 2, 3};
  const bool backward = t.order == std::vector<std::size_t>{0, 3, 2, 1};
  EXPECT_TRUE(forward || backward);

  std::vector<std::vector<double>> big(13, std::vector<double>(13, 1.0));
  try {
    shortest_cycle(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BasisTooLarge);
  }
}

TEST(HeldKarp, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> weight(1, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng() % 5;
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = weight(rng);
    auto t = shortest_cycle(w);
    ASSERT_EQ(t.order.size(), n);
    ASSERT_EQ(std::set<std::size_t>(t.order.begin(), t.order.end()).size(), n);
    ASSERT_DOUBLE_EQ(t.cost, cycle_cost(w, t.order));
    ASSERT_DOUBLE_EQ(t.cost, brute_force_tour(w));
  }
}

TEST(Gray, FourAtWidthTwo) {
  EXPECT_EQ(cyclic_gray_codes(4, 2), (std::vector<Bitstring>{"00", "01", "11", "10"}));
  EXPECT_THROW(cyclic_gray_codes(5, 2), Error);
}

TEST(Gray, CyclicAdjacency) {
  for (std::size_t width = 1; width <= 6; ++width) {
    for (std::size_t count = 2; count <= (std::size_t{1} << width); ++count) {
      auto codes = cyclic_gray_codes(count, width);
      ASSERT_EQ(codes.size(), count);
      ASSERT_EQ(std::set<Bitstring>(codes.begin(), codes.end()).size(), count);
      for (std::size_t i = 0; i + 1 < count; ++i) ASSERT_EQ(hamming(codes[i], codes[i + 1]), 1u);
      const std::size_t wrap = hamming(codes.back(), codes.front());
      if (count % 2 == 0) {
        ASSERT_EQ(wrap, 1u) << count << " " << width;
      } else {
        ASSERT_LE(wrap, 2u) << count << " " << width;
      }
    }
  }
}

TEST(Lexicon, Parse) {
  auto lex = parse_tag_lexicon("# c\ndog\tnoun\nrun\tverb\nthe\tstop\n");
  EXPECT_EQ(lex.at("run"), Tag::Verb);
  EXPECT_THROW(parse_tag_lexicon("dog noun\n"), Error);
  EXPECT_THROW(parse_tag_lexicon("dog\tadj\n"), Error);
}

TEST(Encode, CorpusPipeline) {
  auto corpus = load_corpus(test::fixture("qmem_corpus.txt"));
  auto lex = load_tag_lexicon(test::fixture("qmem_lexicon.tsv"));
  auto enc = encode_corpus(corpus, lex, {});

  // Oracle: frequency ranking with first-occurrence ties, and min position gaps.
  std::vector<std::string> stream;
  for (auto& s : corpus.sentences) stream.insert(stream.end(), s.begin(), s.end());
  std::map<std::string, std::vector<std::size_t>> pos;
  std::vector<std::string> nouns;
  for (std::size_t p = 0; p < stream.size(); ++p) {
    if (lex.at(stream[p]) == Tag::Noun && !pos.contains(stream[p])) nouns.push_back(stream[p]);
    pos[stream[p]].push_back(p);
  }
  std::stable_sort(nouns.begin(), nouns.end(),
                   [&](auto& a, auto& b) { return pos[a].size() > pos[b].size(); });
  nouns.resize(4);
  std::set<std::string> expected_basis(nouns.begin(), nouns.end());
  std::set<std::string> got_basis(enc.encoding.noun_cycle.begin(), enc.encoding.noun_cycle.end());
  EXPECT_EQ(got_basis, expected_basis);

  ASSERT_EQ(enc.noun_weights.size(), 4u);
  const auto& cyc = enc.encoding.noun_cycle;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(hamming(enc.encoding.subject.at(cyc[i]), enc.encoding.subject.at(cyc[(i + 1) % 4])), 1u);
    EXPECT_EQ(enc.encoding.subject.at(cyc[i]).size(), 2u);
    EXPECT_EQ(enc.encoding.object.at(cyc[i]), enc.encoding.subject.at(cyc[i]));
  }
  // Weights are indexed by frequency rank; the cycle is optimal for them.
  std::vector<std::size_t> order;
  for (const auto& t : cyc) order.push_back(std::find(nouns.begin(), nouns.end(), t) - nouns.begin());
  EXPECT_DOUBLE_EQ(cycle_cost(enc.noun_weights, order), brute_force_tour(enc.noun_weights));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) {
        EXPECT_DOUBLE_EQ(enc.noun_weights[i][j], double(min_gap(pos[nouns[i]], pos[nouns[j]])));
      }
    }
  }

  EXPECT_FALSE(enc.sentences.empty());
  for (const auto& s : enc.sentences) {
    EXPECT_NO_THROW(enc.encoding.token(s.subject));
    EXPECT_NO_THROW(enc.encoding.token(s.verb));
    EXPECT_NO_THROW(enc.encoding.token(s.object));
  }
  for (const auto& [word, comp] : enc.encoding.composites) {
    EXPECT_FALSE(comp.support.empty()) << word;
  }

  auto bad = parse_corpus("the zebra runs");
  try {
    encode_corpus(bad, lex, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UntaggedToken);
  }
  EncodeOptions too_many;
  too_many.basis_nouns = 13;
  EXPECT_THROW(encode_corpus(corpus, lex, too_many), Error);
}

TEST(Compose, WorkedSentences) {
  auto enc = toy();
  auto john = compose_sentence_state(enc.token("John"), enc.token("rests"), enc.token("inside"), enc);
  auto mary = compose_sentence_state(enc.token("Mary"), enc.token("walks"), enc.token("outside"), enc);
  auto sorted = [](std::vector<Bitstring> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(support_patterns(john), sorted(kJohn));
  EXPECT_EQ(support_patterns(mary), sorted(kMary));
  for (const auto& p : kJohn) EXPECT_NEAR(john.amplitude(p).real(), 0.5, 1e-12);

  auto single = compose_sentence_state(enc.token("adult"), enc.token("stand"), enc.token("inside"), enc);
  EXPECT_EQ(support_patterns(single), std::vector<Bitstring>{"00000"});
  auto plain = compose_sentence_state(enc.token("smith"), enc.token("sit"), enc.token("outside"), enc,
                                      RegisterLayout::SentenceOrder);
  EXPECT_EQ(support_patterns(plain), std::vector<Bitstring>{"10111"});
  EXPECT_THROW(enc.token("Zed"), Error);
}

TEST(Compose, EncodingJsonRoundTrip) {
  auto enc = toy();
  auto again = parse_encoding_json(encoding_json(enc));
  EXPECT_EQ(again.subject, enc.subject);
  EXPECT_EQ(again.verb, enc.verb);
  EXPECT_EQ(again.object, enc.object);
  EXPECT_EQ(again.token("John").support, enc.token("John").support);
}

TEST(Memory, UniformSuperposition) {
  auto m = store({"00", "11"});
  EXPECT_NEAR(m.state.amplitude("00").real(), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m.state.amplitude("11").real(), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(m.state.amplitude("01"), Complex(0.0));

  auto one = store({"101"});
  EXPECT_EQ(one.state.amplitude("101"), Complex(1.0));

  std::vector<Bitstring> all = kJohn;
  all.insert(all.end(), kMary.begin(), kMary.end());
  auto eight = store(all);
  for (const auto& p : all) EXPECT_NEAR(eight.state.amplitude(p).real(), 1 / std::sqrt(8.0), 1e-10);
  EXPECT_NEAR(eight.state.norm(), 1.0, 1e-12);

  EXPECT_THROW(store({}), Error);
  EXPECT_THROW(store({"00", "00"}), Error);
  EXPECT_THROW(store({"00", "1"}), Error);
  EXPECT_THROW(store({std::string(kMaxPatternWidth + 1, '0')}), Error);
}

TEST(Retrieve, CosineLaw) {
  std::vector<Bitstring> all = kJohn;
  all.insert(all.end(), kMary.begin(), kMary.end());
  auto r = retrieve(store(all), "00000", 50000, 1);
  double j = 0, m = 0, total_w = 0;
  std::vector<double> w;
  for (const auto& p : all) {
    w.push_back(std::pow(std::cos(std::numbers::pi * hamming(p, "00000") / 10.0), 2));
    total_w += w.back();
  }
  std::uint64_t shots = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(r.scores[i].pattern, all[i]);
    EXPECT_NEAR(r.scores[i].probability, w[i] / total_w, 1e-12);
    (i < 4 ? j : m) += r.scores[i].probability;
    shots += r.scores[i].count;
  }
  EXPECT_EQ(shots, 50000u);
  EXPECT_GT(j, m);
  EXPECT_NEAR(j + m, 1.0, 1e-12);
  EXPECT_EQ(r.scores[1].distance, 1u);

  auto single = retrieve(store({"101"}), "101", 10, 0);
  EXPECT_DOUBLE_EQ(single.scores[0].probability, 1.0);
  EXPECT_THROW(retrieve(store({"101"}), "10", 10, 0), Error);
}

TEST(Retrieve, MonotoneInDistance) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    std::set<Bitstring> pats;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(8, (1u << n) - 1);
    while (pats.size() < k) pats.insert(bitstring(rng() % (1u << n), n));
    const Bitstring target = bitstring(rng() % (1u << n), n);
    auto r = retrieve(store({pats.begin(), pats.end()}), target, 100, trial);
    double sum = 0;
    for (const auto& a : r.scores) {
      sum += a.probability;
      for (const auto& b : r.scores) {
        if (a.distance < b.distance) {
          ASSERT_GE(a.probability, b.probability - 1e-15);
        } else if (a.distance == b.distance) {
          ASSERT_NEAR(a.probability, b.probability, 1e-15);
        }
      }
    }
    ASSERT_NEAR(sum, 1.0, 1e-12);
    ASSERT_EQ(r.histogram, retrieve(store({pats.begin(), pats.end()}), target, 100, trial).histogram);
  }
}

TEST(ChiSquare, AcceptsTrueLawRejectsWrongOne) {
  std::vector<Bitstring> all = kJohn;
  all.insert(all.end(), kMary.begin(), kMary.end());
  auto r = retrieve(store(all), "00000", 50000, 3);
  std::vector<std::uint64_t> counts;
  std::vector<double> probs;
  for (const auto& s : r.scores) {
    counts.push_back(s.count);
    probs.push_back(s.probability);
  }
  auto fit = chi_square_fit(counts, probs, 0.001);
  EXPECT_EQ(fit.dof, 7u);
  EXPECT_NEAR(fit.critical, 24.3219, 1e-3);
  EXPECT_TRUE(fit.pass);
  auto uniform = chi_square_fit(counts, std::vector<double>(8, 0.125), 0.001);
  EXPECT_FALSE(uniform.pass);
  EXPECT_THROW(chi_square_fit({1, 2}, {1.0}, 0.01), Error);
}

TEST(Csv, RetrievalRows) {
  auto r = retrieve(store({"0", "1"}), "0", 10, 0);
  auto csv = retrieval_csv(r);
  EXPECT_EQ(csv.rfind("pattern,probability,count\n", 0), 0u);
  EXPECT_NE(csv.find("\n0,1,10\n"), std::string::npos);
}
