#pragma once

// Bitstring encoding of noun-verb-noun sentences, a uniform-superposition
// pattern memory, and Hamming-weighted retrieval.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qnlp/embedding.hpp"
#include "qnlp/qsim.hpp"

namespace qnlp {

using Bitstring = std::string;

void check_bitstring(const Bitstring& b);

// Throws WidthMismatch.
std::size_t hamming(const Bitstring& a, const Bitstring& b);

struct Tour {
  std::vector<std::size_t> order;  // starts at node 0
  double cost = 0.0;
};

inline constexpr std::size_t kMaxBasisTokens = 12;

// Exact shortest Hamiltonian cycle by Held-Karp over a symmetric weight
// matrix. Throws BasisTooLarge above 12 nodes.
Tour shortest_cycle(const std::vector<std::vector<double>>& weights);

// `count` distinct codes of `width` bits in cyclic order. Neighbours differ in
// one bit, including the wrap-around, whenever count is even; an odd cycle
// cannot close in the hypercube, so its wrap-around step is 2 bits.
std::vector<Bitstring> cyclic_gray_codes(std::size_t count, std::size_t width);

enum class Tag { Noun, Verb, Stop };

// Lines "token<TAB>noun|verb|stop".
std::map<std::string, Tag> parse_tag_lexicon(const std::string& text);
std::map<std::string, Tag> load_tag_lexicon(const std::string& path);

struct CompositeToken {
  std::string token;
  std::vector<std::string> support;  // basis tokens, equal weight
};

// Subject, verb and object code books; a basis token maps to its bitstring.
struct BasisEncoding {
  std::map<std::string, Bitstring> subject;
  std::map<std::string, Bitstring> verb;
  std::map<std::string, Bitstring> object;
  std::vector<std::string> noun_cycle;
  std::vector<std::string> verb_cycle;
  std::map<std::string, CompositeToken> composites;

  // A basis token or a known composite; throws UnknownWord.
  CompositeToken token(const std::string& word) const;
};

struct EncodeOptions {
  std::size_t basis_nouns = 4;
  std::size_t basis_verbs = 4;
  // 0 picks ceil(log2(basis size)).
  std::size_t noun_width = 0;
  std::size_t verb_width = 0;
  std::size_t noun_cutoff = 3;  // W for composite nouns, in token positions
  std::size_t verb_cutoff = 3;
  std::size_t noun_verb_cutoff = 3;
};

struct SentenceTriple {
  std::string subject;
  std::string verb;
  std::string object;
};

struct CorpusEncoding {
  BasisEncoding encoding;
  std::vector<SentenceTriple> sentences;
  std::vector<std::vector<double>> noun_weights;
  std::vector<std::vector<double>> verb_weights;
};

// Throws UntaggedToken, BasisTooLarge.
CorpusEncoding encode_corpus(const Corpus& corpus, const std::map<std::string, Tag>& lexicon,
                             const EncodeOptions& options);

// How the three words are laid out in the register. ReversedWords puts the
// object first, then the verb, then the subject, each word's bits in order.
enum class RegisterLayout { ReversedWords, SentenceOrder };

StateVector compose_sentence_state(const CompositeToken& subject, const CompositeToken& verb,
                                   const CompositeToken& object, const BasisEncoding& encoding,
                                   RegisterLayout layout = RegisterLayout::ReversedWords);

// Basis patterns with non-zero amplitude, in index order.
std::vector<Bitstring> support_patterns(const StateVector& s);

struct MemoryState {
  std::vector<Bitstring> patterns;
  StateVector state;
};

inline constexpr std::size_t kMaxPatternWidth = 20;

// Uniform superposition of distinct, equal-width patterns.
MemoryState store(const std::vector<Bitstring>& patterns);

struct PatternScore {
  Bitstring pattern;
  std::size_t distance = 0;
  double probability = 0.0;
  std::uint64_t count = 0;
};

struct Retrieval {
  std::vector<PatternScore> scores;  // same order as memory.patterns
  Histogram histogram;
};

// Weight cos^2(pi d / (2n)) per stored pattern, normalized over the memory;
// the histogram is a seeded multinomial draw from those weights.
Retrieval retrieve(const MemoryState& memory, const Bitstring& target, std::uint64_t shots,
                   std::uint64_t seed);

std::string retrieval_csv(const Retrieval& r);

struct ChiSquare {
  double statistic = 0.0;
  double critical = 0.0;
  std::size_t dof = 0;
  bool pass = false;
};

// Pearson goodness of fit of counts to the expected probabilities.
ChiSquare chi_square_fit(const std::vector<std::uint64_t>& counts,
                         const std::vector<double>& probabilities, double significance);

std::string encoding_json(const BasisEncoding& enc);
BasisEncoding parse_encoding_json(const std::string& text);

}  // namespace qnlp
