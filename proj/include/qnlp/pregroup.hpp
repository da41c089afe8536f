#pragma once

// Pregroup types, lazy stack reduction and sentence enumeration.
//
// A simple type is an atomic base decorated with an adjoint level z. Two
// adjacent simples (left, right) contract when they share a base and
// right.z == left.z + 1, which covers both x^l . x <= 1 and x . x^r <= 1.
//
// Text notation (vocabulary files, CLI): atoms joined by '.', a leading "-1"
// marks a simple that cancels against the base on its left (z = +1, e.g. the
// subject slot "-1n" of a verb) and a trailing "-1" marks one that cancels
// against the base on its right (z = -1, e.g. the object slot "n-1").
// Repeating the marker raises |z|.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qnlp {

inline constexpr int kMaxAdjoint = 8;

struct AtomicType {
  std::string name;

  explicit AtomicType(std::string n);
  friend bool operator==(const AtomicType&, const AtomicType&) = default;
};

struct SimpleType {
  std::string base;
  int adjoint = 0;

  SimpleType(std::string b, int z = 0);
  friend bool operator==(const SimpleType&, const SimpleType&) = default;
};

// True when `left . right <= 1`.
bool contracts(const SimpleType& left, const SimpleType& right);

struct PregroupType {
  std::vector<SimpleType> simples;

  bool empty() const { return simples.empty(); }
  std::size_t size() const { return simples.size(); }
  friend bool operator==(const PregroupType&, const PregroupType&) = default;
};

PregroupType concat(const PregroupType& a, const PregroupType& b);

SimpleType parse_simple_type(std::string_view text);
PregroupType parse_type(std::string_view text);
std::string to_string(const SimpleType& t);
std::string to_string(const PregroupType& t);

struct TypedWord {
  std::string surface;
  PregroupType type;

  TypedWord(std::string s, PregroupType t);
  friend bool operator==(const TypedWord&, const TypedWord&) = default;
};

using Sentence = std::vector<TypedWord>;

std::string surface_of(std::span<const TypedWord> sentence);

// Indices refer to the flattened simple-type sequence of the sentence.
struct Link {
  std::size_t left;
  std::size_t right;
  friend bool operator==(const Link&, const Link&) = default;
};

struct ReductionDiagram {
  std::vector<TypedWord> words;
  // In contraction order: when a link is made, every simple strictly between
  // its endpoints is already linked.
  std::vector<Link> links;
  std::vector<std::size_t> residue;

  std::vector<SimpleType> flattened() const;
  // word_offsets()[i] is the flattened index of word i's first simple; the
  // last element is the total simple count.
  std::vector<std::size_t> word_offsets() const;
};

// Lazy left-to-right stack reduction. Returns nullopt (NoParse) unless the
// residue is exactly one simple equal to `target` with adjoint 0.
std::optional<ReductionDiagram> reduce(std::span<const TypedWord> sentence,
                                       const AtomicType& target);

// Throws Error(NoParse) instead of returning nullopt.
ReductionDiagram reduce_or_throw(std::span<const TypedWord> sentence,
                                 const AtomicType& target);

// Links are pairwise non-crossing and each satisfies `contracts`.
bool is_well_formed(const ReductionDiagram& diagram);

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<TypedWord> entries);

  const std::vector<TypedWord>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  void add(TypedWord word);
  const TypedWord* find(std::string_view surface) const;
  std::optional<std::size_t> index_of(std::string_view surface) const;

  // Greedy longest match over whitespace-separated tokens so that multi-word
  // entries ("is rich") win over shorter ones. Throws VocabularyMiss.
  Sentence tokenize(std::string_view text) const;

 private:
  std::vector<TypedWord> entries_;
};

// JSON: an array of {"word", "type"} objects, or an object whose "words" key
// holds that array (other keys, e.g. "comment", are ignored).
Vocabulary load_vocabulary(const std::string& path);
Vocabulary parse_vocabulary_json(std::string_view json_text);

struct GenerateOptions {
  std::size_t max_len = 6;
  std::size_t max_count = 1000;
  std::uint64_t seed = 0;
};

// Every word sequence of length <= max_len that reduces to `target`, ordered
// by length then vocabulary index. When more than max_count exist a seeded
// sample of max_count is kept in that same order.
std::vector<Sentence> generate(const Vocabulary& vocabulary, const AtomicType& target,
                               const GenerateOptions& options);

}  // namespace qnlp
