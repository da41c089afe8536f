#include "qnlp/pregroup.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qnlp/error.hpp"

namespace qnlp {

namespace {

bool valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name.front())) || name.front() == '_')) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

AtomicType::AtomicType(std::string n) : name(std::move(n)) {
  if (name.empty()) throw Error(ErrorCode::InvalidInput, "atomic type name is empty");
}

SimpleType::SimpleType(std::string b, int z) : base(std::move(b)), adjoint(z) {
  if (base.empty()) throw Error(ErrorCode::InvalidInput, "simple type base is empty");
  if (z < -kMaxAdjoint || z > kMaxAdjoint) {
    throw Error(ErrorCode::InvalidInput, "adjoint level out of range for " + base);
  }
}

bool contracts(const SimpleType& left, const SimpleType& right) {
  return left.base == right.base && right.adjoint == left.adjoint + 1;
}

PregroupType concat(const PregroupType& a, const PregroupType& b) {
  PregroupType out = a;
  out.simples.insert(out.simples.end(), b.simples.begin(), b.simples.end());
  return out;
}

SimpleType parse_simple_type(std::string_view text) {
  std::string_view rest = text;
  int left = 0;
  int right = 0;
  while (rest.starts_with("-1")) {
    rest.remove_prefix(2);
    ++left;
  }
  while (rest.ends_with("-1")) {
    rest.remove_suffix(2);
    ++right;
  }
  if (!valid_atom_name(rest)) {
    throw Error(ErrorCode::InvalidInput, "malformed simple type '" + std::string(text) + "'");
  }
  const int z = left - right;
  if (left > 0 && right > 0) {
    throw Error(ErrorCode::InvalidInput,
                "simple type '" + std::string(text) + "' mixes prefix and suffix adjoints");
  }
  return SimpleType(std::string(rest), z);
}

PregroupType parse_type(std::string_view text) {
  PregroupType out;
  std::string trimmed;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
  }
  if (trimmed.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = trimmed.find('.', start);
    out.simples.push_back(parse_simple_type(
        std::string_view(trimmed).substr(start, dot == std::string::npos ? std::string::npos
                                                                         : dot - start)));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return out;
}

std::string to_string(const SimpleType& t) {
  std::string out;
  for (int i = 0; i < t.adjoint; ++i) out += "-1";
  out += t.base;
  for (int i = 0; i < -t.adjoint; ++i) out += "-1";
  return out;
}

std::string to_string(const PregroupType& t) {
  std::string out;
  for (std::size_t i = 0; i < t.simples.size(); ++i) {
    if (i) out += '.';
    out += to_string(t.simples[i]);
  }
  return out;
}

TypedWord::TypedWord(std::string s, PregroupType t) : surface(std::move(s)), type(std::move(t)) {
  if (surface.empty()) throw Error(ErrorCode::InvalidInput, "word surface is empty");
}

std::string surface_of(std::span<const TypedWord> sentence) {
  std::string out;
  for (const auto& w : sentence) {
    if (!out.empty()) out += ' ';
    out += w.surface;
  }
  return out;
}

std::vector<SimpleType> ReductionDiagram::flattened() const {
  std::vector<SimpleType> out;
  for (const auto& w : words) {
    out.insert(out.end(), w.type.simples.begin(), w.type.simples.end());
  }
  return out;
}

std::vector<std::size_t> ReductionDiagram::word_offsets() const {
  std::vector<std::size_t> out{0};
  for (const auto& w : words) out.push_back(out.back() + w.type.size());
  return out;
}

std::optional<ReductionDiagram> reduce(std::span<const TypedWord> sentence,
                                       const AtomicType& target) {
  if (sentence.empty()) throw Error(ErrorCode::InvalidInput, "cannot reduce an empty sentence");

  ReductionDiagram diagram;
  diagram.words.assign(sentence.begin(), sentence.end());
  const auto simples = diagram.flattened();

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < simples.size(); ++i) {
    if (!stack.empty() && contracts(simples[stack.back()], simples[i])) {
      diagram.links.push_back({stack.back(), i});
      stack.pop_back();
    } else {
      stack.push_back(i);
    }
  }
  diagram.residue = std::move(stack);

  if (diagram.residue.size() != 1) return std::nullopt;
  const auto& last = simples[diagram.residue.front()];
  if (last.base != target.name || last.adjoint != 0) return std::nullopt;
  return diagram;
}

ReductionDiagram reduce_or_throw(std::span<const TypedWord> sentence, const AtomicType& target) {
  auto diagram = reduce(sentence, target);
  if (!diagram) {
    throw Error(ErrorCode::NoParse,
                "'" + surface_of(sentence) + "' does not reduce to " + target.name);
  }
  return *std::move(diagram);
}

bool is_well_formed(const ReductionDiagram& diagram) {
  const auto simples = diagram.flattened();
  for (const auto& link : diagram.links) {
    if (link.left >= link.right || link.right >= simples.size()) return false;
    if (!contracts(simples[link.left], simples[link.right])) return false;
  }
  for (const auto& a : diagram.links) {
    for (const auto& b : diagram.links) {
      // Arcs cross when exactly one endpoint of b lies strictly inside a.
      const bool b_left_inside = a.left < b.left && b.left < a.right;
      const bool b_right_inside = a.left < b.right && b.right < a.right;
      if (b_left_inside != b_right_inside) return false;
    }
  }
  return true;
}

Vocabulary::Vocabulary(std::vector<TypedWord> entries) {
  for (auto& w : entries) add(std::move(w));
}

void Vocabulary::add(TypedWord word) {
  if (find(word.surface) != nullptr) {
    throw Error(ErrorCode::InvalidInput, "duplicate vocabulary entry '" + word.surface + "'");
  }
  entries_.push_back(std::move(word));
}

const TypedWord* Vocabulary::find(std::string_view surface) const {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const TypedWord& w) { return w.surface == surface; });
  return it == entries_.end() ? nullptr : &*it;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view surface) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].surface == surface) return i;
  }
  return std::nullopt;
}

Sentence Vocabulary::tokenize(std::string_view text) const {
  const auto tokens = split_whitespace(text);
  std::size_t longest = 1;
  for (const auto& w : entries_) longest = std::max(longest, split_whitespace(w.surface).size());

  Sentence out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const TypedWord* match = nullptr;
    std::size_t used = 0;
    for (std::size_t len = std::min(longest, tokens.size() - i); len >= 1; --len) {
      std::string candidate = tokens[i];
      for (std::size_t k = 1; k < len; ++k) candidate += ' ' + tokens[i + k];
      if (const auto* w = find(candidate)) {
        match = w;
        used = len;
        break;
      }
    }
    if (match == nullptr) {
      throw Error(ErrorCode::VocabularyMiss, "'" + tokens[i] + "' is not in the vocabulary");
    }
    out.push_back(*match);
    i += used;
  }
  return out;
}

Vocabulary parse_vocabulary_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("vocabulary JSON: ") + e.what());
  }
  const nlohmann::json& list = doc.is_object() ? doc.at("words") : doc;
  if (!list.is_array()) throw Error(ErrorCode::InvalidInput, "vocabulary must be a JSON array");
  Vocabulary vocab;
  for (const auto& item : list) {
    if (!item.contains("word") || !item.contains("type")) {
      throw Error(ErrorCode::InvalidInput, "vocabulary entry needs 'word' and 'type'");
    }
    vocab.add(TypedWord(item.at("word").get<std::string>(),
                        parse_type(item.at("type").get<std::string>())));
  }
  return vocab;
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open vocabulary " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_vocabulary_json(buf.str());
}

namespace {

struct Enumerator {
  const Vocabulary& vocab;
  const AtomicType& target;
  std::size_t max_len;
  std::size_t max_word_simples = 0;
  std::vector<std::size_t> prefix;
  std::vector<std::vector<std::size_t>> found;

  void run(std::vector<SimpleType>& stack) {
    if (!prefix.empty() && stack.size() == 1 && stack.front().adjoint == 0 &&
        stack.front().base == target.name) {
      found.push_back(prefix);
    }
    if (prefix.size() == max_len) return;
    // Each further word can cancel at most max_word_simples stacked simples.
    const std::size_t remaining = max_len - prefix.size();
    if (stack.size() > 1 + remaining * max_word_simples) return;

    for (std::size_t w = 0; w < vocab.size(); ++w) {
      std::vector<SimpleType> next = stack;
      for (const auto& s : vocab.entries()[w].type.simples) {
        if (!next.empty() && contracts(next.back(), s)) {
          next.pop_back();
        } else {
          next.push_back(s);
        }
      }
      prefix.push_back(w);
      run(next);
      prefix.pop_back();
    }
  }
};

}  // namespace

std::vector<Sentence> generate(const Vocabulary& vocabulary, const AtomicType& target,
                               const GenerateOptions& options) {
  if (vocabulary.empty()) throw Error(ErrorCode::InvalidInput, "vocabulary is empty");

  Enumerator e{vocabulary, target, options.max_len, 0, {}, {}};
  for (const auto& w : vocabulary.entries()) {
    e.max_word_simples = std::max(e.max_word_simples, w.type.size());
  }
  std::vector<SimpleType> stack;
  e.run(stack);

  auto& found = e.found;
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() != b.size() ? a.size() < b.size() : a < b;
                   });

  std::vector<std::size_t> keep(found.size());
  std::iota(keep.begin(), keep.end(), 0);
  if (found.size() > options.max_count) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(keep.begin(), keep.end(), rng);
    keep.resize(options.max_count);
    std::sort(keep.begin(), keep.end());
  }

  std::vector<Sentence> out;
  out.reserve(keep.size());
  for (std::size_t k : keep) {
    Sentence s;
    for (std::size_t w : found[k]) s.push_back(vocabulary.entries()[w]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace qnlp
