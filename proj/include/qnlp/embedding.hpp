#pragma once

// Co-occurrence word vectors over a fixed basis of context words.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qnlp {

struct Corpus {
  std::vector<std::vector<std::string>> sentences;
};

// Whitespace split, lowercase, punctuation stripped (apostrophes and hyphens
// inside a word are kept). Tokens that end up empty are dropped.
std::vector<std::string> tokenize_sentence(std::string_view line);

// One sentence per non-blank line; lines starting with '#' are comments.
Corpus parse_corpus(std::string_view text);
Corpus load_corpus(const std::string& path);

// One word per line, '#' comments allowed.
std::vector<std::string> load_word_list(const std::string& path);

struct EmbeddingTable {
  std::vector<std::string> basis;
  std::map<std::string, std::vector<double>> vectors;

  // Throws UnknownWord.
  const std::vector<double>& at(const std::string& word) const;
};

// window == 0: a word is near a basis word when both occur in the same
// sentence. window > 0: they must also be at most `window` tokens apart.
// Coordinate = sentences where the word is near the basis word / sentences
// containing the word. A token is never near its own occurrence.
EmbeddingTable build_embeddings(const Corpus& corpus, const std::vector<std::string>& basis,
                                std::size_t window = 0);

}  // namespace qnlp
