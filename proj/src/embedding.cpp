#include "qnlp/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "qnlp/error.hpp"

namespace qnlp {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

}  // namespace

std::vector<std::string> tokenize_sentence(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string raw;
  while (in >> raw) {
    std::string tok;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto c = static_cast<unsigned char>(raw[i]);
      if (is_word_char(c)) {
        tok.push_back(static_cast<char>(std::tolower(c)));
      } else if ((c == '\'' || c == '-') && !tok.empty() && i + 1 < raw.size() &&
                 is_word_char(static_cast<unsigned char>(raw[i + 1]))) {
        tok.push_back(static_cast<char>(c));
      }
    }
    if (!tok.empty()) out.push_back(std::move(tok));
  }
  return out;
}

Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto tokens = tokenize_sentence(line);
    if (!tokens.empty()) corpus.sentences.push_back(std::move(tokens));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) { return parse_corpus(read_file(path)); }

std::vector<std::string> load_word_list(const std::string& path) {
  std::vector<std::string> out;
  for (const auto& sentence : parse_corpus(read_file(path)).sentences) {
    out.insert(out.end(), sentence.begin(), sentence.end());
  }
  return out;
}

const std::vector<double>& EmbeddingTable::at(const std::string& word) const {
  auto it = vectors.find(word);
  if (it == vectors.end()) throw Error(ErrorCode::UnknownWord, "'" + word + "' never occurs");
  return it->second;
}

EmbeddingTable build_embeddings(const Corpus& corpus, const std::vector<std::string>& basis,
                                std::size_t window) {
  if (basis.empty()) throw Error(ErrorCode::InvalidInput, "basis is empty");
  std::set<std::string> seen;
  for (const auto& s : corpus.sentences) seen.insert(s.begin(), s.end());
  for (const auto& b : basis) {
    if (!seen.contains(b)) throw Error(ErrorCode::UnknownWord, "basis word '" + b + "' never occurs");
  }

  EmbeddingTable table;
  table.basis = basis;
  std::map<std::string, std::size_t> containing;
  std::map<std::string, std::vector<std::size_t>> near_counts;

  for (const auto& sentence : corpus.sentences) {
    std::set<std::string> words(sentence.begin(), sentence.end());
    for (const auto& w : words) {
      ++containing[w];
      auto& counts = near_counts[w];
      counts.resize(basis.size(), 0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        bool near = false;
        for (std::size_t i = 0; i < sentence.size() && !near; ++i) {
          if (sentence[i] != w) continue;
          for (std::size_t j = 0; j < sentence.size() && !near; ++j) {
            if (j == i || sentence[j] != basis[k]) continue;
            const std::size_t gap = i > j ? i - j : j - i;
            near = window == 0 || gap <= window;
          }
        }
        if (near) ++counts[k];
      }
    }
  }

  for (const auto& [word, counts] : near_counts) {
    std::vector<double> v(basis.size());
    const double total = static_cast<double>(containing[word]);
    for (std::size_t k = 0; k < basis.size(); ++k) v[k] = static_cast<double>(counts[k]) / total;
    table.vectors.emplace(word, std::move(v));
  }
  return table;
}

}  // namespace qnlp
