#include "qnlp/qmem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "qnlp/error.hpp"

namespace qnlp {

void check_bitstring(const Bitstring& b) {
  if (!std::all_of(b.begin(), b.end(), [](char c) { return c == '0' || c == '1'; })) {
    throw Error(ErrorCode::InvalidInput, "'" + b + "' is not a bitstring");
  }
}

std::size_t hamming(const Bitstring& a, const Bitstring& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::WidthMismatch, "'" + a + "' and '" + b + "' differ in width");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

Tour shortest_cycle(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n > kMaxBasisTokens) {
    throw Error(ErrorCode::BasisTooLarge, std::to_string(n) + " basis tokens, at most 12 allowed");
  }
  for (const auto& row : w) {
    if (row.size() != n) throw Error(ErrorCode::InvalidInput, "weight matrix is not square");
  }
  Tour t;
  if (n == 0) return t;
  if (n == 1) {
    t.order = {0};
    return t;
  }
  if (n == 2) {
    t.order = {0, 1};
    t.cost = w[0][1] + w[1][0];
    return t;
  }

  // cost[mask][j]: shortest path from 0 through the nodes of mask (over
  // nodes 1..n-1) ending at j.
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(full + 1, std::vector<double>(m, inf));
  std::vector<std::vector<std::size_t>> parent(full + 1, std::vector<std::size_t>(m, m));
  for (std::size_t j = 0; j < m; ++j) cost[std::size_t{1} << j][j] = w[0][j + 1];
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j)) || cost[mask][j] == inf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double c = cost[mask][j] + w[j + 1][k + 1];
        if (c < cost[next][k]) {
          cost[next][k] = c;
          parent[next][k] = j;
        }
      }
    }
  }
  double best = inf;
  std::size_t last = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double c = cost[full][j] + w[j + 1][0];
    if (c < best) {
      best = c;
      last = j;
    }
  }
  std::vector<std::size_t> rev;
  std::size_t mask = full;
  std::size_t j = last;
  while (j != m) {
    rev.push_back(j + 1);
    const std::size_t p = parent[mask][j];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  t.order.push_back(0);
  t.order.insert(t.order.end(), rev.rbegin(), rev.rend());
  t.cost = best;
  return t;
}

std::vector<Bitstring> cyclic_gray_codes(std::size_t count, std::size_t width) {
  if (width >= 63 || (std::size_t{1} << width) < count) {
    throw Error(ErrorCode::InvalidInput, std::to_string(count) + " codes do not fit in " +
                                             std::to_string(width) + " bits");
  }
  auto gray = [&](std::size_t i) { return bitstring(i ^ (i >> 1), width); };
  const std::size_t size = std::size_t{1} << width;
  const std::size_t even = count + (count % 2);
  std::vector<Bitstring> out;
  // The reflected code is symmetric: g(i) and g(size-1-i) differ only in the
  // top bit, so the first half-block and the last half-block join into a cycle.
  for (std::size_t i = 0; i < even / 2; ++i) out.push_back(gray(i));
  for (std::size_t i = size - even / 2; i < size; ++i) out.push_back(gray(i));
  out.resize(count);
  return out;
}

std::map<std::string, Tag> parse_tag_lexicon(const std::string& text) {
  std::map<std::string, Tag> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorCode::InvalidInput, "lexicon line has no TAB");
    const std::string token = line.substr(0, tab);
    const std::string tag = line.substr(tab + 1);
    if (tag == "noun") out[token] = Tag::Noun;
    else if (tag == "verb") out[token] = Tag::Verb;
    else if (tag == "stop") out[token] = Tag::Stop;
    else throw Error(ErrorCode::InvalidInput, "unknown tag '" + tag + "'");
  }
  return out;
}

std::map<std::string, Tag> load_tag_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open lexicon " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tag_lexicon(buf.str());
}

CompositeToken BasisEncoding::token(const std::string& word) const {
  if (auto it = composites.find(word); it != composites.end()) return it->second;
  if (subject.contains(word) || verb.contains(word) || object.contains(word)) {
    return CompositeToken{word, {word}};
  }
  throw Error(ErrorCode::UnknownWord, "'" + word + "' has no encoding");
}

namespace {

std::size_t bits_for(std::size_t count) {
  std::size_t w = 1;
  while ((std::size_t{1} << w) < count) ++w;
  return w;
}

struct Category {
  std::vector<std::string> basis;
  std::vector<std::string> cycle;
  std::vector<std::vector<double>> weights;
  std::map<std::string, Bitstring> codes;
};

std::size_t min_gap(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (auto x : a) {
    for (auto y : b) best = std::min(best, x > y ? x - y : y - x);
  }
  return best;
}

Category build_category(const std::vector<std::string>& tokens_in_order,
                        const std::map<std::string, std::vector<std::size_t>>& positions,
                        std::size_t basis_size, std::size_t width) {
  Category cat;
  std::vector<std::string> ranked = tokens_in_order;
  std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    return positions.at(a).size() > positions.at(b).size();
  });
  if (basis_size > kMaxBasisTokens) {
    throw Error(ErrorCode::BasisTooLarge,
                std::to_string(basis_size) + " basis tokens, at most 12 allowed");
  }
  ranked.resize(std::min(basis_size, ranked.size()));
  cat.basis = ranked;
  const std::size_t n = cat.basis.size();
  if (n == 0) return cat;

  cat.weights.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        cat.weights[i][j] = static_cast<double>(
            min_gap(positions.at(cat.basis[i]), positions.at(cat.basis[j])));
      }
    }
  }
  const auto tour = shortest_cycle(cat.weights);
  if (width == 0) width = bits_for(n);
  const auto codes = cyclic_gray_codes(n, width);
  for (std::size_t k = 0; k < n; ++k) {
    cat.cycle.push_back(cat.basis[tour.order[k]]);
    cat.codes[cat.cycle.back()] = codes[k];
  }
  return cat;
}

}  // namespace

CorpusEncoding encode_corpus(const Corpus& corpus, const std::map<std::string, Tag>& lexicon,
                             const EncodeOptions& options) {
  std::vector<std::string> stream;
  std::vector<std::size_t> sentence_of;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    for (const auto& t : corpus.sentences[s]) {
      stream.push_back(t);
      sentence_of.push_back(s);
    }
  }

  std::map<std::string, std::vector<std::size_t>> positions;
  std::vector<std::string> nouns, verbs;
  std::vector<Tag> tags;
  for (std::size_t p = 0; p < stream.size(); ++p) {
    auto it = lexicon.find(stream[p]);
    if (it == lexicon.end()) throw Error(ErrorCode::UntaggedToken, "'" + stream[p] + "' has no tag");
    tags.push_back(it->second);
    auto& pos = positions[stream[p]];
    if (pos.empty()) {
      if (it->second == Tag::Noun) nouns.push_back(stream[p]);
      if (it->second == Tag::Verb) verbs.push_back(stream[p]);
    }
    pos.push_back(p);
  }

  const auto noun_cat = build_category(nouns, positions, options.basis_nouns, options.noun_width);
  const auto verb_cat = build_category(verbs, positions, options.basis_verbs, options.verb_width);

  CorpusEncoding out;
  out.encoding.subject = noun_cat.codes;
  out.encoding.object = noun_cat.codes;
  out.encoding.verb = verb_cat.codes;
  out.encoding.noun_cycle = noun_cat.cycle;
  out.encoding.verb_cycle = verb_cat.cycle;
  out.noun_weights = noun_cat.weights;
  out.verb_weights = verb_cat.weights;

  auto project = [&](const std::vector<std::string>& tokens, const Category& cat,
                     std::size_t cutoff) {
    for (const auto& t : tokens) {
      if (cat.codes.contains(t) || cat.cycle.empty()) continue;
      CompositeToken c{t, {}};
      std::size_t nearest_gap = std::numeric_limits<std::size_t>::max();
      std::string nearest;
      for (const auto& b : cat.cycle) {
        const auto gap = min_gap(positions.at(t), positions.at(b));
        if (gap <= cutoff) c.support.push_back(b);
        if (gap < nearest_gap) {
          nearest_gap = gap;
          nearest = b;
        }
      }
      if (c.support.empty()) c.support.push_back(nearest);
      out.encoding.composites[t] = c;
    }
  };
  project(nouns, noun_cat, options.noun_cutoff);
  project(verbs, verb_cat, options.verb_cutoff);

  auto encodable = [&](const std::string& t) {
    return out.encoding.composites.contains(t) || noun_cat.codes.contains(t) ||
           verb_cat.codes.contains(t);
  };
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (std::size_t p = 0; p < stream.size(); ++p) {
    if (tags[p] != Tag::Verb || !encodable(stream[p])) continue;
    std::string subj, obj;
    for (std::size_t d = 1; d <= options.noun_verb_cutoff && d <= p; ++d) {
      const std::size_t q = p - d;
      if (sentence_of[q] != sentence_of[p]) break;
      if (tags[q] == Tag::Noun && encodable(stream[q])) {
        subj = stream[q];
        break;
      }
    }
    for (std::size_t d = 1; d <= options.noun_verb_cutoff && p + d < stream.size(); ++d) {
      const std::size_t q = p + d;
      if (sentence_of[q] != sentence_of[p]) break;
      if (tags[q] == Tag::Noun && encodable(stream[q])) {
        obj = stream[q];
        break;
      }
    }
    if (subj.empty() || obj.empty()) continue;
    if (seen.insert({subj, stream[p], obj}).second) out.sentences.push_back({subj, stream[p], obj});
  }
  return out;
}

namespace {

std::vector<Bitstring> codes_for(const CompositeToken& t, const std::map<std::string, Bitstring>& book,
                                 const char* role) {
  if (t.support.empty()) throw Error(ErrorCode::InvalidInput, "'" + t.token + "' has empty support");
  std::vector<Bitstring> out;
  for (const auto& b : t.support) {
    auto it = book.find(b);
    if (it == book.end()) {
      throw Error(ErrorCode::UnknownWord, "'" + b + "' is not a " + role + " basis token");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

StateVector compose_sentence_state(const CompositeToken& subject, const CompositeToken& verb,
                                   const CompositeToken& object, const BasisEncoding& enc,
                                   RegisterLayout layout) {
  std::vector<std::vector<Bitstring>> parts = {codes_for(subject, enc.subject, "subject"),
                                               codes_for(verb, enc.verb, "verb"),
                                               codes_for(object, enc.object, "object")};
  if (layout == RegisterLayout::ReversedWords) std::reverse(parts.begin(), parts.end());

  std::vector<std::pair<Bitstring, double>> terms{{"", 1.0}};
  for (const auto& part : parts) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(part.size()));
    std::vector<std::pair<Bitstring, double>> next;
    for (const auto& [prefix, a] : terms) {
      for (const auto& code : part) next.push_back({prefix + code, a * amp});
    }
    terms = std::move(next);
  }
  const std::size_t width = terms.front().first.size();
  if (width > kMaxWidth) throw Error(ErrorCode::WidthExceeded, "sentence register too wide");
  StateVector s = StateVector::zeros(width);
  s.amplitudes[0] = 0.0;
  for (const auto& [bits, a] : terms) {
    std::size_t idx = 0;
    for (char c : bits) idx = (idx << 1) | static_cast<std::size_t>(c == '1');
    s.amplitudes[idx] += a;
  }
  return s;
}

std::vector<Bitstring> support_patterns(const StateVector& s) {
  std::vector<Bitstring> out;
  for (std::size_t i = 0; i < s.amplitudes.size(); ++i) {
    if (std::abs(s.amplitudes[i]) > 1e-12) out.push_back(bitstring(i, s.width));
  }
  return out;
}

MemoryState store(const std::vector<Bitstring>& patterns) {
  if (patterns.empty()) throw Error(ErrorCode::InvalidInput, "no patterns to store");
  const std::size_t width = patterns.front().size();
  if (width > kMaxPatternWidth) throw Error(ErrorCode::WidthExceeded, "patterns wider than 20 bits");
  std::set<Bitstring> seen;
  for (const auto& p : patterns) {
    check_bitstring(p);
    if (p.size() != width) throw Error(ErrorCode::WidthMismatch, "patterns differ in width");
    if (!seen.insert(p).second) throw Error(ErrorCode::InvalidInput, "pattern " + p + " repeated");
  }
  MemoryState m;
  m.patterns = patterns;
  m.state = StateVector::zeros(width);
  m.state.amplitudes[0] = 0.0;
  const double amp = 1.0 / std::sqrt(static_cast<double>(patterns.size()));
  for (const auto& p : patterns) {
    std::size_t idx = 0;
    for (char c : p) idx = (idx << 1) | static_cast<std::size_t>(c == '1');
    m.state.amplitudes[idx] = amp;
  }
  return m;
}

Retrieval retrieve(const MemoryState& memory, const Bitstring& target, std::uint64_t shots,
                   std::uint64_t seed) {
  check_bitstring(target);
  const std::size_t n = memory.state.width;
  if (target.size() != n) throw Error(ErrorCode::WidthMismatch, "target width differs from memory");

  Retrieval r;
  double total = 0.0;
  for (const auto& p : memory.patterns) {
    PatternScore s;
    s.pattern = p;
    s.distance = hamming(p, target);
    const double c = std::cos(std::numbers::pi * static_cast<double>(s.distance) / (2.0 * n));
    s.probability = c * c;
    total += s.probability;
    r.scores.push_back(s);
  }
  if (total <= 0.0) {
    throw Error(ErrorCode::InvalidInput, "every stored pattern is the complement of the target");
  }
  StateVector weighted = StateVector::zeros(n);
  weighted.amplitudes[0] = 0.0;
  for (auto& s : r.scores) {
    s.probability /= total;
    std::size_t idx = 0;
    for (char c : s.pattern) idx = (idx << 1) | static_cast<std::size_t>(c == '1');
    weighted.amplitudes[idx] = std::sqrt(s.probability);
  }
  if (shots > 0) {
    r.histogram = sample(weighted, shots, seed);
    for (auto& s : r.scores) {
      auto it = r.histogram.find(s.pattern);
      s.count = it == r.histogram.end() ? 0 : it->second;
    }
  }
  return r;
}

std::string retrieval_csv(const Retrieval& r) {
  std::ostringstream out;
  out.precision(12);
  out << "pattern,probability,count\n";
  for (const auto& s : r.scores) out << s.pattern << ',' << s.probability << ',' << s.count << '\n';
  return out.str();
}

ChiSquare chi_square_fit(const std::vector<std::uint64_t>& counts,
                         const std::vector<double>& probabilities, double significance) {
  if (counts.size() != probabilities.size()) {
    throw Error(ErrorCode::InvalidInput, "counts and probabilities differ in length");
  }
  std::uint64_t shots = 0;
  for (auto c : counts) shots += c;
  ChiSquare r;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probabilities[i] <= 0.0) {
      if (counts[i] > 0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    ++bins;
    const double expected = probabilities[i] * static_cast<double>(shots);
    const double d = static_cast<double>(counts[i]) - expected;
    r.statistic += d * d / expected;
  }
  if (bins < 2) throw Error(ErrorCode::InvalidInput, "chi-square needs at least two bins");
  r.dof = bins - 1;
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(r.dof));
  r.critical = boost::math::quantile(boost::math::complement(dist, significance));
  r.pass = r.statistic <= r.critical;
  return r;
}

std::string encoding_json(const BasisEncoding& enc) {
  nlohmann::json j;
  j["subject"] = enc.subject;
  j["verb"] = enc.verb;
  j["object"] = enc.object;
  j["noun_cycle"] = enc.noun_cycle;
  j["verb_cycle"] = enc.verb_cycle;
  j["composites"] = nlohmann::json::object();
  for (const auto& [name, c] : enc.composites) j["composites"][name] = c.support;
  return j.dump(2);
}

BasisEncoding parse_encoding_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("encoding JSON: ") + e.what());
  }
  BasisEncoding enc;
  auto book = [&](const char* key) {
    std::map<std::string, Bitstring> out;
    if (!j.contains(key)) return out;
    for (const auto& [k, v] : j[key].items()) {
      out[k] = v.get<std::string>();
      check_bitstring(out[k]);
    }
    return out;
  };
  enc.subject = book("subject");
  enc.verb = book("verb");
  enc.object = book("object");
  if (j.contains("noun_cycle")) enc.noun_cycle = j["noun_cycle"].get<std::vector<std::string>>();
  if (j.contains("verb_cycle")) enc.verb_cycle = j["verb_cycle"].get<std::vector<std::string>>();
  if (j.contains("composites")) {
    for (const auto& [k, v] : j["composites"].items()) {
      enc.composites[k] = CompositeToken{k, v.get<std::vector<std::string>>()};
    }
  }
  return enc;
}

}  // namespace qnlp
