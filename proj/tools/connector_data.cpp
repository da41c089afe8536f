// Regenerates the connector datasets: grammatical sentences from a
// vocabulary, labelled by a small fact table.
//
//   qnlp_connector_data VOCAB MAX_LEN MAX_COUNT SEED > out.tsv

#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "qnlp/pregroup.hpp"

namespace {

const std::set<std::string> kNegations{"don't", "not"};

// chase(subject, object) holds only for dogs chasing cats; only cats purr.
bool fact(const std::string& subject, const std::string& verb, const std::string& object) {
  if (verb == "purr") return subject == "cats";
  if (verb == "chase") return subject == "dogs" && object == "cats";
  return false;
}

// Verb phrases share the subject and fold left to right; each negation flips
// the phrase it precedes.
int label(const qnlp::Sentence& s) {
  const std::string subject = s.front().surface;
  std::size_t i = 1;
  auto phrase = [&]() {
    bool negated = false;
    while (kNegations.contains(s[i].surface)) {
      negated = !negated;
      ++i;
    }
    const std::string verb = s[i++].surface;
    std::string object;
    if (verb == "chase") object = s[i++].surface;
    return fact(subject, verb, object) != negated;
  };
  bool value = phrase();
  while (i < s.size()) {
    const std::string op = s[i++].surface;
    const bool rhs = phrase();
    value = op == "and" ? (value && rhs) : (value || rhs);
  }
  return value ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: qnlp_connector_data VOCAB MAX_LEN MAX_COUNT SEED\n";
    return 1;
  }
  const auto vocab = qnlp::load_vocabulary(argv[1]);
  qnlp::GenerateOptions opt;
  opt.max_len = std::strtoul(argv[2], nullptr, 10);
  opt.max_count = std::strtoul(argv[3], nullptr, 10);
  opt.seed = std::strtoull(argv[4], nullptr, 10);
  const auto sentences = qnlp::generate(vocab, qnlp::AtomicType("s"), opt);
  std::cout << "# generated from " << argv[1] << " max_len " << opt.max_len << " max_count "
            << opt.max_count << " seed " << opt.seed << "\n";
  std::size_t ones = 0;
  for (const auto& s : sentences) {
    const int y = label(s);
    ones += y;
    std::cout << qnlp::surface_of(s) << '\t' << y << '\n';
  }
  std::cerr << sentences.size() << " sentences, " << ones << " true\n";
}
