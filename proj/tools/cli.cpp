#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnlp/ansatz.hpp"
#include "qnlp/embedding.hpp"
#include "qnlp/error.hpp"
#include "qnlp/meaning.hpp"
#include "qnlp/positive.hpp"
#include "qnlp/pregroup.hpp"
#include "qnlp/qa.hpp"
#include "qnlp/qmem.hpp"

namespace qnlp::cli {

namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Everything needed to repeat a run, echoed into every artifact.
struct RunConfig {
  std::vector<std::string> args;
  std::string subcommand;
  std::optional<std::uint64_t> seed;
  std::string cwd = std::filesystem::current_path().string();

  json to_json() const {
    json j;
    j["subcommand"] = subcommand;
    j["cwd"] = cwd;
    j["argv"] = args;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
  }
};

class Artifacts {
 public:
  Artifacts(RunConfig config, std::ostream& out) : config_(std::move(config)), out_(out) {}

  void csv(const std::string& path, const std::string& body) const {
    emit(path, "# config: " + config_.to_json().dump() + "\n" + body);
  }

  void json_doc(const std::string& path, json doc) const {
    doc["config"] = config_.to_json();
    emit(path, doc.dump(2) + "\n");
  }

  const RunConfig& config() const { return config_; }

 private:
  void emit(const std::string& path, const std::string& content) const {
    if (path.empty() || path == "-") {
      out_ << content;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    f << content;
  }

  RunConfig config_;
  std::ostream& out_;
};

struct ModelFlags {
  std::string ansatz;
  std::string mode;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> qubits_n;
  std::string angle_unit;
  std::string backend = "tensor";

  void add(CLI::App* app) {
    app->add_option("--ansatz", ansatz, "ansatz config JSON");
    app->add_option("--mode", mode, "scalar or connector (sentence wire qubits 0 or 1)")
        ->check(CLI::IsMember({"scalar", "connector"}));
    app->add_option("--depth", depth, "word circuit depth");
    app->add_option("--qubits-n", qubits_n, "qubits per noun wire");
    app->add_option("--angle-unit", angle_unit, "turns, half_turns or radians")
        ->check(CLI::IsMember({"turns", "half_turns", "radians"}));
    app->add_option("--backend", backend, "tensor or statevector")
        ->check(CLI::IsMember({"tensor", "statevector"}));
  }

  AnsatzConfig config() const {
    AnsatzConfig cfg = ansatz.empty() ? AnsatzConfig{} : load_ansatz_config(ansatz);
    if (mode == "scalar") cfg.qubits_per_type[cfg.sentence_type] = 0;
    if (mode == "connector") cfg.qubits_per_type[cfg.sentence_type] = 1;
    if (depth) cfg.depth = *depth;
    if (qubits_n) cfg.qubits_per_type["n"] = *qubits_n;
    if (!angle_unit.empty()) cfg.angle_unit = parse_angle_unit(angle_unit);
    cfg.validate();
    return cfg;
  }

  Backend backend_kind() const {
    return backend == "statevector" ? Backend::Statevector : Backend::Tensor;
  }
};

std::vector<double> parse_params(const std::string& text) {
  std::ifstream probe(text);
  if (probe) {
    const json j = json::parse(read_text(text));
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.contains("best_params")) return j["best_params"].get<std::vector<double>>();
    throw Error(ErrorCode::InvalidInput, text + " holds no parameter list");
  }
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "bad parameter value '" + item + "'");
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  std::ostringstream o;
  o.precision(12);
  o << v;
  return o.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compositional sentence models: grammar, tensors, circuits, memory, operators"};
  app.require_subcommand(1);

  // parse
  std::string vocab_path, sentence, target = "s", out_path;
  auto* parse_cmd = app.add_subcommand("parse", "reduce a sentence and print its links");
  parse_cmd->add_option("--vocab", vocab_path, "vocabulary JSON")->required();
  parse_cmd->add_option("--sentence", sentence, "sentence text")->required();
  parse_cmd->add_option("--target", target, "sentence type");
  parse_cmd->add_option("--out", out_path, "write the diagram as JSON");

  // generate
  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "list grammatical sentences");
  gen_cmd->add_option("--vocab", vocab_path, "vocabulary JSON")->required();
  gen_cmd->add_option("--max-len", gen.max_len, "longest sentence in words");
  gen_cmd->add_option("--max-count", gen.max_count, "keep at most this many");
  gen_cmd->add_option("--seed", gen.seed, "sampling seed");
  gen_cmd->add_option("--target", target, "sentence type");
  gen_cmd->add_option("--out", out_path, "output file");

  // embed
  std::string corpus_path, basis_path, basis_words, word;
  std::size_t window = 0;
  auto* embed_cmd = app.add_subcommand("embed", "co-occurrence vectors from a corpus");
  embed_cmd->add_option("--corpus", corpus_path, "one sentence per line")->required();
  embed_cmd->add_option("--basis", basis_path, "basis words, one per line");
  embed_cmd->add_option("--basis-words", basis_words, "comma-separated basis words");
  embed_cmd->add_option("--window", window, "0 for whole sentences");
  embed_cmd->add_option("--word", word, "print only this word's vector");
  embed_cmd->add_option("--out", out_path, "output JSON");

  // storage
  std::uint64_t dim = 0, wires = 0, instances = 1;
  auto* storage_cmd = app.add_subcommand("storage", "classical bits vs qubits for a tensor");
  storage_cmd->add_option("--dim", dim, "basis dimension")->required();
  storage_cmd->add_option("--wires", wires, "number of wires")->required();
  storage_cmd->add_option("--instances", instances, "number of stored tensors");

  // qa-train
  std::string data_path, curve_path, optimizer = "spsa";
  ModelFlags model_flags;
  SpsaOptions spsa;
  RandomSearchOptions random;
  std::uint64_t seed = 0;
  double split_fraction = 0.5;
  auto* train_cmd = app.add_subcommand("qa-train", "train word parameters on labelled sentences");
  train_cmd->add_option("--vocab", vocab_path, "vocabulary JSON")->required();
  train_cmd->add_option("--data", data_path, "sentence<TAB>label file")->required();
  train_cmd->add_option("--optimizer", optimizer, "spsa or random")
      ->check(CLI::IsMember({"spsa", "random"}));
  train_cmd->add_option("--iterations", spsa.iterations, "SPSA iterations");
  train_cmd->add_option("--a", spsa.a, "SPSA step gain");
  train_cmd->add_option("--c", spsa.c, "SPSA perturbation gain");
  train_cmd->add_option("--samples", random.samples, "random search draws");
  train_cmd->add_option("--range", random.range, "parameter range for draws and init");
  train_cmd->add_option("--seed", seed, "split, init and optimizer seed");
  train_cmd->add_option("--split", split_fraction, "training fraction");
  train_cmd->add_option("--out", out_path, "report JSON");
  train_cmd->add_option("--curve", curve_path, "loss curve CSV");
  model_flags.add(train_cmd);

  // qa-eval
  std::string params_spec;
  bool self_label_flag = false;
  auto* eval_cmd = app.add_subcommand("qa-eval", "predict truth values with fixed parameters");
  eval_cmd->add_option("--vocab", vocab_path, "vocabulary JSON")->required();
  eval_cmd->add_option("--data", data_path, "sentence<TAB>label file (labels ignored with --self-label)")
      ->required();
  eval_cmd->add_option("--params", params_spec, "comma list, JSON array or report JSON")->required();
  eval_cmd->add_flag("--self-label", self_label_flag, "write the dataset relabelled by the model");
  eval_cmd->add_option("--out", out_path, "predictions CSV or relabelled TSV");
  model_flags.add(eval_cmd);

  // sim-encode
  std::string encoding_path, lexicon_path, layout_name = "reversed";
  std::vector<std::string> sentences;
  EncodeOptions enc_opt;
  auto* encode_cmd = app.add_subcommand("sim-encode", "turn sentences into memory patterns");
  encode_cmd->add_option("--encoding", encoding_path, "code book JSON");
  encode_cmd->add_option("--sentence", sentences, "subject verb object (repeatable)");
  encode_cmd->add_option("--corpus", corpus_path, "corpus to encode instead of a code book");
  encode_cmd->add_option("--lexicon", lexicon_path, "token<TAB>tag file for --corpus");
  encode_cmd->add_option("--nouns", enc_opt.basis_nouns, "basis nouns");
  encode_cmd->add_option("--verbs", enc_opt.basis_verbs, "basis verbs");
  encode_cmd->add_option("--noun-cutoff", enc_opt.noun_cutoff, "composite noun cutoff");
  encode_cmd->add_option("--verb-cutoff", enc_opt.verb_cutoff, "composite verb cutoff");
  encode_cmd->add_option("--nv-cutoff", enc_opt.noun_verb_cutoff, "noun-verb distance cutoff");
  encode_cmd->add_option("--layout", layout_name, "reversed or sentence")
      ->check(CLI::IsMember({"reversed", "sentence"}));
  encode_cmd->add_option("--out", out_path, "output JSON");

  // sim-retrieve
  std::string patterns_path, target_bits;
  std::vector<std::string> pattern_list;
  std::uint64_t shots = 50000;
  auto* retrieve_cmd = app.add_subcommand("sim-retrieve", "Hamming-weighted retrieval from memory");
  retrieve_cmd->add_option("--patterns", patterns_path, "JSON from sim-encode");
  retrieve_cmd->add_option("--pattern", pattern_list, "stored bitstring (repeatable)");
  retrieve_cmd->add_option("--target", target_bits, "target bitstring")->required();
  retrieve_cmd->add_option("--shots", shots, "samples");
  retrieve_cmd->add_option("--seed", seed, "sampling seed");
  retrieve_cmd->add_option("--out", out_path, "output CSV");

  // entail
  std::string space_path, premise, hypothesis, model_name = "verb_only";
  std::vector<std::string> pairs;
  auto* entail_cmd = app.add_subcommand("entail", "Loewner-order hyponymy and entailment");
  entail_cmd->add_option("--space", space_path, "word space JSON")->required();
  entail_cmd->add_option("--pair", pairs, "hyponym:hyperonym (repeatable)");
  entail_cmd->add_option("--premise", premise, "subject verb [object]");
  entail_cmd->add_option("--hypothesis", hypothesis, "subject verb [object]");
  entail_cmd->add_option("--model", model_name, "verb_only, addition or mult")
      ->check(CLI::IsMember({"verb_only", "addition", "mult"}));
  entail_cmd->add_option("--out", out_path, "output CSV");

  // rerun
  std::string from_path;
  auto* rerun_cmd = app.add_subcommand("rerun", "repeat the run recorded in an artifact");
  rerun_cmd->add_option("--from", from_path, "artifact file")->required();
  rerun_cmd->add_option("--out", out_path, "where to write the new artifact");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  RunConfig rc{args, app.get_subcommands().front()->get_name(), std::nullopt};

  try {
    if (parse_cmd->parsed()) {
      const auto vocab = load_vocabulary(vocab_path);
      const auto words = vocab.tokenize(sentence);
      const auto diagram = reduce_or_throw(words, AtomicType(target));
      const auto simples = diagram.flattened();
      std::ostringstream text;
      text << "words:";
      for (const auto& w : diagram.words) text << ' ' << w.surface << ':' << to_string(w.type);
      text << "\nlinks:";
      for (const auto& l : diagram.links) {
        text << " (" << l.left << ',' << l.right << ')';
      }
      text << "\nresidue:";
      for (auto r : diagram.residue) text << ' ' << to_string(simples[r]);
      text << '\n';
      out << text.str();
      if (!out_path.empty()) {
        json j;
        for (const auto& w : diagram.words) j["words"].push_back({w.surface, to_string(w.type)});
        for (const auto& l : diagram.links) j["links"].push_back({l.left, l.right});
        for (auto r : diagram.residue) j["residue"].push_back(r);
        Artifacts(rc, out).json_doc(out_path, j);
      }
      return 0;
    }

    if (gen_cmd->parsed()) {
      rc.seed = gen.seed;
      const auto vocab = load_vocabulary(vocab_path);
      std::ostringstream body;
      for (const auto& s : generate(vocab, AtomicType(target), gen)) body << surface_of(s) << '\n';
      Artifacts(rc, out).csv(out_path, body.str());
      return 0;
    }

    if (embed_cmd->parsed()) {
      std::vector<std::string> basis =
          basis_path.empty() ? split(basis_words, ',') : load_word_list(basis_path);
      const auto table = build_embeddings(load_corpus(corpus_path), basis, window);
      if (!word.empty()) {
        const auto& v = table.at(word);
        out << word << " = [";
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
        out << "]\n";
        return 0;
      }
      json j;
      j["basis"] = table.basis;
      j["vectors"] = table.vectors;
      Artifacts(rc, out).json_doc(out_path, j);
      return 0;
    }

    if (storage_cmd->parsed()) {
      const auto est = storage_estimate(dim, wires, instances);
      out << format_bits(est) << " bits / " << est.qubits << (est.qubits == 1 ? " qubit" : " qubits");
      if (est.overflow) out << " (bit count exceeds 64 bits)";
      out << '\n';
      return 0;
    }

    if (train_cmd->parsed()) {
      rc.seed = seed;
      QaModel model(load_vocabulary(vocab_path), model_flags.config(), model_flags.backend_kind());
      auto data = load_dataset(data_path);
      split_dataset(data, split_fraction, seed);
      Trainer trainer(model, data);
      TrainReport report;
      if (optimizer == "spsa") {
        spsa.seed = seed;
        report = trainer.spsa(random_params(model.param_count(), random.range, seed), spsa);
      } else {
        random.seed = seed;
        report = trainer.random_search(random);
      }
      Artifacts art(rc, out);
      json doc = json::parse(report_json(report, ""));
      doc.erase("config");
      doc["slots"] = json::array();
      for (const auto& s : model.layout().slots()) doc["slots"].push_back(s.name());
      doc["ansatz"] = json::parse(ansatz_config_json(model.config()));
      if (out_path.empty()) {
        out << "train " << report.train_score << "  test "
            << (report.test_score ? format_double(*report.test_score) : std::string("n/a"))
            << "  total " << report.total_score << "  best loss " << report.best_loss << '\n';
      } else {
        art.json_doc(out_path, doc);
      }
      if (!curve_path.empty()) art.csv(curve_path, loss_curve_csv(report));
      return 0;
    }

    if (eval_cmd->parsed()) {
      QaModel model(load_vocabulary(vocab_path), model_flags.config(), model_flags.backend_kind());
      const auto params = parse_params(params_spec);
      auto data = load_dataset(data_path);
      Artifacts art(rc, out);
      if (self_label_flag) {
        std::vector<std::string> texts;
        for (const auto& it : data.items) texts.push_back(it.sentence);
        art.csv(out_path, dataset_tsv(self_label(model, params, texts)));
        return 0;
      }
      std::ostringstream body;
      body << "sentence,label,probability,predicted\n";
      std::size_t correct = 0;
      for (const auto& it : data.items) {
        const auto p = model.predict(params, it.sentence);
        correct += p.label == it.label;
        body << csv_field(it.sentence) << ',' << it.label << ',' << format_double(p.probability)
             << ',' << p.label << '\n';
      }
      if (out_path.empty()) {
        out << body.str();
      } else {
        art.csv(out_path, body.str());
      }
      out << "score " << correct << '/' << data.items.size() << '\n';
      return 0;
    }

    if (encode_cmd->parsed()) {
      const auto layout =
          layout_name == "sentence" ? RegisterLayout::SentenceOrder : RegisterLayout::ReversedWords;
      json doc;
      BasisEncoding enc;
      std::vector<SentenceTriple> triples;
      if (!corpus_path.empty()) {
        if (lexicon_path.empty()) throw Error(ErrorCode::InvalidInput, "--corpus needs --lexicon");
        const auto ce = encode_corpus(load_corpus(corpus_path), load_tag_lexicon(lexicon_path), enc_opt);
        enc = ce.encoding;
        triples = ce.sentences;
        doc["encoding"] = json::parse(encoding_json(enc));
      } else if (!encoding_path.empty()) {
        enc = parse_encoding_json(read_text(encoding_path));
      } else {
        throw Error(ErrorCode::InvalidInput, "give --encoding or --corpus");
      }
      for (const auto& s : sentences) {
        const auto parts = split(s, ' ');
        if (parts.size() != 3) {
          throw Error(ErrorCode::InvalidInput, "'" + s + "' is not subject verb object");
        }
        triples.push_back({parts[0], parts[1], parts[2]});
      }
      std::vector<Bitstring> all;
      for (const auto& t : triples) {
        const auto state = compose_sentence_state(enc.token(t.subject), enc.token(t.verb),
                                                  enc.token(t.object), enc, layout);
        const auto pats = support_patterns(state);
        doc["sentences"].push_back(
            {{"text", t.subject + " " + t.verb + " " + t.object}, {"patterns", pats}});
        for (const auto& p : pats) {
          if (std::find(all.begin(), all.end(), p) == all.end()) all.push_back(p);
        }
      }
      doc["patterns"] = all;
      Artifacts(rc, out).json_doc(out_path, doc);
      return 0;
    }

    if (retrieve_cmd->parsed()) {
      rc.seed = seed;
      std::vector<Bitstring> patterns = pattern_list;
      if (!patterns_path.empty()) {
        const auto j = json::parse(read_text(patterns_path));
        for (const auto& p : j.at("patterns")) patterns.push_back(p.get<std::string>());
      }
      const auto r = retrieve(store(patterns), target_bits, shots, seed);
      Artifacts(rc, out).csv(out_path, retrieval_csv(r));
      return 0;
    }

    if (entail_cmd->parsed()) {
      const auto space = load_word_space(space_path);
      std::ostringstream body;
      body << "pair,crisp,k\n";
      for (const auto& p : pairs) {
        const auto parts = split(p, ':');
        if (parts.size() != 2) throw Error(ErrorCode::InvalidInput, "pair must be a:b");
        const auto a = space.word_operator(parts[0]);
        const auto b = space.word_operator(parts[1]);
        body << csv_field(p) << ',' << (loewner_leq(a, b) ? "true" : "false") << ','
             << format_double(graded_hyponymy(a, b)) << '\n';
      }
      if (!premise.empty() || !hypothesis.empty()) {
        const auto model = parse_composition_model(model_name);
        auto sentence_op = [&](const std::string& text) {
          const auto w = split(text, ' ');
          if (w.empty() || w.size() > 3) {
            throw Error(ErrorCode::InvalidInput, "'" + text + "' must have one to three words");
          }
          if (w.size() == 1) return normalize(space.word_operator(w[0]));
          std::optional<PositiveOperator> obj;
          if (w.size() == 3) obj = space.word_operator(w[2]);
          return compose_sentence(space.word_operator(w[0]), space.word_operator(w[1]), obj, model);
        };
        const auto e = entails(sentence_op(premise), sentence_op(hypothesis));
        body << csv_field(premise + " => " + hypothesis) << ',' << (e.crisp ? "true" : "false")
             << ',' << format_double(e.k) << '\n';
      }
      Artifacts(rc, out).csv(out_path, body.str());
      return 0;
    }

    if (rerun_cmd->parsed()) {
      const std::string text = read_text(from_path);
      json config;
      const std::string marker = "# config: ";
      const bool csv = text.rfind(marker, 0) == 0;
      if (csv) {
        config = json::parse(text.substr(marker.size(), text.find('\n') - marker.size()));
      } else {
        config = json::parse(text).at("config");
      }
      auto original = config.at("argv").get<std::vector<std::string>>();
      // Only the artifact being replayed is written; other outputs are dropped.
      const std::string flag =
          csv && config.value("subcommand", "") == "qa-train" ? "--curve" : "--out";
      // Relative inputs are resolved against the directory of the original run.
      const std::filesystem::path base = config.value("cwd", std::string());
      std::vector<std::string> replay;
      for (std::size_t i = 0; i < original.size(); ++i) {
        if ((original[i] == "--out" || original[i] == "--curve") && i + 1 < original.size()) {
          ++i;
          continue;
        }
        std::string arg = original[i];
        if (i > 0 && !base.empty() && !arg.starts_with("-")) {
          const std::filesystem::path rel(arg);
          std::error_code ec;
          if (rel.is_relative() && std::filesystem::is_regular_file(base / rel, ec)) arg = (base / rel).string();
        }
        replay.push_back(arg);
      }
      replay.push_back(flag);
      replay.push_back(out_path.empty() ? "-" : out_path);
      return run(replay, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_domain_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace qnlp::cli
