// Copyright 2026 The Clarify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line driver: corpus conversion, training, ranking, evaluation,
// FAQ lookup, terminal chat and the HTTP service.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "clarify/clarifier.hpp"
#include "clarify/corpus.hpp"
#include "clarify/evalharness.hpp"
#include "clarify/faq.hpp"
#include "clarify/kb.hpp"
#include "clarify/nbmodel.hpp"
#include "clarify/service.hpp"
#include "clarify/session.hpp"
#include "clarify/synth.hpp"

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

// Input problems the user can fix by changing flags.
struct UsageError : clarify::Error {
  using clarify::Error::Error;
};

template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) {
  auto in = clarify::open_input(path);
  try {
    return fn(in);
  } catch (const clarify::Error& e) {
    throw clarify::Error(path + ": " + e.what());
  }
}

clarify::NaiveBayesModel read_model(const std::string& path) {
  return with_path(path, [](std::istream& in) { return clarify::load_model(in); });
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = clarify::text::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

clarify::TermSet symptom_set(const clarify::NaiveBayesModel& model, const std::string& list) {
  clarify::TermSet out;
  for (auto& id : split_csv(list)) {
    if (!model.symptom_index(id)) {
      std::string valid;
      for (const auto& s : model.symptoms()) valid += (valid.empty() ? "" : ", ") + s;
      throw UsageError("unknown symptom '" + id + "'; valid ids: " + valid);
    }
    out.insert(std::move(id));
  }
  return out;
}

int cmd_gen_corpus(const std::string& kb_path, std::size_t n, std::int64_t seed, const std::string& out_path) {
  const auto kb = clarify::load_kb_file(kb_path);
  const auto dialogues = clarify::synth::generate(kb, n, seed);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file = clarify::open_output(out_path);
    out = &file;
  }
  for (const auto& d : dialogues) *out << clarify::synth::to_json(d.pair).dump() << '\n';
  std::cerr << "generated " << dialogues.size() << " dialogues\n";
  return 0;
}

int cmd_convert(const std::string& corpus_path, const std::string& kb_path, std::int64_t seed,
                const std::string& train_path, const std::string& eval_path) {
  const auto kb = clarify::load_kb_file(kb_path);
  const auto pairs = with_path(corpus_path, [](std::istream& in) { return clarify::ingest_corpus(in); });
  std::vector<clarify::ProcessedDialogue> processed;
  processed.reserve(pairs.size());
  for (const auto& p : pairs) processed.push_back(clarify::process_dialogue(p, kb));
  const auto filtered = clarify::filter_single_diagnosis(std::move(processed));
  const auto split = clarify::convert_to_clarification(filtered, seed);
  {
    auto out = clarify::open_output(train_path);
    clarify::write_jsonl(out, split.training);
  }
  {
    auto out = clarify::open_output(eval_path);
    clarify::write_jsonl(out, split.evaluation);
  }
  std::cout << "pairs=" << pairs.size() << " single_diagnosis=" << filtered.size()
            << " train=" << split.training.size() << " eval=" << split.evaluation.size() << " seed=" << seed << '\n';
  return 0;
}

int cmd_train(const std::string& train_path, const std::string& kb_path, double alpha, const std::string& out_path) {
  const auto kb = clarify::load_kb_file(kb_path);
  const auto examples = with_path(train_path, [](std::istream& in) { return clarify::read_training(in); });
  const auto model = clarify::NaiveBayesModel::train(examples, kb, alpha);
  auto out = clarify::open_output(out_path);
  clarify::save_model(model, out);
  std::cout << "examples=" << model.total_examples() << " symptoms=" << model.symptoms().size()
            << " diseases=" << model.diseases().size() << " alpha=" << model.alpha() << '\n';
  return 0;
}

int cmd_rank(const std::string& model_path, const std::string& symptoms, const std::string& excluded, std::size_t k) {
  const auto model = read_model(model_path);
  const auto ranking = clarify::rank_candidates(model, symptom_set(model, symptoms), symptom_set(model, excluded));
  std::printf("%-4s %-24s %14s  %-20s %-20s\n", "rank", "symptom", "ratio", "top", "runner_up");
  for (std::size_t i = 0; i < ranking.candidates.size() && i < k; ++i) {
    const auto& c = ranking.candidates[i];
    std::printf("%-4zu %-24s %14.6f  %-20s %-20s\n", i + 1, c.symptom.c_str(), c.ratio, c.top_disease.c_str(),
                c.runner_up.c_str());
  }
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& eval_path, std::size_t k, const std::string& format) {
  const auto model = read_model(model_path);
  const auto instances = with_path(eval_path, [](std::istream& in) { return clarify::read_instances(in); });
  if (instances.empty()) throw clarify::Error(eval_path + ": no evaluation instances");
  const auto report = clarify::evaluate(model, instances, k);
  std::cout << clarify::render_report(report, format == "csv" ? clarify::ReportFormat::kCsv
                                                              : clarify::ReportFormat::kText);
  return 0;
}

int cmd_faq(const std::string& faq_path, const std::string& question, double theta) {
  auto entries = with_path(faq_path, [](std::istream& in) { return clarify::faq::read_faq(in); });
  const auto index = clarify::faq::build_index(std::move(entries));
  std::cout << clarify::faq::to_json(clarify::faq::faq_pipeline(index, question, theta)).dump() << '\n';
  return 0;
}

void print_ranking(const std::vector<std::pair<clarify::TermId, double>>& ranking) {
  std::cout << "Diagnosis ranking:\n";
  for (const auto& [d, p] : ranking) std::printf("  %-28s %.4f\n", d.c_str(), p);
  std::fflush(stdout);
}

int cmd_chat(const std::string& model_path, const std::string& kb_path, const clarify::SessionConfig& config) {
  const auto kb = clarify::load_kb_file(kb_path);
  const auto model = read_model(model_path);
  const clarify::DialogEngine engine(model, kb, config);
  auto state = engine.start_session();
  std::cout << "Describe your symptoms:\n> " << std::flush;
  std::string line;
  if (!std::getline(std::cin, line)) return 0;
  auto [next, action] = engine.user_message(state, line);
  state = std::move(next);
  while (action.kind == clarify::ActionKind::kAsk) {
    std::cout << *action.question_text << " (yes/no)\n> " << std::flush;
    std::optional<clarify::Answer> answer;
    while (!answer) {
      if (!std::getline(std::cin, line)) {
        std::cout << "\n";
        return 0;
      }
      answer = clarify::parse_answer(line);
      if (!answer) std::cout << "Please answer yes or no.\n> " << std::flush;
    }
    std::tie(state, action) = engine.answer_clarification(state, *answer);
  }
  print_ranking(*action.diagnosis_ranking);
  return 0;
}

int cmd_serve(const clarify::ServiceConfig& config) {
  config.validate();
  clarify::Service service(config.session, config.faq_threshold);
  service.load_model(read_model(config.model_path), clarify::load_kb_file(config.kb_path));
  if (!config.faq_path.empty()) {
    auto entries = with_path(config.faq_path, [](std::istream& in) { return clarify::faq::read_faq(in); });
    service.load_faq(clarify::faq::build_index(std::move(entries)));
  }

  // Route SIGINT/SIGTERM to a watcher thread that stops the server.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  httplib::Server server;
  service.bind(server);
  if (!server.bind_to_port(config.host, config.port)) {
    std::cerr << "error: cannot bind " << config.host << ":" << config.port << '\n';
    return kRuntimeError;
  }
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  std::cerr << "listening on " << config.host << ":" << config.port << '\n';
  server.listen_after_bind();
  // Wake the watcher if the server stopped for another reason.
  if (watcher.joinable()) {
    pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
  }
  std::cerr << "shut down\n";
  return 0;
}

void parse_bind(const std::string& bind, clarify::ServiceConfig& config) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw UsageError("--bind must be host:port, got '" + bind + "'");
  config.host = bind.substr(0, colon);
  try {
    std::size_t used = 0;
    config.port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1 || config.port < 0 || config.port > 65535) throw std::out_of_range("port");
  } catch (const std::exception&) {
    throw UsageError("invalid port in --bind '" + bind + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clarifying-question dialog engine"};
  app.require_subcommand(1);

  std::string kb_path, corpus_path, train_path, eval_path, model_path, out_path, out_train, out_eval;
  std::string symptoms, excluded, format = "text", faq_path, question, bind = "127.0.0.1:8080";
  std::int64_t seed = 7;
  std::size_t n = 2000, k = 10, max_turns = 3;
  double alpha = 1.0, tau = 0.8, theta = clarify::faq::kDefaultThreshold;

  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic dialogue corpus");
  gen->add_option("--kb", kb_path, "Knowledge base JSON")->required();
  gen->add_option("--n", n, "Number of dialogues")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", out_path, "Output JSONL (default stdout)");

  auto* convert = app.add_subcommand("convert", "Filter a corpus and convert it to train/eval files");
  convert->add_option("--corpus", corpus_path, "Dialogue corpus JSONL")->required();
  convert->add_option("--kb", kb_path, "Knowledge base JSON")->required();
  convert->add_option("--seed", seed, "Hidden-symptom selection seed");
  convert->add_option("--out-train", out_train, "Training examples output")->required();
  convert->add_option("--out-eval", out_eval, "Evaluation instances output")->required();

  auto* train = app.add_subcommand("train", "Train the Naive Bayes model");
  train->add_option("--train", train_path, "Training examples JSONL")->required();
  train->add_option("--kb", kb_path, "Knowledge base JSON")->required();
  train->add_option("--alpha", alpha, "Smoothing pseudo-count")->check(CLI::PositiveNumber);
  train->add_option("--out-model", out_path, "Model output")->required();

  auto* rank = app.add_subcommand("rank", "Rank clarification candidates");
  rank->add_option("--model", model_path, "Model JSON")->required();
  rank->add_option("--symptoms", symptoms, "Comma-separated mentioned symptom ids");
  rank->add_option("--exclude", excluded, "Comma-separated denied symptom ids");
  rank->add_option("--k", k, "Rows to print")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "Recall/precision at k over evaluation instances");
  eval->add_option("--model", model_path, "Model JSON")->required();
  eval->add_option("--eval", eval_path, "Evaluation instances JSONL")->required();
  eval->add_option("--k", k, "Largest k")->check(CLI::PositiveNumber);
  eval->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

  auto* faq = app.add_subcommand("faq", "Answer or clarify a question against an FAQ file");
  faq->add_option("--faq", faq_path, "FAQ JSONL")->required();
  faq->add_option("--question", question, "User question")->required();
  faq->add_option("--theta", theta, "Retrieval threshold")->check(CLI::Range(0.0, 1.0));

  auto* chat = app.add_subcommand("chat", "Interactive symptom chat on stdin/stdout");
  chat->add_option("--model", model_path, "Model JSON")->required();
  chat->add_option("--kb", kb_path, "Knowledge base JSON")->required();
  chat->add_option("--tau", tau, "Diagnosis confidence threshold");
  chat->add_option("--max-turns", max_turns, "Clarifications before a forced diagnosis")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--bind", bind, "host:port")->envname("CLARIFY_BIND");
  serve->add_option("--model", model_path, "Model JSON")->envname("CLARIFY_MODEL")->required();
  serve->add_option("--kb", kb_path, "Knowledge base JSON")->envname("CLARIFY_KB")->required();
  serve->add_option("--faq", faq_path, "FAQ JSONL")->envname("CLARIFY_FAQ");
  serve->add_option("--tau", tau, "Diagnosis confidence threshold")->envname("CLARIFY_TAU");
  serve->add_option("--max-turns", max_turns, "Clarifications before a forced diagnosis")
      ->envname("CLARIFY_MAX_TURNS")
      ->check(CLI::PositiveNumber);
  serve->add_option("--theta", theta, "FAQ retrieval threshold")->envname("CLARIFY_THETA");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    const clarify::SessionConfig session{tau, max_turns};
    if (*gen) return cmd_gen_corpus(kb_path, n, seed, out_path);
    if (*convert) return cmd_convert(corpus_path, kb_path, seed, out_train, out_eval);
    if (*train) return cmd_train(train_path, kb_path, alpha, out_path);
    if (*rank) return cmd_rank(model_path, symptoms, excluded, k);
    if (*eval) return cmd_eval(model_path, eval_path, k, format);
    if (*faq) return cmd_faq(faq_path, question, theta);
    if (*chat) return cmd_chat(model_path, kb_path, session);
    if (*serve) {
      clarify::ServiceConfig config;
      parse_bind(bind, config);
      config.model_path = model_path;
      config.kb_path = kb_path;
      config.faq_path = faq_path;
      config.session = session;
      config.faq_threshold = theta;
      return cmd_serve(config);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const clarify::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
