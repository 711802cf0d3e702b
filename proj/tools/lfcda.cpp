// lfcda — symbolic logic rewrite engine and contrastive data generator.
//
// Subcommands: verify-rules, parse, explore, derive, gen-pairs.
// Exit codes: 0 success, 1 domain failure (no derivation, validation
// disagreement, audit violation), 2 usage or I/O error.

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lfcda/explore.hpp"
#include "lfcda/nl.hpp"
#include "lfcda/pairs.hpp"
#include "lfcda/rules.hpp"
#include "lfcda/semantics.hpp"
#include "lfcda/trace.hpp"
#include "lfcda/verbalize.hpp"

namespace {

using namespace lfcda;

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string id;
  while (std::getline(ss, id, ','))
    if (!id.empty()) out.push_back(id);
  return out;
}

// Rule source selection shared by the subcommands: an optional rule file
// replaces the builtin base; --rules picks an ordered id subset; --disable
// masks ids off.
struct RuleOptions {
  std::string rule_file;
  std::string subset_csv;
  std::string disable_csv;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rule-file", rule_file, "rule file replacing the builtin base");
    cmd->add_option("--rules", subset_csv, "comma-separated rule ids to use, in order");
    cmd->add_option("--disable", disable_csv, "comma-separated rule ids to disable");
  }

  RuleBase resolve() const {
    RuleBase rb = rule_file.empty() ? builtin_rules() : load_rules(rule_file);
    if (!subset_csv.empty()) rb = rb.subset(split_ids(subset_csv));
    for (const auto& id : split_ids(disable_csv)) rb.disable(id);
    return rb;
  }
};

int cmd_verify_rules(const std::string& rule_file) {
  RuleBase rb;
  try {
    rb = rule_file.empty() ? builtin_rules() : load_rules(rule_file);
  } catch (const RuleFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  ValidationReport report = validate_rules(rb);
  for (const auto& v : report.verdicts) {
    const RewriteRule* r = rb.find(v.id);
    std::cout << v.id << " " << (r ? r->name : "?") << " label=" << v.declared_label
              << " oracle=" << (v.oracle_valid ? "valid" : "invalid") << " "
              << (v.agree ? "agree" : "MISMATCH") << "\n";
  }
  std::size_t n1 = 0, n0 = 0;
  for (const auto& r : rb.rules()) (r.label == 1 ? n1 : n0)++;
  std::cout << (report.ok ? "ok" : "DISAGREEMENT") << ": " << rb.size() << " rules (" << n1
            << " label-1, " << n0 << " label-0)\n";
  return report.ok ? 0 : 1;
}

int cmd_parse(const std::vector<std::string>& sentences) {
  VarTable vt;
  try {
    for (const auto& s : sentences) {
      ParseOutcome po = formalize(s, vt);
      std::cout << print_formula(po.formula, PrintStyle::Pretty,
                                 [](const std::string& name) {
                                   int id = VarTable::id_of_var_name(name);
                                   return id >= 0 ? VarTable::display_name(id) : name;
                                 })
                << "\n";
    }
  } catch (const EmptyPhrase& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  for (int id = 0; id < vt.size(); ++id)
    std::cout << VarTable::display_name(id) << ": " << display_phrase(vt.phrase(id)) << "\n";
  return 0;
}

int cmd_explore(const std::string& formula_text, int depth, const RuleOptions& ropt,
                const std::string& out_path, std::size_t max_states, std::size_t node_cap) {
  Formula start;
  RuleBase rb;
  try {
    start = parse_formula(formula_text);
    rb = ropt.resolve();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  SearchConfig cfg;
  cfg.d_max = depth;
  cfg.node_cap = node_cap;
  if (max_states > 0) cfg.max_results = max_states;
  ExplorationResult res = explore(start, rb, cfg);
  std::string serialized = serialize_result(res);
  if (out_path.empty()) {
    std::cout << serialized;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    out << serialized;
  }
  std::cerr << "states: " << res.s1.size() << " correct (s1), " << res.s2.size() << " error (s2); expanded "
            << res.stats.nodes_expanded << ", prunes: depth " << res.stats.depth_prunes << ", exhaustion "
            << res.stats.exhaustion_prunes << ", duplicate " << res.stats.duplicate_prunes << ", re-reached "
            << res.stats.result_duplicates << (res.stats.truncated ? ", truncated" : "") << "\n";
  return 0;
}

int cmd_derive(const std::string& from_text, const std::string& to_text, int depth, const RuleOptions& ropt) {
  try {
    Formula from = parse_formula(from_text);
    Formula to = parse_formula(to_text);
    RuleBase rb = ropt.resolve();
    SearchConfig cfg;
    cfg.d_max = depth;
    cfg.target = to;
    auto path = prove(from, to, rb, cfg);
    if (!path) {
      std::cout << "NO DERIVATION within depth " << depth << "\n";
      return 1;
    }
    std::cout << format_path(*path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct GenPairsOptions {
  std::string seeds_path;
  std::string out_dir = ".";
  int depth = 4;
  std::uint64_t seed = 42;  // the pipeline's fixed default
  std::string ratio = "1:1";
  std::size_t max_states = 0;
  std::size_t node_cap = 12;
  long long train_n = -1, dev_n = -1, test_n = -1;  // absolute split sizes
  std::vector<double> fractions = {8.0 / 14, 3.0 / 14, 3.0 / 14};
  std::string mode = "template";
  std::string symbolic_out;
  bool fallback_template = false;
  bool audit = false;
  RuleOptions rules;
  LlmConfig llm = LlmConfig::from_env();
};

nlohmann::ordered_json record_json(const VerbalizedPair& v) {
  nlohmann::ordered_json rec;
  rec["id"] = v.pair.id;
  rec["seed_id"] = v.pair.seed_id;
  rec["relation"] = v.pair.relation;
  rec["label"] = v.pair.label;
  rec["formula_a"] = print_formula(v.pair.formula_a);
  rec["formula_b"] = print_formula(v.pair.formula_b);
  rec["text_a"] = v.text_a;
  rec["text_b"] = v.text_b;
  rec["template_ids"] = v.mode == "template" ? nlohmann::ordered_json{v.template_a, v.template_b}
                                             : nlohmann::ordered_json::array();
  rec["derivation_text"] = v.pair.derivation_text;
  rec["mode"] = v.mode;
  return rec;
}

std::vector<std::string> read_seed_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seeds file '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  return lines;
}

// One seed line is one statement, optionally several sentences joined by
// ';' that are conjoined into a single start formula.
Formula seed_formula(const std::string& line, VarTable& vt) {
  std::vector<Formula> parts;
  std::stringstream ss(line);
  std::string sentence;
  while (std::getline(ss, sentence, ';'))
    if (sentence.find_first_not_of(" \t") != std::string::npos) parts.push_back(formalize(sentence, vt).formula);
  if (parts.empty()) throw EmptyPhrase("seed line is empty");
  Formula f = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) f = Formula::conjunction(std::move(f), parts[i]);
  return f;
}

int cmd_gen_pairs(const GenPairsOptions& opt) {
  int ratio_pos = 1, ratio_neg = 1;
  {
    std::size_t colon = opt.ratio.find(':');
    if (colon == std::string::npos) {
      std::cerr << "error: --ratio must look like P:N\n";
      return 2;
    }
    try {
      ratio_pos = std::stoi(opt.ratio.substr(0, colon));
      ratio_neg = std::stoi(opt.ratio.substr(colon + 1));
    } catch (const std::exception&) {
      ratio_pos = 0;
    }
    if (ratio_pos <= 0 || ratio_neg <= 0) {
      std::cerr << "error: --ratio must be two positive integers\n";
      return 2;
    }
  }
  bool any_count = opt.train_n >= 0 || opt.dev_n >= 0 || opt.test_n >= 0;
  bool all_counts = opt.train_n >= 0 && opt.dev_n >= 0 && opt.test_n >= 0;
  if (any_count && !all_counts) {
    std::cerr << "error: --train, --dev and --test must be given together\n";
    return 2;
  }
  if (opt.mode != "template" && opt.mode != "llm") {
    std::cerr << "error: --mode must be 'template' or 'llm'\n";
    return 2;
  }

  std::vector<std::string> lines;
  VarTable vt;
  std::vector<Formula> seeds;
  RuleBase rb;
  try {
    lines = read_seed_lines(opt.seeds_path);
    for (const auto& line : lines) seeds.push_back(seed_formula(line, vt));
    rb = opt.rules.resolve();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  SearchConfig cfg;
  cfg.d_max = opt.depth;
  cfg.node_cap = opt.node_cap;
  if (opt.max_states > 0) cfg.max_results = opt.max_states;

  // seeds are independent; explore them concurrently and merge in seed
  // order so output stays deterministic
  std::vector<SamplePair> pairs;
  PairStats stats;
  std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t batch = 0; batch < seeds.size(); batch += workers) {
    std::size_t end = std::min(seeds.size(), batch + workers);
    std::vector<std::future<std::pair<std::vector<SamplePair>, PairStats>>> futures;
    for (std::size_t i = batch; i < end; ++i) {
      futures.push_back(std::async(std::launch::async, [&, i] {
        ExplorationResult res = explore(seeds[i], rb, cfg);
        std::uint64_t mixed = opt.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i);
        PairStats st;
        auto built = build_pairs(res, seeds[i], static_cast<int>(i), mixed, ratio_pos, ratio_neg, &st);
        return std::make_pair(std::move(built), st);
      }));
    }
    for (auto& fut : futures) {
      auto [built, st] = fut.get();
      stats.positives += st.positives;
      stats.negatives += st.negatives;
      stats.dropped_negatives += st.dropped_negatives;
      stats.balanced_away += st.balanced_away;
      pairs.insert(pairs.end(), built.begin(), built.end());
    }
  }

  // identical pairs can arise from different seeds when phrases repeat
  {
    std::set<std::string> seen;
    std::vector<SamplePair> unique;
    unique.reserve(pairs.size());
    for (auto& p : pairs)
      if (seen.insert(p.id).second) unique.push_back(std::move(p));
    pairs = std::move(unique);
  }

  if (!opt.symbolic_out.empty()) {
    std::ofstream out(opt.symbolic_out);
    if (!out) {
      std::cerr << "error: cannot write " << opt.symbolic_out << "\n";
      return 2;
    }
    for (const auto& p : pairs) out << symbolic_record(p) << "\n";
    std::cout << "symbolic: " << pairs.size() << " pairs -> " << opt.symbolic_out << "\n";
  }

  DatasetSplits splits;
  try {
    if (all_counts)
      splits = split_dataset(pairs,
                             std::array<std::size_t, 3>{static_cast<std::size_t>(opt.train_n),
                                                        static_cast<std::size_t>(opt.dev_n),
                                                        static_cast<std::size_t>(opt.test_n)},
                             opt.seed);
    else
      splits = split_dataset(pairs, std::array<double, 3>{opt.fractions[0], opt.fractions[1], opt.fractions[2]},
                             opt.seed);
  } catch (const InsufficientPairs& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  VerbalizeMode mode = opt.mode == "llm" ? VerbalizeMode::Llm : VerbalizeMode::Template;
  auto emit = [&](const std::vector<SamplePair>& split, const std::string& name) -> std::size_t {
    std::vector<VerbalizedPair> verbalized =
        verbalize_pairs(split, vt, mode, opt.seed, &opt.llm, opt.fallback_template);
    std::string path = opt.out_dir + "/" + name + ".jsonl";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    std::size_t pos = 0;
    for (const auto& v : verbalized) {
      out << record_json(v).dump() << "\n";
      if (v.pair.label == 1) ++pos;
    }
    std::cout << name << ": " << verbalized.size() << " pairs (" << pos << " positive, "
              << verbalized.size() - pos << " negative) -> " << path << "\n";
    return verbalized.size();
  };

  try {
    emit(splits.train, "train");
    emit(splits.dev, "dev");
    emit(splits.test, "test");
  } catch (const LlmError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "candidates: " << stats.positives << " positive, " << stats.negatives
            << " negative; dropped (oracle-entailed negatives): " << stats.dropped_negatives
            << "; balanced away: " << stats.balanced_away << "\n";

  if (opt.audit) {
    std::size_t violations = 0, audited = 0;
    for (const auto* split : {&splits.train, &splits.dev, &splits.test}) {
      for (const auto& p : *split) {
        ++audited;
        bool ok = entails(p.formula_a, p.formula_b) == (p.label == 1);
        if (!ok) {
          ++violations;
          std::cerr << "audit violation: " << p.id << " label=" << p.label << " " << print_formula(p.formula_a)
                    << " vs " << print_formula(p.formula_b) << "\n";
        }
      }
    }
    std::cout << "audit: " << (violations == 0 ? "ok" : "FAILED") << " (" << audited << " records, "
              << violations << " violations)\n";
    if (violations > 0) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic propositional-logic rewriting and contrastive pair generation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value config file; subcommand options go in [subcommand] sections")
      ->configurable(false);

  // verify-rules
  std::string verify_file;
  auto* verify = app.add_subcommand("verify-rules", "audit rule labels against the truth-table oracle");
  verify->add_option("rule-file", verify_file, "rule file (builtin base when omitted)");

  // parse
  std::vector<std::string> sentences;
  auto* parse = app.add_subcommand("parse", "formalize sentences into propositional formulas");
  parse->add_option("sentence", sentences, "sentences to formalize")->required();

  // explore
  std::string explore_formula, explore_out;
  int explore_depth = 4;
  std::size_t explore_max_states = 0;
  std::size_t explore_node_cap = 64;
  RuleOptions explore_rules;
  auto* explore_cmd = app.add_subcommand("explore", "enumerate the bounded rewrite neighborhood");
  explore_cmd->add_option("--formula", explore_formula, "start formula")->required();
  explore_cmd->add_option("--depth", explore_depth, "depth bound (default 4)");
  explore_cmd->add_option("--out", explore_out, "output path for JSONL states (default stdout)");
  explore_cmd->add_option("--max-states", explore_max_states, "truncate after this many recorded states");
  explore_cmd->add_option("--node-cap", explore_node_cap, "suppress rewrites past this formula size (default 64)");
  explore_rules.attach(explore_cmd);

  // derive
  std::string derive_from, derive_to;
  int derive_depth = 8;
  RuleOptions derive_rules;
  auto* derive = app.add_subcommand("derive", "search a derivation from one formula to another");
  derive->add_option("--from", derive_from, "premise formula")->required();
  derive->add_option("--to", derive_to, "target formula")->required();
  derive->add_option("--depth", derive_depth, "depth bound (default 8)");
  derive_rules.attach(derive);

  // gen-pairs
  GenPairsOptions gp;
  auto* gen = app.add_subcommand("gen-pairs", "run the full seed->explore->pair->verbalize pipeline");
  gen->add_option("--seeds", gp.seeds_path, "seed sentence file")->required();
  gen->add_option("--out-dir", gp.out_dir, "output directory (default .)");
  gen->add_option("--depth", gp.depth, "exploration depth bound (default 4)");
  gen->add_option("--seed", gp.seed, "random seed (default 42)");
  gen->add_option("--ratio", gp.ratio, "positive:negative ratio (default 1:1)");
  gen->add_option("--max-states", gp.max_states, "states kept per seed exploration (default unbounded)");
  gen->add_option("--node-cap", gp.node_cap, "suppress rewrites past this formula size (default 12)");
  gen->add_option("--train", gp.train_n, "absolute train split size");
  gen->add_option("--dev", gp.dev_n, "absolute dev split size");
  gen->add_option("--test", gp.test_n, "absolute test split size");
  gen->add_option("--fractions", gp.fractions, "train,dev,test fractions (default 8/14,3/14,3/14)")->expected(3);
  gen->add_option("--mode", gp.mode, "verbalization mode: template (default) or llm");
  gen->add_flag("--fallback-template", gp.fallback_template, "fall back to templates when an LLM call fails");
  gen->add_flag("--audit", gp.audit, "re-run the oracle over every emitted record");
  gen->add_option("--symbolic-out", gp.symbolic_out, "also write the balanced pre-verbalization pairs as JSONL");
  gen->add_option("--llm-endpoint", gp.llm.endpoint, "OpenAI-compatible endpoint (or LFCDA_LLM_ENDPOINT)");
  gen->add_option("--llm-model", gp.llm.model, "model name (or LFCDA_LLM_MODEL)");
  gen->add_option("--llm-key", gp.llm.api_key, "API key (or LFCDA_LLM_KEY)");
  gp.rules.attach(gen);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return cmd_verify_rules(verify_file);
    if (*parse) return cmd_parse(sentences);
    if (*explore_cmd) return cmd_explore(explore_formula, explore_depth, explore_rules, explore_out, explore_max_states, explore_node_cap);
    if (*derive) return cmd_derive(derive_from, derive_to, derive_depth, derive_rules);
    if (*gen) return cmd_gen_pairs(gp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
