// Acceptance suite: runs every pipeline-level criterion end to end and
// prints one PASS/FAIL line each. Usage: acceptance <cli-binary> <data-dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "lfcda/explore.hpp"
#include "lfcda/nl.hpp"
#include "lfcda/pairs.hpp"
#include "lfcda/rules.hpp"
#include "lfcda/semantics.hpp"
#include "lfcda/trace.hpp"
#include "lfcda/verbalize.hpp"

using namespace lfcda;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_data;
fs::path g_scratch;
std::vector<std::string> g_failures;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct Criterion {
  double seconds = 0;
  std::vector<std::string> problems;
  std::string note;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

void report(int number, const std::string& title, const Criterion& c, double budget_s) {
  bool ok = c.problems.empty() && c.seconds <= budget_s;
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title;
  if (!c.note.empty()) std::cout << " — " << c.note;
  std::cout << " (" << std::fixed << std::setprecision(2) << c.seconds << " s, budget " << budget_s << " s)\n";
  if (c.seconds > budget_s) std::cout << "       over time budget\n";
  for (const auto& p : c.problems) std::cout << "       " << p << "\n";
  if (!ok) g_failures.push_back("criterion " + std::to_string(number));
}

template <typename F>
Criterion timed(F&& body) {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  body(c);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

// ---------------------------------------------------------------- criteria

// Rule validity audit: verify-rules exits 0, every label-1 rule oracle-valid
// and every label-0 rule oracle-invalid.
void criterion_1() {
  Criterion c = timed([](Criterion& c) {
    RunResult r = run_cli("verify-rules");
    c.expect(r.exit_code == 0, "verify-rules exit code " + std::to_string(r.exit_code));
    c.expect(r.output.find("MISMATCH") == std::string::npos, "a rule disagreed with the oracle");

    ValidationReport report = validate_rules(builtin_rules());
    c.expect(report.ok, "library validation disagreed");
    int label1 = 0, label0 = 0;
    for (const auto& v : report.verdicts) {
      if (v.declared_label == 1) {
        ++label1;
        c.expect(v.oracle_valid && v.agree, "label-1 rule " + v.id + " not oracle-valid");
      } else {
        ++label0;
        c.expect(!v.oracle_valid && v.agree, "label-0 rule " + v.id + " not oracle-invalid");
      }
    }
    c.expect(label0 == 4, "expected 4 label-0 rules, found " + std::to_string(label0));
    c.note = std::to_string(label1) + " label-1 valid, " + std::to_string(label0) + " label-0 invalid";
  });
  report(1, "rule validity audit (verify-rules exits 0)", c, 1.0);
}

// Modus ponens end to end: the two Figure-3 sentences formalize to a -> b
// and a, and derive returns the one-step ModusPonens trace.
void criterion_2() {
  Criterion c = timed([](Criterion& c) {
    VarTable vt;
    Formula conditional = formalize("if it rains, the ground gets wet", vt).formula;
    Formula fact = formalize("it rains", vt).formula;
    c.expect(conditional == parse_formula("a -> b"), "conditional is not alpha -> beta");
    c.expect(fact == parse_formula("a"), "fact is not alpha");
    c.expect(vt.phrase(0) == "rain" && display_phrase(vt.phrase(1)) == "ground wet",
             "glossary is not {alpha: rain, beta: ground wet}");

    RunResult r = run_cli("derive --from \"(a -> b) & a\" --to b");
    c.expect(r.exit_code == 0, "derive exit code " + std::to_string(r.exit_code));
    c.expect(r.output.find("1. ModusPonens: (a -> b) & a → b") != std::string::npos,
             "missing one-step ModusPonens line in:\n" + r.output);
    c.expect(r.output.find("2.") == std::string::npos, "trace has more than one step");
    c.expect(r.output.find("CONCLUSION: b [label=1]") != std::string::npos, "missing conclusion");
  });
  report(2, "modus ponens end-to-end", c, 1.0);
}

// Alternative derivation with I1 unavailable: multi-step, oracle-sound.
void criterion_3() {
  Criterion c = timed([](Criterion& c) {
    RunResult r = run_cli("derive --from \"(a -> b) & a\" --to b --disable I1 --depth 8");
    c.expect(r.exit_code == 0, "derive exit code " + std::to_string(r.exit_code));
    c.expect(r.output.find("CONCLUSION: b [label=1]") != std::string::npos, "derivation did not reach b");
    c.expect(r.output.find("ModusPonens") == std::string::npos, "disabled rule I1 appeared in the trace");

    SearchConfig cfg;
    cfg.d_max = 8;
    cfg.disabled_rules = {"I1"};
    cfg.target = parse_formula("b");
    auto path = prove(parse_formula("(a -> b) & a"), parse_formula("b"), builtin_rules(), cfg);
    c.expect(path.has_value(), "prove found no path within depth 8");
    if (path) {
      c.expect(path->steps.size() >= 2, "path is not multi-step");
      c.expect(path->final() == parse_formula("b"), "path does not end at b");
      for (const auto& s : path->steps) {
        c.expect(s.rule_id != "I1", "I1 used despite being disabled");
        c.expect(entails(s.before, s.after), "oracle rejected step " + format_step(s));
      }
      c.note = std::to_string(path->steps.size()) + " steps, each oracle-verified";
    }
  });
  report(3, "alternative derivation with I1 disabled", c, 5.0);
}

std::vector<ExplorationResult> g_c4_results;  // shared with criterion 5

// Explorer agrees with an independent breadth-first closure.
void criterion_4() {
  Criterion c = timed([](Criterion& c) {
    std::mt19937_64 rng(20250808);
    const std::vector<std::vector<std::string>> rule_sets = {
        {"I1", "E2"},
        {"E8", "E9", "F1"},
        {"E1", "E6", "I5", "F1"},
        {"E2", "E14", "I6", "F4"},
        {"E19", "E13", "I4", "F3"},
    };
    auto random_formula = [&rng](auto&& self, int depth) -> Formula {
      if (depth == 0 || rng() % 4 == 0)
        return Formula::atom(std::string(1, static_cast<char>('a' + rng() % 4)));
      switch (rng() % 5) {
        case 0: return Formula::negation(self(self, depth - 1));
        case 1: return Formula::conjunction(self(self, depth - 1), self(self, depth - 1));
        case 2: return Formula::disjunction(self(self, depth - 1), self(self, depth - 1));
        case 3: return Formula::implication(self(self, depth - 1), self(self, depth - 1));
        default: return Formula::biconditional(self(self, depth - 1), self(self, depth - 1));
      }
    };
    int agreements = 0;
    for (int i = 0; i < 20; ++i) {
      Formula start = random_formula(random_formula, 1 + static_cast<int>(rng() % 4));
      RuleBase rb = builtin_rules().subset(rule_sets[static_cast<std::size_t>(i) % rule_sets.size()]);
      SearchConfig cfg;
      cfg.d_max = 1 + static_cast<int>(rng() % 2);
      ExplorationResult res = explore(start, rb, cfg);

      // independent brute-force breadth-first closure
      std::string start_key = print_formula(start);
      std::set<std::string> closure;
      std::set<std::string> seen{start_key};
      std::vector<std::pair<Formula, int>> frontier{{start, 0}};
      for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
        auto [f, d] = frontier[qi];
        if (d >= cfg.d_max) continue;
        for (const Rewrite& rw : applicable_rewrites(f, rb, cfg.node_cap)) {
          std::string key = print_formula(rw.after);
          if (key != start_key) closure.insert(key);
          if (seen.insert(key).second) frontier.emplace_back(rw.after, d + 1);
        }
      }

      std::set<std::string> explored;
      for (const auto& e : res.s1) explored.insert(print_formula(e.formula));
      for (const auto& e : res.s2) explored.insert(print_formula(e.formula));
      if (explored == closure)
        ++agreements;
      else
        c.expect(false,
                 "instance " + std::to_string(i) + ": explore set != BFS closure for " + print_formula(start));
      g_c4_results.push_back(std::move(res));
    }
    // two fixed instances guarantee error-rule paths for criterion 5
    const std::vector<std::pair<const char*, std::vector<std::string>>> fixed = {
        {"a -> b", {"E8", "E9", "F1"}},
        {"~(a & b)", {"E2", "E6", "F4"}},
    };
    for (const auto& [text, ids] : fixed) {
      Formula start = parse_formula(text);
      RuleBase rb = builtin_rules().subset(ids);
      SearchConfig cfg;
      cfg.d_max = 2;
      ExplorationResult res = explore(start, rb, cfg);
      std::string start_key = print_formula(start);
      std::set<std::string> closure;
      std::set<std::string> seen{start_key};
      std::vector<std::pair<Formula, int>> frontier{{start, 0}};
      for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
        auto [f, d] = frontier[qi];
        if (d >= cfg.d_max) continue;
        for (const Rewrite& rw : applicable_rewrites(f, rb, cfg.node_cap)) {
          std::string key = print_formula(rw.after);
          if (key != start_key) closure.insert(key);
          if (seen.insert(key).second) frontier.emplace_back(rw.after, d + 1);
        }
      }
      std::set<std::string> explored;
      for (const auto& e : res.s1) explored.insert(print_formula(e.formula));
      for (const auto& e : res.s2) explored.insert(print_formula(e.formula));
      c.expect(explored == closure, std::string("fixed instance diverged from closure: ") + text);
      c.expect(!res.s2.empty(), std::string("fixed instance produced no error states: ") + text);
      g_c4_results.push_back(std::move(res));
    }
    c.note = std::to_string(agreements) + "/20 random instances agree; 2 fixed error-rule instances agree";
  });
  report(4, "DFS result set equals breadth-first closure", c, 30.0);
}

// Label propagation over every explored path from criterion 4.
void criterion_5() {
  Criterion c = timed([](Criterion& c) {
    std::size_t paths = 0, error_paths = 0;
    for (const auto& res : g_c4_results) {
      for (const auto* side : {&res.s1, &res.s2}) {
        for (const auto& e : *side) {
          ++paths;
          int min_label = 1;
          bool has_error_step = false;
          for (const auto& s : e.path.steps) {
            min_label = std::min(min_label, s.step_label);
            if (s.step_label == 0) has_error_step = true;
          }
          c.expect(e.path.label() == min_label, "path label != min of step labels");
          if (has_error_step) {
            ++error_paths;
            c.expect(e.path.label() == 0, "path with an error step not labeled 0");
          }
          c.expect((side == &res.s1) == (e.path.label() == 1), "state recorded in the wrong set");
        }
      }
    }
    c.expect(paths > 100, "too few paths exercised: " + std::to_string(paths));
    c.expect(error_paths > 0, "no error paths exercised");
    c.note = std::to_string(paths) + " paths, " + std::to_string(error_paths) + " through error rules";
  });
  report(5, "label propagation (min over step labels)", c, 30.0);
}

// S1 soundness over the nine seed statements at depth 3.
void criterion_6() {
  Criterion c = timed([](Criterion& c) {
    std::ifstream in(g_data / "seeds.txt");
    c.expect(static_cast<bool>(in), "cannot open seeds file");
    VarTable vt;
    std::vector<Formula> seeds;
    std::string line;
    while (std::getline(in, line)) {
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::vector<Formula> parts;
      std::stringstream ss(line);
      std::string sentence;
      while (std::getline(ss, sentence, ';'))
        if (sentence.find_first_not_of(" \t") != std::string::npos)
          parts.push_back(formalize(sentence, vt).formula);
      Formula f = parts.front();
      for (std::size_t i = 1; i < parts.size(); ++i) f = Formula::conjunction(f, parts[i]);
      seeds.push_back(f);
    }
    c.expect(seeds.size() == 9, "expected 9 seed statements, got " + std::to_string(seeds.size()));

    std::size_t states = 0, violations = 0;
    for (const auto& seed : seeds) {
      SearchConfig cfg;
      cfg.d_max = 3;
      ExplorationResult res = explore(seed, builtin_rules(), cfg);
      for (const auto& e : res.s1) {
        ++states;
        if (!entails(seed, e.formula)) {
          ++violations;
          c.expect(false, "s1 state not entailed: " + print_formula(e.formula));
          continue;
        }
        bool eq_only = true;
        for (const auto& s : e.path.steps)
          if (s.rule_kind != RuleKind::Equivalence) eq_only = false;
        if (eq_only && !equivalent(seed, e.formula)) {
          ++violations;
          c.expect(false, "equivalence-only s1 state not equivalent: " + print_formula(e.formula));
        }
      }
    }
    c.expect(violations == 0, std::to_string(violations) + " violations");
    c.note = std::to_string(states) + " s1 states over 9 seeds, 0 violations";
  });
  report(6, "S1 soundness over the 9 seeds at depth 3", c, 60.0);
}

// gen-pairs consistency, balance and the 8000/3000/3000 split.
void criterion_7() {
  Criterion c = timed([](Criterion& c) {
    fs::path out = g_scratch / "c7";
    fs::create_directories(out);
    RunResult r = run_cli("gen-pairs --seeds " + (g_data / "seeds.txt").string() + " --out-dir " + out.string() +
                          " --train 8000 --dev 3000 --test 3000 --audit");
    c.expect(r.exit_code == 0, "gen-pairs exit code " + std::to_string(r.exit_code) + ":\n" + r.output);
    c.expect(r.output.find("audit: ok") != std::string::npos, "audit did not report ok");

    const std::array<std::pair<const char*, std::size_t>, 3> expected = {
        {{"train", 8000}, {"dev", 3000}, {"test", 3000}}};
    for (const auto& [name, want] : expected) {
      fs::path file = out / (std::string(name) + ".jsonl");
      c.expect(fs::exists(file), std::string(name) + ".jsonl missing");
      if (!fs::exists(file)) continue;
      std::size_t got = count_lines(file);
      c.expect(got == want,
               std::string(name) + " has " + std::to_string(got) + " records, want " + std::to_string(want));

      // independent re-audit: labels against the oracle, balance per split
      std::ifstream in(file);
      std::string line;
      long long pos = 0, neg = 0;
      std::size_t label_violations = 0;
      while (std::getline(in, line)) {
        auto rec = nlohmann::json::parse(line);
        Formula a = parse_formula(rec["formula_a"].get<std::string>());
        Formula b = parse_formula(rec["formula_b"].get<std::string>());
        int label = rec["label"].get<int>();
        (label == 1 ? pos : neg)++;
        if (entails(a, b) != (label == 1)) ++label_violations;
      }
      c.expect(label_violations == 0,
               std::string(name) + ": " + std::to_string(label_violations) + " oracle violations");
      c.expect(std::abs(pos - neg) <= 1,
               std::string(name) + " imbalance: " + std::to_string(pos) + " vs " + std::to_string(neg));
    }
    c.note = "8000/3000/3000 records, 1:1 per split, every label re-verified";
  });
  report(7, "pair consistency, balance and split sizes", c, 300.0);
}

// Two runs with seed 42 produce byte-identical files.
void criterion_8() {
  Criterion c = timed([](Criterion& c) {
    fs::path out_a = g_scratch / "c8a", out_b = g_scratch / "c8b";
    fs::create_directories(out_a);
    fs::create_directories(out_b);
    std::string args = "gen-pairs --seeds " + (g_data / "seeds.txt").string() +
                       " --seed 42 --train 2000 --dev 700 --test 700 --out-dir ";
    RunResult ra = run_cli(args + out_a.string());
    RunResult rb = run_cli(args + out_b.string());
    c.expect(ra.exit_code == 0 && rb.exit_code == 0, "gen-pairs failed");
    for (const char* name : {"train", "dev", "test"}) {
      std::ifstream fa(out_a / (std::string(name) + ".jsonl"), std::ios::binary);
      std::ifstream fb(out_b / (std::string(name) + ".jsonl"), std::ios::binary);
      std::stringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      c.expect(!sa.str().empty(), std::string(name) + ".jsonl is empty");
      c.expect(sa.str() == sb.str(), std::string(name) + ".jsonl differs between runs");
    }
  });
  report(8, "byte-identical gen-pairs runs with seed 42", c, 300.0);
}

// Trace lines match exactly one of the two step templates and re-parse.
void criterion_9() {
  Criterion c = timed([](Criterion& c) {
    std::vector<Rewrite> rewrites;
    for (const char* text : {"(a -> b) & a", "~(a & b) | (c -> a)", "(a <-> b) & ~c"}) {
      SearchConfig cfg;
      cfg.d_max = 2;
      cfg.max_results = 60;
      ExplorationResult res = explore(parse_formula(text), builtin_rules(), cfg);
      for (const auto* side : {&res.s1, &res.s2})
        for (const auto& e : *side)
          for (const auto& s : e.path.steps) rewrites.push_back(s);
    }
    std::size_t checked = 0, whole = 0, sub = 0;
    const std::string arrow = " → ";
    for (const auto& r : rewrites) {
      if (checked >= 150) break;
      ++checked;
      std::string line = format_step(r);
      std::size_t colon = line.find(": ");
      bool shape_ok = colon != std::string::npos;
      c.expect(shape_ok, "no rule-name separator in: " + line);
      if (!shape_ok) continue;
      std::string rule = line.substr(0, colon);
      bool alnum = !rule.empty();
      for (char ch : rule)
        if (!std::isalnum(static_cast<unsigned char>(ch))) alnum = false;
      c.expect(alnum, "rule name is not a bare token: " + rule);
      std::string rest = line.substr(colon + 2);
      std::size_t ar = rest.find(arrow);
      c.expect(ar != std::string::npos, "no arrow in: " + line);
      if (ar == std::string::npos) continue;
      c.expect(rest.find(arrow, ar + arrow.size()) == std::string::npos, "two arrows in: " + line);
      std::string before = rest.substr(0, ar);
      std::string tail = rest.substr(ar + arrow.size());
      std::size_t within = tail.rfind(" within ");
      if (within == std::string::npos) {
        ++whole;
        c.expect(r.position.empty(), "whole-formula template used below the root: " + line);
        c.expect(parse_formula(before) == r.before, "before does not re-parse: " + line);
        c.expect(parse_formula(tail) == r.after, "after does not re-parse: " + line);
      } else {
        ++sub;
        c.expect(!r.position.empty(), "subformula template used at the root: " + line);
        c.expect(parse_formula(before) == r.sub_before, "sub-before does not re-parse: " + line);
        c.expect(parse_formula(tail.substr(0, within)) == r.sub_after, "sub-after does not re-parse: " + line);
        c.expect(parse_formula(tail.substr(within + 8)) == r.before, "parent does not re-parse: " + line);
      }
    }
    c.expect(checked >= 100, "only " + std::to_string(checked) + " lines sampled");
    c.expect(whole > 0 && sub > 0, "both templates must be exercised");
    c.note = std::to_string(checked) + " lines (" + std::to_string(whole) + " whole-formula, " +
             std::to_string(sub) + " subformula)";
  });
  report(9, "trace lines match the two step templates and re-parse", c, 30.0);
}

// LLM contract against a local mock server; no real credentials.
void criterion_10() {
  Criterion c = timed([](Criterion& c) {
    VarTable vt;
    vt.map_phrase("rain");
    vt.map_phrase("ground get wet");
    SamplePair pair;
    pair.id = "acceptance";
    pair.relation = "implication";
    pair.label = 1;
    pair.formula_a = parse_formula("(a -> b) & a");
    pair.formula_b = parse_formula("b");
    PromptSpec spec = emit_prompt(pair, vt);

    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      nlohmann::json body;
      body["choices"] = {
          {{"message",
            {{"role", "assistant"},
             {"content",
              R"({"text_a": "If it rains, the ground gets wet, and it rains.", "text_b": "The ground gets wet."})"}}}}};
      res.set_content(body.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread listener([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    LlmConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    cfg.model = "mock";
    cfg.backoff_ms = 1;
    try {
      LlmReply reply = llm_instantiate(spec, cfg);
      c.expect(reply.text_a == "If it rains, the ground gets wet, and it rains.", "text_a mismatch");
      c.expect(reply.text_b == "The ground gets wet.", "text_b mismatch");
    } catch (const std::exception& e) {
      c.expect(false, std::string("mock round trip failed: ") + e.what());
    }
    server.stop();
    listener.join();

    LlmConfig dead = cfg;
    dead.endpoint = "http://127.0.0.1:9";
    dead.timeout_sec = 1;
    bool network_error = false;
    std::string message;
    try {
      llm_instantiate(spec, dead);
    } catch (const LlmNetworkError& e) {
      network_error = true;
      message = e.what();
    } catch (const std::exception& e) {
      message = e.what();
    }
    c.expect(network_error, "unreachable endpoint did not raise a network error: " + message);
    c.expect(message.find("after 3 attempts") != std::string::npos,
             "error does not report 3 attempts: " + message);
  });
  report(10, "LLM mode contract against a local mock server", c, 60.0);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <cli-binary> <data-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_data = argv[2];
  g_scratch = fs::temp_directory_path() / ("lfcda-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(g_scratch);

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();

  if (g_failures.empty()) {
    std::cout << "acceptance: all 10 criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << g_failures.size() << " criteria failed\n";
  return 1;
}
