#include "lfcda/verbalize.hpp"

#include <atomic>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

using namespace lfcda;

namespace {

VarTable figure_table() {
  VarTable vt;
  vt.map_phrase("rain");           // a
  vt.map_phrase("ground get wet"); // b
  vt.map_phrase("wind blow");      // c
  return vt;
}

SamplePair mp_pair() {
  SamplePair p;
  p.id = "deadbeef00000000";
  p.seed_id = 0;
  p.relation = "implication";
  p.label = 1;
  p.formula_a = parse_formula("(a -> b) & a");
  p.formula_b = parse_formula("b");
  p.derivation_text = "PREMISE: (a -> b) & a\n1. ...\n";
  return p;
}

}  // namespace

TEST_CASE("verbalize_formula: templates and atoms") {
  VarTable vt = figure_table();
  CHECK(verbalize_formula(parse_formula("a -> b"), vt, 1) == "If rain, then ground wet.");
  CHECK(verbalize_formula(parse_formula("a"), vt, 1) == "rain.");
  CHECK(verbalize_formula(parse_formula("~a"), vt, 1) == "It is not the case that rain.");
  CHECK(verbalize_formula(parse_formula("a & c"), vt, 1) == "rain and wind blow.");
  CHECK(verbalize_formula(parse_formula("a | c"), vt, 2) == "Either rain or wind blow.");
  CHECK(verbalize_formula(parse_formula("a <-> c"), vt, 1) == "rain if and only if wind blow.");
}

TEST_CASE("verbalize_formula: compound operands get bridged") {
  VarTable vt = figure_table();
  CHECK(verbalize_formula(parse_formula("(a & c) -> b"), vt, 1) ==
        "If it is the case that rain and wind blow, then ground wet.");
  // constants render as fixed clauses
  CHECK(verbalize_formula(parse_formula("a & T"), vt, 1) == "rain and a tautology holds.");
  CHECK(verbalize_formula(parse_formula("F"), vt, 1) == "a contradiction holds.");
}

TEST_CASE("verbalize_formula: unbound atoms fail") {
  VarTable vt = figure_table();
  CHECK_THROWS_AS(verbalize_formula(parse_formula("z"), vt, 1), UnboundAtom);
  CHECK_THROWS_AS(verbalize_formula(parse_formula("rain"), vt, 1), UnboundAtom);
  CHECK_THROWS_AS(verbalize_formula(parse_formula("a"), vt, 0), std::invalid_argument);
  CHECK_THROWS_AS(verbalize_formula(parse_formula("a"), vt, 8), std::invalid_argument);
}

TEST_CASE("the 7 templates per connective are pairwise distinct") {
  VarTable vt = figure_table();
  for (const char* text : {"a -> c", "a & c", "a | c", "~a", "a <-> c"}) {
    std::set<std::string> outputs;
    for (int tid = 1; tid <= kTemplatesPerConnective; ++tid)
      outputs.insert(verbalize_formula(parse_formula(text), vt, tid));
    CHECK(outputs.size() == kTemplatesPerConnective);
  }
}

TEST_CASE("template mode is deterministic and keeps symbolic fields intact") {
  VarTable vt = figure_table();
  std::vector<SamplePair> pairs{mp_pair()};
  auto v1 = verbalize_pairs(pairs, vt, VerbalizeMode::Template, 42);
  auto v2 = verbalize_pairs(pairs, vt, VerbalizeMode::Template, 42);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].text_a == v2[0].text_a);
  CHECK(v1[0].text_b == v2[0].text_b);
  CHECK(v1[0].template_a == v2[0].template_a);
  CHECK(v1[0].mode == "template");
  CHECK(!v1[0].text_a.empty());
  // traceability: symbolic fields byte-identical to the input pair
  CHECK(print_formula(v1[0].pair.formula_a) == print_formula(pairs[0].formula_a));
  CHECK(print_formula(v1[0].pair.formula_b) == print_formula(pairs[0].formula_b));
  CHECK(v1[0].pair.id == pairs[0].id);
  CHECK(v1[0].pair.derivation_text == pairs[0].derivation_text);
}

TEST_CASE("emit_prompt embeds formulas, relation and full glossary") {
  VarTable vt = figure_table();
  SamplePair p = mp_pair();
  PromptSpec spec = emit_prompt(p, vt);
  auto payload = nlohmann::json::parse(spec.user);
  CHECK(payload["formula_a"] == "((a -> b) & a)");
  CHECK(payload["formula_b"] == "b");
  CHECK(payload["relation"] == "implication");
  CHECK(payload["glossary"]["a"] == "rain");
  CHECK(payload["glossary"]["b"] == "ground wet");  // display-normalized
  CHECK(payload["glossary"].size() == 2);
  CHECK(spec.system.find("text_a") != std::string::npos);

  // deterministic serialization
  CHECK(emit_prompt(p, vt).user == spec.user);

  SamplePair q = p;
  q.formula_a = parse_formula("(a & c) -> b");
  CHECK(nlohmann::json::parse(emit_prompt(q, vt).user)["glossary"].size() == 3);

  q.formula_a = parse_formula("z");
  CHECK_THROWS_AS(emit_prompt(q, vt), UnboundAtom);
}

namespace {

// Minimal OpenAI-style chat-completions stub.
class MockLlm {
 public:
  explicit MockLlm(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/v1/chat/completions", [this, handler](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockLlm() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

void reply_ok(httplib::Response& res, const std::string& content) {
  nlohmann::json body;
  body["choices"] = {{{"message", {{"role", "assistant"}, {"content", content}}}}};
  res.set_content(body.dump(), "application/json");
}

LlmConfig test_config(const std::string& endpoint) {
  LlmConfig cfg;
  cfg.endpoint = endpoint;
  cfg.model = "mock-model";
  cfg.api_key = "test-key";
  cfg.backoff_ms = 1;
  cfg.timeout_sec = 5;
  return cfg;
}

}  // namespace

TEST_CASE("llm_instantiate: canned completion round trip") {
  MockLlm mock([](const httplib::Request& req, httplib::Response& res) {
    CHECK(req.get_header_value("Authorization") == "Bearer test-key");
    auto body = nlohmann::json::parse(req.body);
    CHECK(body["model"] == "mock-model");
    CHECK(body["messages"].size() == 2);
    reply_ok(res, R"({"text_a": "If it rains, the ground gets wet and it rains.", "text_b": "The ground gets wet."})");
  });
  LlmReply reply = llm_instantiate(emit_prompt(mp_pair(), figure_table()), test_config(mock.endpoint()));
  CHECK(reply.text_a == "If it rains, the ground gets wet and it rains.");
  CHECK(reply.text_b == "The ground gets wet.");
  CHECK(mock.hits() == 1);
}

TEST_CASE("llm_instantiate: model output wrapped in prose still parses") {
  MockLlm mock([](const httplib::Request&, httplib::Response& res) {
    reply_ok(res, "Sure! Here you go:\n```json\n{\"text_a\": \"A.\", \"text_b\": \"B.\"}\n```");
  });
  LlmReply reply = llm_instantiate(emit_prompt(mp_pair(), figure_table()), test_config(mock.endpoint()));
  CHECK(reply.text_a == "A.");
  CHECK(reply.text_b == "B.");
}

TEST_CASE("llm_instantiate: unreachable endpoint fails after 3 attempts") {
  LlmConfig cfg = test_config("http://127.0.0.1:9");  // discard port, nothing listens
  cfg.timeout_sec = 1;
  CHECK_THROWS_WITH_AS(llm_instantiate(emit_prompt(mp_pair(), figure_table()), cfg),
                       doctest::Contains("after 3 attempts"), LlmNetworkError);
}

TEST_CASE("llm_instantiate: transient 500s are retried until success") {
  std::atomic<int> calls{0};
  MockLlm mock([&calls](const httplib::Request&, httplib::Response& res) {
    if (++calls <= 2) {
      res.status = 500;
      return;
    }
    reply_ok(res, R"({"text_a": "A.", "text_b": "B."})");
  });
  LlmReply reply = llm_instantiate(emit_prompt(mp_pair(), figure_table()), test_config(mock.endpoint()));
  CHECK(reply.text_a == "A.");
  CHECK(mock.hits() == 3);
}

TEST_CASE("llm_instantiate: auth failure surfaces distinctly, no retry") {
  MockLlm mock([](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  CHECK_THROWS_AS(llm_instantiate(emit_prompt(mp_pair(), figure_table()), test_config(mock.endpoint())),
                  LlmAuthError);
  CHECK(mock.hits() == 1);
}

TEST_CASE("llm_instantiate: malformed output surfaces distinctly") {
  MockLlm missing_field([](const httplib::Request&, httplib::Response& res) {
    reply_ok(res, R"({"text_a": "only half an answer"})");
  });
  CHECK_THROWS_AS(llm_instantiate(emit_prompt(mp_pair(), figure_table()), test_config(missing_field.endpoint())),
                  LlmMalformedOutput);

  MockLlm no_json([](const httplib::Request&, httplib::Response& res) { reply_ok(res, "no structure at all"); });
  CHECK_THROWS_AS(llm_instantiate(emit_prompt(mp_pair(), figure_table()), test_config(no_json.endpoint())),
                  LlmMalformedOutput);
}

TEST_CASE("verbalize_pairs: llm mode with template fallback") {
  VarTable vt = figure_table();
  std::vector<SamplePair> pairs{mp_pair()};
  MockLlm broken([](const httplib::Request&, httplib::Response& res) { reply_ok(res, "garbage"); });
  LlmConfig cfg = test_config(broken.endpoint());
  CHECK_THROWS_AS(verbalize_pairs(pairs, vt, VerbalizeMode::Llm, 42, &cfg, false), LlmMalformedOutput);
  auto fell_back = verbalize_pairs(pairs, vt, VerbalizeMode::Llm, 42, &cfg, true);
  REQUIRE(fell_back.size() == 1);
  CHECK(fell_back[0].mode == "template");
  CHECK(!fell_back[0].text_a.empty());
}

TEST_CASE("verbalize_pairs: llm mode keeps input order under concurrency") {
  VarTable vt = figure_table();
  const char* names[] = {"a", "b", "c"};
  std::vector<SamplePair> pairs;
  for (int i = 0; i < 9; ++i) {
    SamplePair p = mp_pair();
    p.id = "pair" + std::to_string(i);
    p.formula_b = parse_formula(names[i % 3]);
    pairs.push_back(p);
  }
  MockLlm mock([](const httplib::Request& req, httplib::Response& res) {
    // echo formula_b back so cross-pair reordering would be visible
    auto body = nlohmann::json::parse(req.body);
    auto payload = nlohmann::json::parse(body["messages"][1]["content"].get<std::string>());
    reply_ok(res, nlohmann::json{{"text_a", "A"}, {"text_b", payload["formula_b"].get<std::string>()}}.dump());
  });
  LlmConfig cfg = test_config(mock.endpoint());
  cfg.max_in_flight = 4;
  auto out = verbalize_pairs(pairs, vt, VerbalizeMode::Llm, 42, &cfg, false);
  REQUIRE(out.size() == 9);
  CHECK(mock.hits() == 9);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].pair.id == pairs[i].id);
    CHECK(out[i].text_b == print_formula(pairs[i].formula_b));
    CHECK(out[i].mode == "llm");
  }
}
