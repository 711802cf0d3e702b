#include "lfcda/verbalize.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <future>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace lfcda {

const std::vector<std::string>& style_templates(Kind connective) {
  static const std::vector<std::string> implies = {
      "If {A}, then {B}.",
      "{A} implies {B}.",
      "Whenever {A}, {B}.",
      "{B}, provided that {A}.",
      "{A} is sufficient for {B}.",
      "{B} is necessary for {A}.",
      "Should {A}, {B}.",
  };
  static const std::vector<std::string> conj = {
      "{A} and {B}.",
      "Both {A} and {B}.",
      "{A}, and also {B}.",
      "{A} as well as {B}.",
      "Not only {A} but also {B}.",
      "{A}, while {B}.",
      "{A} together with {B}.",
  };
  static const std::vector<std::string> disj = {
      "{A} or {B}.",
      "Either {A} or {B}.",
      "{A}, unless {B}.",
      "At least one of {A} and {B} holds.",
      "{A}, or else {B}.",
      "If not {A}, then {B}.",
      "{A} or alternatively {B}.",
  };
  static const std::vector<std::string> neg = {
      "It is not the case that {A}.",
      "{A} does not hold.",
      "It is false that {A}.",
      "{A} fails.",
      "Not {A}.",
      "{A} is untrue.",
      "By no means {A}.",
  };
  static const std::vector<std::string> iff = {
      "{A} if and only if {B}.",
      "{A} exactly when {B}.",
      "{A} is equivalent to {B}.",
      "If {A} then {B}, and conversely.",
      "{A} just in case {B}.",
      "{A} precisely if {B}.",
      "{A} when and only when {B}.",
  };
  switch (connective) {
    case Kind::Implies: return implies;
    case Kind::And: return conj;
    case Kind::Or: return disj;
    case Kind::Not: return neg;
    case Kind::Iff: return iff;
    default: throw std::invalid_argument("no templates for this kind");
  }
}

namespace {

std::string atom_phrase(const Formula& atom, const VarTable& vt) {
  int id = VarTable::id_of_var_name(atom.name());
  if (id < 0 || id >= vt.size())
    throw UnboundAtom("atom '" + atom.name() + "' has no variable-table entry");
  return display_phrase(vt.phrase(id));
}

std::string fill_slots(const std::string& templ, const std::string& a, const std::string& b) {
  std::string out = templ;
  auto sub = [&out](const std::string& slot, const std::string& value) {
    std::size_t at = out.find(slot);
    if (at != std::string::npos) out.replace(at, slot.size(), value);
  };
  sub("{A}", a);
  sub("{B}", b);
  return out;
}

std::string render(const Formula& f, const VarTable& vt, int tid, bool top);

// Clause form of an operand; compound operands are bridged so arbitrary
// nesting stays grammatical.
std::string operand(const Formula& f, const VarTable& vt, int tid) {
  std::string s = render(f, vt, tid, false);
  if (f.is_atom() || f.is_constant()) return s;
  return "it is the case that " + s;
}

std::string render(const Formula& f, const VarTable& vt, int tid, bool top) {
  std::string out;
  switch (f.kind()) {
    case Kind::Atom: return atom_phrase(f, vt);
    case Kind::Top: return "a tautology holds";
    case Kind::Bot: return "a contradiction holds";
    case Kind::Not:
      out = fill_slots(style_templates(Kind::Not)[static_cast<std::size_t>(tid - 1)], operand(f.left(), vt, tid), "");
      break;
    default:
      out = fill_slots(style_templates(f.kind())[static_cast<std::size_t>(tid - 1)], operand(f.left(), vt, tid),
                 operand(f.right(), vt, tid));
      break;
  }
  if (!top) {
    if (!out.empty() && out.back() == '.') out.pop_back();
    if (!out.empty() && std::isupper(static_cast<unsigned char>(out[0])))
      out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  }
  return out;
}

}  // namespace

std::string verbalize_formula(const Formula& f, const VarTable& vt, int template_id) {
  if (template_id < 1 || template_id > kTemplatesPerConnective)
    throw std::invalid_argument("template id must be 1.." + std::to_string(kTemplatesPerConnective));
  std::string out = render(f, vt, template_id, true);
  // bare atoms and constants still form a sentence
  if (!out.empty() && out.back() != '.') out += '.';
  return out;
}

PromptSpec emit_prompt(const SamplePair& p, const VarTable& vt) {
  nlohmann::ordered_json glossary;
  for (const Formula* f : {&p.formula_a, &p.formula_b}) {
    for (const auto& name : atoms(*f)) {
      int id = VarTable::id_of_var_name(name);
      if (id < 0 || id >= vt.size())
        throw UnboundAtom("atom '" + name + "' has no variable-table entry");
      glossary[name] = display_phrase(vt.phrase(id));
    }
  }
  nlohmann::ordered_json payload;
  payload["formula_a"] = print_formula(p.formula_a);
  payload["formula_b"] = print_formula(p.formula_b);
  payload["relation"] = p.relation;
  payload["label"] = p.label;
  payload["glossary"] = std::move(glossary);

  PromptSpec spec;
  spec.system =
      "You turn propositional-logic formulas into fluent English. Render formula_a and "
      "formula_b as one natural sentence each, using the glossary phrase for every variable "
      "and expressing each formula exactly as written, without adding, dropping or repairing "
      "logical content. Reply with a JSON object of exactly two string fields: "
      "{\"text_a\": ..., \"text_b\": ...}.";
  spec.user = payload.dump();
  return spec;
}

LlmConfig LlmConfig::from_env() {
  LlmConfig cfg;
  if (const char* v = std::getenv("LFCDA_LLM_ENDPOINT")) cfg.endpoint = v;
  if (const char* v = std::getenv("LFCDA_LLM_MODEL")) cfg.model = v;
  if (const char* v = std::getenv("LFCDA_LLM_KEY")) cfg.api_key = v;
  return cfg;
}

namespace {

// Splits an endpoint into the client base (scheme://host[:port]) and the
// completion path, appending the standard suffix when only a base is given.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  std::string ep = endpoint;
  while (!ep.empty() && ep.back() == '/') ep.pop_back();
  std::size_t scheme = ep.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  std::size_t slash = ep.find('/', host_start);
  std::string base = slash == std::string::npos ? ep : ep.substr(0, slash);
  std::string path = slash == std::string::npos ? "" : ep.substr(slash);
  if (path.find("/chat/completions") == std::string::npos) path += "/chat/completions";
  return {base, path};
}

LlmReply parse_completion(const std::string& body) {
  std::string content;
  try {
    auto j = nlohmann::json::parse(body);
    content = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception& e) {
    throw LlmMalformedOutput(std::string("unparseable completion response: ") + e.what());
  }
  // models sometimes wrap the JSON answer in prose or fences
  std::size_t open = content.find('{');
  std::size_t close = content.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw LlmMalformedOutput("completion content contains no JSON object");
  try {
    auto j = nlohmann::json::parse(content.substr(open, close - open + 1));
    LlmReply r{j.at("text_a").get<std::string>(), j.at("text_b").get<std::string>()};
    if (r.text_a.empty() || r.text_b.empty()) throw LlmMalformedOutput("empty text field in model output");
    return r;
  } catch (const LlmMalformedOutput&) {
    throw;
  } catch (const std::exception& e) {
    throw LlmMalformedOutput(std::string("model output does not match the schema: ") + e.what());
  }
}

}  // namespace

LlmReply llm_instantiate(const PromptSpec& spec, const LlmConfig& cfg) {
  if (cfg.endpoint.empty()) throw LlmError("no LLM endpoint configured (LFCDA_LLM_ENDPOINT)");
  auto [base, path] = split_endpoint(cfg.endpoint);

  nlohmann::ordered_json body;
  body["model"] = cfg.model;
  body["temperature"] = cfg.temperature;
  body["messages"] = {{{"role", "system"}, {"content", spec.system}},
                      {{"role", "user"}, {"content", spec.user}}};
  std::string payload = body.dump();

  httplib::Client client(base);
  client.set_connection_timeout(cfg.timeout_sec, 0);
  client.set_read_timeout(cfg.timeout_sec, 0);
  httplib::Headers headers;
  if (!cfg.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg.api_key);

  std::string last_error;
  for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    if (attempt > 1)
      std::this_thread::sleep_for(std::chrono::milliseconds(cfg.backoff_ms * (attempt - 1)));
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;  // connection-level failure, retry
    }
    if (res->status == 401 || res->status == 403)
      throw LlmAuthError("authentication rejected (HTTP " + std::to_string(res->status) + ")");
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;  // transient server failure, retry
    }
    if (res->status != 200)
      throw LlmError("unexpected HTTP status " + std::to_string(res->status));
    return parse_completion(res->body);
  }
  throw LlmNetworkError("request to " + cfg.endpoint + " failed after " + std::to_string(cfg.max_attempts) +
                        " attempts: " + last_error);
}

std::vector<VerbalizedPair> verbalize_pairs(const std::vector<SamplePair>& pairs, const VarTable& vt,
                                            VerbalizeMode mode, std::uint64_t seed, const LlmConfig* llm,
                                            bool fallback_template) {
  auto template_for = [&](const SamplePair& p, const char* side) {
    std::string key = p.id;
    key += '/';
    key += side;
    key += '/';
    key += std::to_string(seed);
    return static_cast<int>(fnv1a64(key) % kTemplatesPerConnective) + 1;
  };

  auto by_template = [&](const SamplePair& p) {
    VerbalizedPair v;
    v.pair = p;
    v.template_a = template_for(p, "a");
    v.template_b = template_for(p, "b");
    v.text_a = verbalize_formula(p.formula_a, vt, v.template_a);
    v.text_b = verbalize_formula(p.formula_b, vt, v.template_b);
    v.mode = "template";
    return v;
  };

  std::vector<VerbalizedPair> out;
  out.reserve(pairs.size());

  if (mode == VerbalizeMode::Template) {
    for (const auto& p : pairs) out.push_back(by_template(p));
    return out;
  }

  if (llm == nullptr) throw LlmError("LLM mode requested without a configuration");
  std::size_t in_flight = llm->max_in_flight > 0 ? static_cast<std::size_t>(llm->max_in_flight) : 1;
  for (std::size_t batch = 0; batch < pairs.size(); batch += in_flight) {
    std::size_t end = std::min(pairs.size(), batch + in_flight);
    std::vector<std::future<LlmReply>> futures;
    for (std::size_t i = batch; i < end; ++i) {
      PromptSpec spec = emit_prompt(pairs[i], vt);
      futures.push_back(std::async(std::launch::async,
                                   [spec = std::move(spec), llm]() { return llm_instantiate(spec, *llm); }));
    }
    for (std::size_t i = batch; i < end; ++i) {
      try {
        LlmReply reply = futures[i - batch].get();
        VerbalizedPair v;
        v.pair = pairs[i];
        v.text_a = std::move(reply.text_a);
        v.text_b = std::move(reply.text_b);
        v.mode = "llm";
        out.push_back(std::move(v));
      } catch (const LlmError&) {
        if (!fallback_template) throw;
        out.push_back(by_template(pairs[i]));
      }
    }
  }
  return out;
}

}  // namespace lfcda
