#ifndef LFCDA_VERBALIZE_HPP
#define LFCDA_VERBALIZE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfcda/nl.hpp"
#include "lfcda/pairs.hpp"

namespace lfcda {

struct UnboundAtom : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Seven fixed surface templates per connective, versioned here in-repo.
/// Slots are {A} and {B}; template ids run 1..7.
constexpr int kTemplatesPerConnective = 7;

/// The template table for one connective kind (And, Or, Not, Implies, Iff).
const std::vector<std::string>& style_templates(Kind connective);

/// Renders f through one template id applied uniformly to every connective.
/// Atoms render as their glossary phrases; a slot receiving a compound
/// clause is bridged with "it is the case that". Throws UnboundAtom when an
/// atom has no variable-table entry.
std::string verbalize_formula(const Formula& f, const VarTable& vt, int template_id);

/// Chat-completion request material for one sample pair.
struct PromptSpec {
  std::string system;  // instruction, includes the required output schema
  std::string user;    // formulas, relation and glossary as a JSON payload
};

PromptSpec emit_prompt(const SamplePair& p, const VarTable& vt);

struct LlmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LlmNetworkError : LlmError {
  using LlmError::LlmError;
};
struct LlmAuthError : LlmError {
  using LlmError::LlmError;
};
struct LlmMalformedOutput : LlmError {
  using LlmError::LlmError;
};

struct LlmConfig {
  std::string endpoint;  // base URL, e.g. http://localhost:8080/v1
  std::string model;
  std::string api_key;
  double temperature = 0.7;
  int max_attempts = 3;
  int backoff_ms = 500;
  int timeout_sec = 30;
  int max_in_flight = 4;

  /// Reads LFCDA_LLM_ENDPOINT, LFCDA_LLM_MODEL and LFCDA_LLM_KEY.
  static LlmConfig from_env();
};

struct LlmReply {
  std::string text_a, text_b;
};

/// One chat-completion round trip against an OpenAI-compatible endpoint.
/// Transient failures (connection errors, 5xx) are retried with linear
/// backoff up to cfg.max_attempts; auth failures and malformed model output
/// surface as their own error types and are not retried.
LlmReply llm_instantiate(const PromptSpec& spec, const LlmConfig& cfg);

enum class VerbalizeMode { Template, Llm };

struct VerbalizedPair {
  SamplePair pair;  // symbolic fields, byte-identical to the input
  std::string text_a, text_b;
  std::string mode;  // "template" or "llm" (after any fallback)
  int template_a = 0, template_b = 0;
};

/// Verbalizes every pair, template ids chosen per pair from (pair id, seed).
/// In LLM mode requests run concurrently up to cfg->max_in_flight and
/// results keep input order; with fallback enabled a failed request drops
/// that pair to template mode instead of failing the batch.
std::vector<VerbalizedPair> verbalize_pairs(const std::vector<SamplePair>& pairs, const VarTable& vt,
                                            VerbalizeMode mode, std::uint64_t seed,
                                            const LlmConfig* llm = nullptr, bool fallback_template = false);

}  // namespace lfcda

#endif
