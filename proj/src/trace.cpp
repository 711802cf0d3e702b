#include "lfcda/trace.hpp"

namespace lfcda {

std::string format_step(const Rewrite& r) {
  if (r.position.empty())
    return r.rule_name + ": " + print_formula(r.before, PrintStyle::Pretty) + " → " +
           print_formula(r.after, PrintStyle::Pretty);
  return r.rule_name + ": " + print_formula(r.sub_before, PrintStyle::Pretty) + " → " +
         print_formula(r.sub_after, PrintStyle::Pretty) + " within " +
         print_formula(r.before, PrintStyle::Pretty);
}

std::string format_path(const DerivationPath& p) {
  std::string out = "PREMISE: " + print_formula(p.start, PrintStyle::Pretty) + "\n";
  int n = 0;
  for (const auto& step : p.steps)
    out += std::to_string(++n) + ". " + format_step(step) + "\n";
  out += "CONCLUSION: " + print_formula(p.final(), PrintStyle::Pretty) + " [label=" + std::to_string(p.label()) + "]\n";
  return out;
}

}  // namespace lfcda
