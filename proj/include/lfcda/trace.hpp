#ifndef LFCDA_TRACE_HPP
#define LFCDA_TRACE_HPP

#include <string>

#include "lfcda/explore.hpp"

namespace lfcda {

/// One rendered derivation step. Root rewrites use the whole-formula
/// template "RuleName: OriginalExpr → NewExpr"; rewrites below the root use
/// "RuleName: SubExpr → NewSubExpr within ParentExpr". Expressions are
/// pretty-printed; the arrow is the literal UTF-8 sequence " → ".
std::string format_step(const Rewrite& r);

/// Full listing: "PREMISE: <start>", numbered step lines, then
/// "CONCLUSION: <final> [label=L]".
std::string format_path(const DerivationPath& p);

}  // namespace lfcda

#endif
