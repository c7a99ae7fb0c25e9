#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace autopatch {

struct PreprocessOptions {
  /// Attribute names removed from `__attribute__((...))` and `[[gnu::...]]`
  /// specifiers, and from `#pragma GCC optimize/target` lines.
  std::vector<std::string> attribute_strip_list{"always_inline", "optimize", "target", "hot", "flatten", "noinline"};
  /// Headers substituted for the libstdc++ umbrella header.
  std::vector<std::string> standard_headers{
      "algorithm", "array",     "bitset",  "cassert", "cctype",    "cfloat",        "chrono",        "climits",
      "cmath",     "complex",   "cstdint", "cstdio",  "cstdlib",   "cstring",       "deque",         "functional",
      "iomanip",   "iostream",  "iterator", "limits", "list",      "map",           "memory",        "numeric",
      "queue",     "random",    "set",     "sstream", "stack",     "string",        "tuple",         "unordered_map",
      "unordered_set", "utility", "vector"};
};

struct PreprocessReport {
  std::string output_code;
  /// One entry per applied rewrite, e.g. "standardize-headers: ...".
  std::vector<std::string> actions;
};

/// Normalizes a competitive-programming source file before analysis:
///  - the umbrella `<bits/stdc++.h>` include becomes an explicit header list,
///  - stripped attributes and optimization pragmas are removed,
///  - standard headers for facilities used without an include are added.
/// Code that already includes what it uses and carries no stripped attributes
/// is returned unchanged with no actions. Throws Error(NonUtf8Input).
PreprocessReport preprocess_source(std::string_view code, const PreprocessOptions& options = {});

}  // namespace autopatch
