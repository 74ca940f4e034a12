#pragma once

// System configuration files.
//
// Line-oriented text; '#' starts a comment. Directives:
//
//   dimension <n>
//   matrix <label> <n*n entries, row-major>
//   plant <n*n entries>                  open-loop A
//   input <k> <n*k entries>              input matrix B (n x k)
//   feedback <label> <k*n entries>       A_label = A + B K_label
//   nodes <name> ...                     optional; fixes node order
//   edge <source> <target> <label>
//
// Nodes are indexed by first appearance (in `nodes` or `edge` lines).
// Every label 1..m (m = largest label used) needs exactly one matrix or
// feedback line.

#include <istream>
#include <string>
#include <string_view>

#include "csls/system.hpp"

namespace csls {

/// Throws ConfigError with "<source>:<line>: ..." diagnostics, or listing
/// every violated system invariant.
Csls parse_system_config(std::istream& in, std::string_view source_name = "<config>");
Csls load_system_config(const std::string& path);

}  // namespace csls
