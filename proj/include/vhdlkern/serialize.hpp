#pragma once

// JSON forms of values, core designs and surface designs, the text form of
// simulation states, and value literals for command-line stimuli.
//
// Registry files are {"designs": [...]}; every node is an object whose "k"
// member names its constructor (exp_sig, sst_sa, cst_ps, ssc_case, ...).

#include <string>
#include <vector>

#include "vhdlkern/ast.hpp"
#include "vhdlkern/desugar.hpp"
#include "vhdlkern/hierarchy.hpp"
#include "vhdlkern/state.hpp"

namespace vhdlkern {

std::string dump_core(const std::vector<Design> &designs);
/// Throws SimError(Config) on malformed input. Designs are returned unlinked.
std::vector<Design> load_core(const std::string &text);

std::string dump_complex(const std::vector<ComplexDesign> &designs);
std::vector<ComplexDesign> load_complex(const std::string &text);

std::string dump_value(const Val &v);
Val load_value(const std::string &text);

/// One "name = value" line per signal/port leaf and variable, sorted by
/// name; prefix (e.g. "u1.") is prepended to every name.
std::vector<std::string> state_lines(const SimState &st, const Design &d, const std::string &prefix = "");
std::string dump_state(const SimState &st, const Design &d);
/// Whole hierarchy; component entries are prefixed with their instance path.
std::string dump_arch_state(const DesignRegistry &reg, const ArchState &s);

/// Parses a literal for a value of type t: 42, -3, true, '1', "0101",
/// x"ff" (for vectors), 1.5. Throws SimError(Config).
Val parse_value(const std::string &text, const TypeDesc &t);

} // namespace vhdlkern
