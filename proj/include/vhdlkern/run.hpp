#pragma once

// One simulation run as driven from the command line: load, select the top
// design, apply stimuli, simulate, and write dumps.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vhdlkern/frontend.hpp"
#include "vhdlkern/sim_kernel.hpp"

namespace vhdlkern {

struct Stimulus {
	std::int64_t cycle = 1;
	std::string signal;
	std::string value; // literal, parsed against the signal's type
};

struct RunSpec {
	std::vector<std::string> files;
	std::optional<std::string> top;
	std::int64_t cycles = 0;
	std::optional<std::string> clock;
	std::vector<Stimulus> stimuli;
	std::optional<std::string> vcd_path;
	/// "-" writes to the output stream. Without it the final dump goes to
	/// the output stream unless an AST dump was requested.
	std::optional<std::string> dump_state_path;
	bool dump_ast = false;
	bool emit_core = false;
	bool trace = false;
	std::int32_t delta_limit = kDefaultDeltaLimit;
	std::int64_t loop_budget = kDefaultLoopBudget;
	bool paper_sensitivity = false;
	bool parallel = false;
	bool color = false;
};

enum ExitCode : int { kExitOk = 0, kExitDiagnostics = 1, kExitSimError = 2 };

/// "3:start=1" -> {3, "start", "1"}; throws SimError(Config).
Stimulus parse_stimulus(const std::string &text);

/// Design to simulate: the requested one, the only one, or the only design
/// not instantiated by another. Throws SimError(Config).
std::string select_top(const DesignRegistry &reg, const std::optional<std::string> &top);

int run(const RunSpec &spec, std::ostream &out, std::ostream &err);

} // namespace vhdlkern
