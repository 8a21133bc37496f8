#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vhdlkern/ast.hpp"
#include "vhdlkern/seq_exec.hpp"
#include "vhdlkern/state.hpp"

namespace vhdlkern {

constexpr std::int32_t kDefaultDeltaLimit = 1000;

struct Transition {
	std::int32_t leaf;
	Val before;
	Val after;
};

/// Receives one record per delta iteration and per external write. scope is
/// the instance path ("" for the top level).
class Observer {
public:
	virtual ~Observer() = default;
	virtual void on_delta(const std::string &scope, const Design &d, std::int64_t cycle, std::int32_t delta,
			const std::vector<std::int32_t> &active, const std::vector<Transition> &changes) = 0;
};

struct SimConfig {
	std::int64_t cycles = 0;
	/// Leaf name of the clock signal, toggled after every cycle.
	std::optional<std::string> clock;
	std::int32_t delta_limit = kDefaultDeltaLimit;
	std::int64_t loop_budget = kDefaultLoopBudget;
	/// Per-statement trace output.
	std::ostream *trace = nullptr;
	/// Recompute every effective value each delta instead of only those
	/// whose driving values changed.
	bool full_eff_recompute = false;
	Observer *observer = nullptr;
	std::string scope;

	// Component hierarchies.
	/// Simulate sibling components concurrently (OpenMP builds only; ignored
	/// while tracing or observing).
	bool parallel_components = false;
	/// Treat an instance of an unknown design as a no-op instead of an error.
	bool ignore_unknown_designs = false;
};

/// True iff some process is sensitive to one of the given leaves.
bool has_active_processes(const Design &d, const std::vector<std::int32_t> &act);

/// Runs, in declaration order, every process whose sensitivity list meets act.
void exec_proc_all(const Design &d, const std::vector<std::int32_t> &act, SimState &st, const SimConfig &cfg);

/// Delta iterations until no process is sensitive to an active leaf.
/// Throws SimError(DeltaLimit) after cfg.delta_limit iterations.
void resume_processes(const Design &d, std::vector<std::int32_t> act, SimState &st, const SimConfig &cfg);

/// One simulation cycle: resume_processes on the active leaves (including
/// externally written ones), or nothing when no process is activated.
void exec_sim_cyc(const Design &d, SimState &st, const SimConfig &cfg);

/// Toggles the configured clock and marks it active.
void flip_clk(const Design &d, SimState &st, const SimConfig &cfg);

/// n times: exec_sim_cyc then flip_clk.
void simulation(std::int64_t n, const Design &d, SimState &st, const SimConfig &cfg);

/// Value-returning forms of the above, for tests and callers that keep
/// snapshots.
inline SimState simulated(std::int64_t n, const Design &d, SimState st, const SimConfig &cfg) {
	simulation(n, d, st, cfg);
	return st;
}

} // namespace vhdlkern
