#pragma once

// Simulation state of one design instance. Signals/ports and variables are
// stored by leaf id (see DesignIndex); record signals exist only as groups of
// leaves.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vhdlkern/ast.hpp"
#include "vhdlkern/value.hpp"

namespace vhdlkern {

struct LoopFlag {
	std::string name;
	bool raised = false;

	bool operator==(const LoopFlag &) const = default;
};

struct SimState {
	/// Current values, per signal/port leaf.
	std::vector<Val> sp;
	std::vector<Val> var;
	/// Effective values; absent for multiply driven leaves without a
	/// resolution function.
	std::vector<std::optional<Val>> eff;
	/// Driving values per leaf, aligned with DesignIndex::drivers[leaf].
	std::vector<std::vector<std::optional<Val>>> dr;
	LoopFlag next_flag;
	LoopFlag exit_flag;

	/// Leaves written from outside the process network (clock edge, stimuli,
	/// port passing) that must count as active in the next cycle.
	std::vector<std::int32_t> pending;
	/// Leaves whose driving values changed since the last comp_eff_val.
	std::vector<std::int32_t> dirty;
	/// Simulation cycles executed so far.
	std::int64_t cycle = 0;

	bool operator==(const SimState &o) const {
		return sp == o.sp && var == o.var && eff == o.eff && dr == o.dr && next_flag == o.next_flag &&
				exit_flag == o.exit_flag;
	}
};

/// Declared initial values everywhere, no driving values, eff = current.
SimState init_state(const Design &d);

/// Sets the driving value of leaf from process proc. Throws SimError(Config)
/// when proc is not a static driver of leaf.
void set_driving(SimState &st, const Design &d, std::int32_t leaf, std::int32_t proc, std::optional<Val> v);

/// Driving value of leaf from proc, if any.
const std::optional<Val> *driving_value(const SimState &st, const Design &d, std::int32_t leaf, std::int32_t proc);

/// Present driving values of leaf in process declaration order.
std::vector<Val> get_drivers(const SimState &st, const Design &d, std::int32_t leaf);

std::optional<Val> effective_value(const SimState &st, const Design &d, std::int32_t leaf);

/// Recomputes effective values of the given leaves.
void comp_eff_val(SimState &st, const Design &d, const std::vector<std::int32_t> &leaves);
/// Recomputes the leaves marked dirty since the last call (or all of them
/// when full is set) and clears the dirty set.
void comp_eff_val_dirty(SimState &st, const Design &d, bool full);

void update_sigprt(SimState &st, const std::vector<std::int32_t> &leaves);

/// Leaves whose present effective value differs from the current value,
/// ascending.
std::vector<std::int32_t> active_sigprts(const SimState &st);

/// Writes v as both current and effective value of leaf; with mark_active
/// the leaf is queued as active for the next cycle.
void external_write(SimState &st, const Design &d, std::int32_t leaf, const Val &v, bool mark_active);

/// Name-based convenience lookups; throw SimError(Config) on unknown names.
std::int32_t leaf_id(const Design &d, const std::string &name);
std::int32_t var_id(const Design &d, const std::string &name);
const Val &signal_value(const SimState &st, const Design &d, const std::string &name);
const Val &variable_value(const SimState &st, const Design &d, const std::string &name);

} // namespace vhdlkern
