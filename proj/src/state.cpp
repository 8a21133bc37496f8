#include "vhdlkern/state.hpp"

#include <algorithm>

#include "vhdlkern/error.hpp"

namespace vhdlkern {

SimState init_state(const Design &d) {
	const auto &ix = d.idx();
	SimState st;
	st.sp.reserve(ix.leaves.size());
	for (const auto &l : ix.leaves)
		st.sp.push_back(l.init);
	st.eff.assign(st.sp.begin(), st.sp.end());
	for (const auto &v : ix.vars)
		st.var.push_back(v.init);
	st.dr.resize(ix.leaves.size());
	for (std::size_t k = 0; k < ix.leaves.size(); ++k)
		st.dr[k].resize(ix.drivers[k].size());
	return st;
}

namespace {
std::size_t driver_slot(const Design &d, std::int32_t leaf, std::int32_t proc) {
	const auto &ds = d.idx().drivers[static_cast<std::size_t>(leaf)];
	auto it = std::find(ds.begin(), ds.end(), proc);
	if (it == ds.end())
		return ds.size();
	return static_cast<std::size_t>(it - ds.begin());
}
} // namespace

void set_driving(SimState &st, const Design &d, std::int32_t leaf, std::int32_t proc, std::optional<Val> v) {
	auto slot = driver_slot(d, leaf, proc);
	auto &cells = st.dr[static_cast<std::size_t>(leaf)];
	if (slot >= cells.size()) {
		const auto &ix = d.idx();
		std::string pname = proc >= 0 && static_cast<std::size_t>(proc) < d.processes.size()
				? d.processes[static_cast<std::size_t>(proc)].name
				: std::to_string(proc);
		fail(ErrorKind::Config, "process \"" + pname + "\" is not a driver of " +
				ix.leaves[static_cast<std::size_t>(leaf)].name);
	}
	cells[slot] = std::move(v);
	st.dirty.push_back(leaf);
}

const std::optional<Val> *driving_value(const SimState &st, const Design &d, std::int32_t leaf, std::int32_t proc) {
	auto slot = driver_slot(d, leaf, proc);
	const auto &cells = st.dr[static_cast<std::size_t>(leaf)];
	return slot < cells.size() ? &cells[slot] : nullptr;
}

std::vector<Val> get_drivers(const SimState &st, const Design &, std::int32_t leaf) {
	std::vector<Val> out;
	for (const auto &c : st.dr[static_cast<std::size_t>(leaf)])
		if (c)
			out.push_back(*c);
	return out;
}

std::optional<Val> effective_value(const SimState &st, const Design &d, std::int32_t leaf) {
	auto ds = get_drivers(st, d, leaf);
	auto k = static_cast<std::size_t>(leaf);
	if (ds.empty())
		return st.sp[k];
	if (ds.size() == 1)
		return ds.front();
	if (!d.idx().resolved[k])
		return std::nullopt;
	return resolve_vals(ds);
}

void comp_eff_val(SimState &st, const Design &d, const std::vector<std::int32_t> &leaves) {
	for (auto l : leaves)
		st.eff[static_cast<std::size_t>(l)] = effective_value(st, d, l);
}

void comp_eff_val_dirty(SimState &st, const Design &d, bool full) {
	if (full) {
		for (std::size_t k = 0; k < st.sp.size(); ++k)
			st.eff[k] = effective_value(st, d, static_cast<std::int32_t>(k));
	} else {
		std::sort(st.dirty.begin(), st.dirty.end());
		st.dirty.erase(std::unique(st.dirty.begin(), st.dirty.end()), st.dirty.end());
		comp_eff_val(st, d, st.dirty);
	}
	st.dirty.clear();
}

void update_sigprt(SimState &st, const std::vector<std::int32_t> &leaves) {
	for (auto l : leaves) {
		auto k = static_cast<std::size_t>(l);
		if (st.eff[k])
			st.sp[k] = *st.eff[k];
	}
}

std::vector<std::int32_t> active_sigprts(const SimState &st) {
	std::vector<std::int32_t> out;
	for (std::size_t k = 0; k < st.sp.size(); ++k)
		if (st.eff[k] && !(*st.eff[k] == st.sp[k]))
			out.push_back(static_cast<std::int32_t>(k));
	return out;
}

void external_write(SimState &st, const Design &d, std::int32_t leaf, const Val &v, bool mark_active) {
	auto k = static_cast<std::size_t>(leaf);
	st.sp[k] = conform(v, d.idx().leaves[k].type, d.idx().leaves[k].name);
	st.eff[k] = st.sp[k];
	if (mark_active && std::find(st.pending.begin(), st.pending.end(), leaf) == st.pending.end())
		st.pending.push_back(leaf);
}

std::int32_t leaf_id(const Design &d, const std::string &name) {
	auto id = d.idx().leaf(name);
	if (id < 0)
		fail(ErrorKind::Config, "design \"" + d.name + "\" has no signal or port \"" + name + "\"");
	return id;
}

std::int32_t var_id(const Design &d, const std::string &name) {
	auto id = d.idx().var(name);
	if (id < 0)
		fail(ErrorKind::Config, "design \"" + d.name + "\" has no variable \"" + name + "\"");
	return id;
}

const Val &signal_value(const SimState &st, const Design &d, const std::string &name) {
	return st.sp[static_cast<std::size_t>(leaf_id(d, name))];
}

const Val &variable_value(const SimState &st, const Design &d, const std::string &name) {
	return st.var[static_cast<std::size_t>(var_id(d, name))];
}

} // namespace vhdlkern
