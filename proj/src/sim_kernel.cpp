#include "vhdlkern/sim_kernel.hpp"

#include <algorithm>
#include <ostream>

#include "vhdlkern/error.hpp"

namespace vhdlkern {

namespace {

bool sensitive(const Design &d, std::size_t proc, const std::vector<std::int32_t> &act) {
	for (auto s : d.idx().sensitivity[proc])
		if (std::find(act.begin(), act.end(), s) != act.end())
			return true;
	return false;
}

std::string leaf_names(const Design &d, const std::vector<std::int32_t> &leaves) {
	std::string out;
	for (auto l : leaves) {
		if (!out.empty())
			out += ", ";
		out += d.idx().leaves[static_cast<std::size_t>(l)].name;
	}
	return out;
}

} // namespace

bool has_active_processes(const Design &d, const std::vector<std::int32_t> &act) {
	for (std::size_t p = 0; p < d.processes.size(); ++p)
		if (sensitive(d, p, act))
			return true;
	return false;
}

void exec_proc_all(const Design &d, const std::vector<std::int32_t> &act, SimState &st, const SimConfig &cfg) {
	for (std::size_t p = 0; p < d.processes.size(); ++p) {
		if (!sensitive(d, p, act))
			continue;
		if (cfg.trace)
			*cfg.trace << (cfg.scope.empty() ? "" : cfg.scope + ": ") << "run " << d.processes[p].name << "\n";
		exec_process(d, static_cast<std::int32_t>(p), st, cfg.loop_budget, cfg.trace);
	}
}

void resume_processes(const Design &d, std::vector<std::int32_t> act, SimState &st, const SimConfig &cfg) {
	for (std::int32_t delta = 0;; ++delta) {
		if (delta >= cfg.delta_limit)
			fail(ErrorKind::DeltaLimit, "delta cycle limit exceeded (" + std::to_string(cfg.delta_limit) +
					" iterations) in cycle " + std::to_string(st.cycle) +
					(cfg.scope.empty() ? "" : " of " + cfg.scope) + "; still active: " + leaf_names(d, act));
		exec_proc_all(d, act, st, cfg);
		comp_eff_val_dirty(st, d, cfg.full_eff_recompute);
		act = active_sigprts(st);
		if (cfg.observer) {
			std::vector<Transition> ch;
			for (auto l : act)
				ch.push_back({l, st.sp[static_cast<std::size_t>(l)], *st.eff[static_cast<std::size_t>(l)]});
			cfg.observer->on_delta(cfg.scope, d, st.cycle, delta, act, ch);
		}
		update_sigprt(st, act);
		if (!has_active_processes(d, act))
			return;
	}
}

void exec_sim_cyc(const Design &d, SimState &st, const SimConfig &cfg) {
	++st.cycle;
	auto act = active_sigprts(st);
	for (auto l : st.pending)
		if (std::find(act.begin(), act.end(), l) == act.end())
			act.push_back(l);
	std::sort(act.begin(), act.end());
	st.pending.clear();
	if (cfg.trace)
		*cfg.trace << (cfg.scope.empty() ? "" : cfg.scope + ": ") << "cycle " << st.cycle << " active: "
				<< leaf_names(d, act) << "\n";
	if (has_active_processes(d, act))
		resume_processes(d, std::move(act), st, cfg);
}

void flip_clk(const Design &d, SimState &st, const SimConfig &cfg) {
	if (!cfg.clock)
		return;
	auto id = leaf_id(d, *cfg.clock);
	const Val &cur = st.sp[static_cast<std::size_t>(id)];
	Val next;
	if (cur.is_scalar() && cur.scalar_kind() == ScalarKind::Bit) {
		next = Val::bit(!std::get<Bit>(cur.scalar()).v);
	} else if (cur.is_scalar() && cur.scalar_kind() == ScalarKind::Boolean) {
		next = Val::boolean(!cur.as_bool());
	} else if (cur.is_scalar() && cur.scalar_kind() == ScalarKind::Logic) {
		// Anything that is not a low level (including 'U' at start-up) goes low.
		Logic9 l = std::get<Logic9>(cur.scalar());
		next = Val::logic(l == Logic9::L0 || l == Logic9::L ? Logic9::L1 : Logic9::L0);
	} else {
		fail(ErrorKind::Config, "clock " + *cfg.clock + " is not a bit, boolean or std_logic signal");
	}
	if (cfg.observer)
		cfg.observer->on_delta(cfg.scope, d, st.cycle, -1, {id}, {{id, cur, next}});
	external_write(st, d, id, next, true);
}

void simulation(std::int64_t n, const Design &d, SimState &st, const SimConfig &cfg) {
	for (std::int64_t k = 0; k < n; ++k) {
		exec_sim_cyc(d, st, cfg);
		flip_clk(d, st, cfg);
	}
}

} // namespace vhdlkern
