#include "vhdlkern/hierarchy.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>

#include "vhdlkern/error.hpp"

namespace vhdlkern {

const Design &DesignRegistry::add(Design d) {
	if (find(d.name))
		fail(ErrorKind::Config, "design \"" + d.name + "\" defined twice");
	link(d);
	auto p = std::make_shared<Design>(std::move(d));
	entries_.emplace_back(p->name, p);
	return *p;
}

const Design *DesignRegistry::find(const std::string &name) const {
	for (const auto &[n, d] : entries_)
		if (n == name)
			return d.get();
	return nullptr;
}

const Design &DesignRegistry::get(const std::string &name) const {
	if (const Design *d = find(name))
		return *d;
	fail(ErrorKind::Config, "unknown design \"" + name + "\"");
}

std::vector<std::string> DesignRegistry::names() const {
	std::vector<std::string> out;
	for (const auto &e : entries_)
		out.push_back(e.first);
	return out;
}

namespace {

ArchState build(const DesignRegistry &reg, const std::string &name, const std::string &instance, bool ignore_unknown,
		std::vector<std::string> &stack) {
	ArchState s;
	s.name = name;
	s.instance = instance;
	const Design *d = reg.find(name);
	if (!d) {
		if (ignore_unknown)
			return s;
		fail(ErrorKind::Config, "unknown design \"" + name + "\"" + (instance.empty() ? "" : " instantiated as " + instance));
	}
	if (std::find(stack.begin(), stack.end(), name) != stack.end())
		fail(ErrorKind::Config, "design \"" + name + "\" instantiates itself");
	stack.push_back(name);
	s.local = init_state(*d);

	std::set<std::string> from_children;
	for (const auto &ci : d->components) {
		const Design *cd = reg.find(ci.design);
		PortMap pm;
		pm.pairs = ci.port_map;
		std::string where = "instance " + ci.label + " of " + ci.design + " in " + name;
		if (cd) {
			std::set<std::string> mapped;
			for (const auto &[cp, op] : ci.port_map) {
				auto cid = cd->idx().leaf(cp);
				if (cid < 0 || cd->idx().leaves[static_cast<std::size_t>(cid)].kind != SpKind::Port)
					fail(ErrorKind::Config, where + ": \"" + cp + "\" is not a port of " + ci.design);
				if (!mapped.insert(cp).second)
					fail(ErrorKind::Config, where + ": port \"" + cp + "\" mapped twice");
				auto oid = d->idx().leaf(op);
				if (oid < 0)
					fail(ErrorKind::Config, where + ": no signal or port \"" + op + "\"");
				Mode m = cd->idx().leaves[static_cast<std::size_t>(cid)].mode;
				if (m == Mode::Out || m == Mode::Inout) {
					if (!d->idx().drivers[static_cast<std::size_t>(oid)].empty())
						fail(ErrorKind::Config, where + ": \"" + op + "\" is driven both by a process and by port " + cp);
					from_children.insert(op);
				}
			}
			for (const auto &l : cd->idx().leaves)
				if (l.kind == SpKind::Port && l.mode == Mode::In && !l.has_default && !mapped.count(l.name))
					fail(ErrorKind::Config, where + ": input port \"" + l.name + "\" is not mapped");
		}
		s.children.emplace_back(std::move(pm), build(reg, ci.design, ci.label, ignore_unknown, stack));
	}
	stack.pop_back();
	return s;
}

std::string child_scope(const SimConfig &cfg, const std::string &instance) {
	return cfg.scope.empty() ? instance : cfg.scope + "." + instance;
}

} // namespace

ArchState build_arch_state(const DesignRegistry &reg, const std::string &top, bool ignore_unknown) {
	std::vector<std::string> stack;
	return build(reg, top, "", ignore_unknown, stack);
}

void pass_input_all_comps(const DesignRegistry &reg, ArchState &outer) {
	const Design *od = reg.find(outer.name);
	if (!od)
		return;
	for (auto &[pm, child] : outer.children) {
		const Design *cd = reg.find(child.name);
		if (!cd)
			continue;
		for (const auto &[cp, op] : pm.pairs) {
			auto cid = leaf_id(*cd, cp);
			Mode m = cd->idx().leaves[static_cast<std::size_t>(cid)].mode;
			if (m != Mode::In && m != Mode::Inout)
				continue;
			const Val &v = outer.local.sp[static_cast<std::size_t>(leaf_id(*od, op))];
			bool changed = !(child.local.sp[static_cast<std::size_t>(cid)] == v);
			if (changed)
				external_write(child.local, *cd, cid, v, true);
		}
	}
}

void sim_comps(const DesignRegistry &reg, std::vector<std::pair<PortMap, ArchState>> &children, const SimConfig &cfg) {
	SimConfig base = cfg;
	base.clock.reset();
	auto run = [&](std::size_t k) {
		SimConfig c = base;
		c.scope = child_scope(cfg, children[k].second.instance);
		sim_arch(1, reg, children[k].second, c);
	};
#ifdef VHDLKERN_OPENMP
	if (cfg.parallel_components && !cfg.observer && !cfg.trace && children.size() > 1) {
		std::vector<std::exception_ptr> errors(children.size());
		const auto n = static_cast<std::int64_t>(children.size());
#pragma omp parallel for schedule(dynamic)
		for (std::int64_t k = 0; k < n; ++k) {
			try {
				run(static_cast<std::size_t>(k));
			} catch (...) {
				errors[static_cast<std::size_t>(k)] = std::current_exception();
			}
		}
		for (auto &e : errors)
			if (e)
				std::rethrow_exception(e);
		return;
	}
#endif
	for (std::size_t k = 0; k < children.size(); ++k)
		run(k);
}

void get_comp_results(const DesignRegistry &reg, ArchState &outer) {
	const Design *od = reg.find(outer.name);
	if (!od)
		return;
	std::map<std::int32_t, std::vector<Val>> incoming;
	for (auto &[pm, child] : outer.children) {
		const Design *cd = reg.find(child.name);
		if (!cd)
			continue;
		for (const auto &[cp, op] : pm.pairs) {
			auto cid = leaf_id(*cd, cp);
			Mode m = cd->idx().leaves[static_cast<std::size_t>(cid)].mode;
			if (m != Mode::Out && m != Mode::Inout)
				continue;
			incoming[leaf_id(*od, op)].push_back(child.local.sp[static_cast<std::size_t>(cid)]);
		}
	}
	for (auto &[oid, vals] : incoming) {
		auto k = static_cast<std::size_t>(oid);
		Val v;
		if (vals.size() == 1) {
			v = vals.front();
		} else if (od->idx().resolved[k]) {
			v = resolve_vals(vals);
		} else {
			fail(ErrorKind::Unresolved, "signal " + od->idx().leaves[k].name + " in " + od->name + " is driven by " +
					std::to_string(vals.size()) + " component ports and has no resolution function");
		}
		if (!(outer.local.sp[k] == v))
			external_write(outer.local, *od, oid, v, true);
	}
}

void sim_arch(std::int64_t n, const DesignRegistry &reg, ArchState &s, const SimConfig &cfg) {
	const Design *d = reg.find(s.name);
	if (!d) {
		if (cfg.ignore_unknown_designs)
			return;
		fail(ErrorKind::Config, "unknown design \"" + s.name + "\"");
	}
	for (std::int64_t k = 0; k < n; ++k) {
		if (!s.children.empty()) {
			pass_input_all_comps(reg, s);
			sim_comps(reg, s.children, cfg);
			get_comp_results(reg, s);
		}
		simulation(1, *d, s.local, cfg);
	}
}

const ArchState &instance_state(const ArchState &s, const std::string &path) {
	if (path.empty())
		return s;
	auto dot = path.find('.');
	std::string head = path.substr(0, dot);
	for (const auto &[pm, c] : s.children)
		if (c.instance == head)
			return instance_state(c, dot == std::string::npos ? "" : path.substr(dot + 1));
	fail(ErrorKind::Config, "no instance \"" + head + "\" in " + s.name);
}

} // namespace vhdlkern
