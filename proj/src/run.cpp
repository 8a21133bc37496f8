#include "vhdlkern/run.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "vhdlkern/error.hpp"
#include "vhdlkern/serialize.hpp"
#include "vhdlkern/vcd.hpp"

namespace vhdlkern {

Stimulus parse_stimulus(const std::string &text) {
	auto colon = text.find(':');
	auto eq = text.find('=');
	if (colon == std::string::npos || eq == std::string::npos || eq < colon)
		fail(ErrorKind::Config, "stimulus \"" + text + "\" is not CYCLE:SIGNAL=VALUE");
	Stimulus s;
	try {
		std::size_t used = 0;
		s.cycle = std::stoll(text.substr(0, colon), &used);
		if (used != colon)
			throw std::invalid_argument("cycle");
	} catch (const std::exception &) {
		fail(ErrorKind::Config, "stimulus \"" + text + "\" has a bad cycle number");
	}
	if (s.cycle < 1)
		fail(ErrorKind::Config, "stimulus \"" + text + "\": cycles are numbered from 1");
	s.signal = text.substr(colon + 1, eq - colon - 1);
	std::transform(s.signal.begin(), s.signal.end(), s.signal.begin(), [](unsigned char c) { return std::tolower(c); });
	s.value = text.substr(eq + 1);
	if (s.signal.empty() || s.value.empty())
		fail(ErrorKind::Config, "stimulus \"" + text + "\" is not CYCLE:SIGNAL=VALUE");
	return s;
}

std::string select_top(const DesignRegistry &reg, const std::optional<std::string> &top) {
	if (top) {
		std::string t = *top;
		std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
		if (!reg.find(t))
			fail(ErrorKind::Config, "no design named \"" + t + "\"");
		return t;
	}
	auto names = reg.names();
	if (names.empty())
		fail(ErrorKind::Config, "no designs loaded");
	std::set<std::string> used;
	for (const auto &n : names)
		for (const auto &c : reg.get(n).components)
			used.insert(c.design);
	std::vector<std::string> roots;
	for (const auto &n : names)
		if (!used.count(n))
			roots.push_back(n);
	if (roots.size() != 1)
		fail(ErrorKind::Config, "cannot choose a top design; use --top");
	return roots[0];
}

namespace {

void write_file(const std::string &path, const std::string &text, std::ostream &out) {
	if (path == "-") {
		out << text;
		return;
	}
	std::ofstream f(path, std::ios::binary);
	if (!f)
		fail(ErrorKind::Config, "cannot write \"" + path + "\"");
	f << text;
	if (!f)
		fail(ErrorKind::Config, "error writing \"" + path + "\"");
}

} // namespace

int run(const RunSpec &spec, std::ostream &out, std::ostream &err) {
	if (spec.cycles < 0) {
		err << "error: --cycles must not be negative\n";
		return kExitDiagnostics;
	}
	LoadOptions lo;
	lo.lower.paper_sensitivity = spec.paper_sensitivity;
	LoadResult lr = load_registry(spec.files, lo);
	for (const auto &d : lr.diags)
		err << format(d, spec.color) << "\n";
	if (!lr.ok())
		return kExitDiagnostics;
	if (spec.dump_ast) {
		out << dump_complex(lr.complex);
		return kExitOk;
	}
	std::ofstream vcd_file;
	try {
		std::string top = select_top(lr.registry, spec.top);
		if (spec.emit_core) {
			// The whole registry, so that components come along.
			std::vector<Design> ds;
			for (const auto &n : lr.registry.names())
				ds.push_back(lr.registry.get(n));
			out << dump_core(ds);
			return kExitOk;
		}
		const Design &td = lr.registry.get(top);
		ArchState root = build_arch_state(lr.registry, top);

		// Stimuli are checked up front so that typos fail before simulating.
		struct Forced {
			std::int64_t cycle;
			std::int32_t leaf;
			Val value;
		};
		std::vector<Forced> forced;
		for (const auto &s : spec.stimuli) {
			auto id = leaf_id(td, s.signal);
			forced.push_back(Forced{s.cycle, id, parse_value(s.value, td.idx().leaves[static_cast<std::size_t>(id)].type)});
		}
		if (spec.clock)
			leaf_id(td, *spec.clock);

		SimConfig cfg;
		cfg.clock = spec.clock;
		cfg.delta_limit = spec.delta_limit;
		cfg.loop_budget = spec.loop_budget;
		cfg.trace = spec.trace ? &err : nullptr;
		cfg.parallel_components = spec.parallel;

		std::optional<VcdWriter> vcd;
		if (spec.vcd_path) {
			vcd_file.open(*spec.vcd_path, std::ios::binary);
			if (!vcd_file)
				fail(ErrorKind::Config, "cannot write \"" + *spec.vcd_path + "\"");
			vcd.emplace(vcd_file, lr.registry, root);
		}
		int code = kExitOk;
		try {
			for (std::int64_t c = 1; c <= spec.cycles; ++c) {
				for (const auto &f : forced)
					if (f.cycle == c)
						external_write(root.local, td, f.leaf, f.value, true);
				sim_arch(1, lr.registry, root, cfg);
				if (vcd)
					vcd->sample(c, root);
			}
		} catch (const SimError &e) {
			if (e.kind() == ErrorKind::Config)
				throw;
			std::string msg = e.what();
			if (msg.find("in cycle ") == std::string::npos)
				msg = "cycle " + std::to_string(root.local.cycle) + ": " + msg;
			err << "error: " << msg << "\n";
			code = kExitSimError;
		}
		// The state reached so far is written even after a runtime error.
		std::string dump = dump_arch_state(lr.registry, root);
		if (spec.dump_state_path)
			write_file(*spec.dump_state_path, dump, out);
		else if (code == kExitOk)
			out << dump;
		return code;
	} catch (const SimError &e) {
		err << "error: " << e.what() << "\n";
		return e.kind() == ErrorKind::Config ? kExitDiagnostics : kExitSimError;
	}
}

} // namespace vhdlkern
