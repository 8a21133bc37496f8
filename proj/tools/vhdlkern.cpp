// Command-line driver.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "CLI11.hpp"
#include "vhdlkern/error.hpp"
#include "vhdlkern/run.hpp"

using namespace vhdlkern;

namespace {

bool color_wanted() {
	const char *v = std::getenv("VHDLKERN_COLOR");
	if (!v)
		return false;
	return std::strcmp(v, "0") != 0 && std::strcmp(v, "never") != 0 && std::strcmp(v, "") != 0;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Cycle-based simulator for a synthesizable VHDL subset"};
	RunSpec spec;
	std::vector<std::string> sets;
	app.add_option("files", spec.files, "VHDL sources (.vhd) or design files (.json); a leading \"run\" is ignored")
			->required();
	app.add_option("--top", spec.top, "top-level design");
	app.add_option("--cycles", spec.cycles, "number of simulation cycles")->check(CLI::NonNegativeNumber);
	app.add_option("--clock", spec.clock, "signal toggled after every cycle");
	app.add_option("--set", sets, "stimulus CYCLE:SIGNAL=VALUE, applied before that cycle (repeatable)");
	app.add_option("--vcd", spec.vcd_path, "write a value change dump");
	app.add_option("--dump-state", spec.dump_state_path, "write the final state dump (\"-\" for stdout)");
	app.add_flag("--dump-ast", spec.dump_ast, "print the parsed designs and exit");
	app.add_flag("--emit-core", spec.emit_core, "print the lowered core designs and exit");
	app.add_flag("--trace", spec.trace, "trace cycles and process runs on stderr");
	app.add_option("--delta-limit", spec.delta_limit, "delta iterations per cycle before giving up")
			->check(CLI::PositiveNumber);
	app.add_option("--loop-budget", spec.loop_budget, "loop iterations per process activation")
			->check(CLI::PositiveNumber);
	app.add_flag("--paper-sensitivity", spec.paper_sensitivity,
			"conditional assignments are sensitive only to signals in their conditions");
	app.add_flag("--parallel", spec.parallel, "simulate sibling components concurrently");
	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		return app.exit(e) == 0 ? 0 : kExitDiagnostics;
	}
	if (!spec.files.empty() && spec.files.front() == "run")
		spec.files.erase(spec.files.begin());
	if (spec.files.empty()) {
		std::cerr << "error: no input files\n";
		return kExitDiagnostics;
	}
	spec.color = color_wanted();
	try {
		for (const auto &s : sets)
			spec.stimuli.push_back(parse_stimulus(s));
	} catch (const SimError &e) {
		std::cerr << "error: " << e.what() << "\n";
		return kExitDiagnostics;
	}
	return run(spec, std::cout, std::cerr);
}
