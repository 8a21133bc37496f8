#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "harness.hpp"
#include "vhdlkern/serialize.hpp"

using namespace vk_test;

namespace {

std::string tmp_path(const std::string &tag) {
	return "/tmp/vk_cli_" + std::to_string(getpid()) + "_" + tag;
}

std::string slurp(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

// Runs the real binary through the shell; args are not quoted, so keep
// them free of spaces.
RunOut cli(const std::string &args) {
	std::string out = tmp_path("out"), err = tmp_path("err");
	std::string cmd = std::string(VHDLKERN_CLI) + " " + args + " >" + out + " 2>" + err;
	int st = std::system(cmd.c_str());
	RunOut r;
	r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
	r.out = slurp(out);
	r.err = slurp(err);
	std::remove(out.c_str());
	std::remove(err.c_str());
	return r;
}

std::string design(const std::string &name, const std::string &file) { return corpus_file(name, file); }

// Minimal value change dump reader: final value of every variable, keyed
// by scope path (below the top scope) and variable name with '.' as '_'.
struct VcdReplay {
	std::map<std::string, std::string> code_name;
	std::map<std::string, int> declared;
	std::map<std::string, std::string> last;
	std::vector<std::int64_t> times;
	std::map<std::string, int> changes;
};

VcdReplay read_vcd(const std::string &text) {
	VcdReplay r;
	std::istringstream in(text);
	std::string tok;
	std::vector<std::string> scope;
	bool defs = true;
	while (in >> tok) {
		if (defs) {
			if (tok == "$scope") {
				std::string kind, name, end;
				in >> kind >> name >> end;
				scope.push_back(name);
			} else if (tok == "$upscope") {
				std::string end;
				in >> end;
				scope.pop_back();
			} else if (tok == "$var") {
				std::string kind, width, code, name, end;
				in >> kind >> width >> code >> name >> end;
				std::string full;
				for (std::size_t i = 1; i < scope.size(); ++i)
					full += scope[i] + "_";
				full += name;
				r.code_name[code] = full;
				r.declared[full]++;
			} else if (tok == "$enddefinitions") {
				std::string end;
				in >> end;
				defs = false;
			} else if (tok == "$timescale") {
				std::string a, b, end;
				in >> a >> b >> end;
			}
			continue;
		}
		if (tok[0] == '#') {
			r.times.push_back(std::stoll(tok.substr(1)));
		} else if (tok[0] == 'b' || tok[0] == 'r') {
			std::string code;
			in >> code;
			r.last[r.code_name.at(code)] = tok;
			r.changes[r.code_name.at(code)]++;
		} else {
			std::string code = tok.substr(1);
			r.last[r.code_name.at(code)] = tok.substr(0, 1);
			r.changes[r.code_name.at(code)]++;
		}
	}
	return r;
}

std::string bits64(std::int64_t v) {
	std::string s;
	for (int k = 63; k >= 0; --k)
		s += (static_cast<std::uint64_t>(v) >> k) & 1U ? '1' : '0';
	return s;
}

// What the dump's text form of a value looks like in a change dump, or ""
// when there is no simple correspondence.
std::string expected_vcd(const std::string &v) {
	if (v == "true")
		return "1";
	if (v == "false")
		return "0";
	if (v.size() == 3 && v[0] == '\'')
		return std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(v[1]))));
	if (v.size() >= 2 && v[0] == '"') {
		std::string body = v.substr(1, v.size() - 2);
		std::string s = "b";
		if (body.find_first_not_of("UX01ZWLH-") == std::string::npos) {
			for (char c : body)
				s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
		} else {
			// a string: eight bits per character
			for (char c : body)
				for (int k = 7; k >= 0; --k)
					s += (static_cast<unsigned char>(c) >> k) & 1U ? '1' : '0';
		}
		return s;
	}
	if (!v.empty() && (std::isdigit(static_cast<unsigned char>(v[0])) || v[0] == '-') &&
			v.find_first_not_of("-0123456789") == std::string::npos)
		return "b" + bits64(std::stoll(v));
	return "";
}

std::string underscored(std::string s) {
	for (auto &c : s)
		if (c == '.')
			c = '_';
	return s;
}

} // namespace

TEST_CASE("cli: factorial prints 120") {
	auto r = cli("run " + design("factorial", "factorial.vhd") + " --cycles 60 --clock clk --set 1:start=1 --set 1:n=5");
	CHECK(r.code == 0);
	CHECK(r.out.find("result = 120\n") != std::string::npos);
	CHECK(r.out.find("done = '1'\n") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
	auto osc = cli(design("oscillator", "oscillator.vhd") + " --cycles 1 --set 1:s=1");
	CHECK(osc.code == 2);
	CHECK(osc.err.find("delta cycle limit exceeded") != std::string::npos);

	auto missing = cli("/nonexistent/none.vhd --cycles 1");
	CHECK(missing.code == 1);

	std::string bad = tmp_path("bad.vhd");
	std::ofstream(bad) << "entity e is end entity;\narchitecture a of e is begin x <= ; end architecture;\n";
	auto syn = cli(bad);
	CHECK(syn.code == 1);
	CHECK(syn.err.find(bad + ":2:") != std::string::npos);
	std::remove(bad.c_str());

	std::string f = design("factorial", "factorial.vhd");
	CHECK(cli(f + " --cycles 2 --set 1:nosuch=1").code == 1);
	CHECK(cli(f + " --cycles 2 --set 1:n=abc").code == 1);
	CHECK(cli(f + " --cycles 2 --set garbage").code == 1);
	CHECK(cli(f + " --cycles 2 --clock nosuch").code == 1);
	CHECK(cli(f + " --cycles -1").code == 1);
	CHECK(cli(f + " --top nosuch").code == 1);
	CHECK(cli("").code == 1);
}

TEST_CASE("cli: --dump-ast reloads to the parsed designs") {
	for (const auto &name : corpus_names()) {
		CAPTURE(name);
		auto c = load_case(name);
		std::string files;
		for (const auto &f : c.spec.files)
			files += " " + f;
		auto r = cli("--dump-ast" + files);
		REQUIRE(r.code == 0);
		auto parsed = load_ok(c.spec.files).complex;
		CHECK(load_complex(r.out) == parsed);
	}
}

TEST_CASE("cli: --emit-core output simulates") {
	auto c = load_case("power_comp");
	std::string files;
	for (const auto &f : c.spec.files)
		files += " " + f;
	auto r = cli("--emit-core" + files);
	REQUIRE(r.code == 0);
	auto ds = load_core(r.out);
	CHECK(ds.size() == 2);
	std::string path = tmp_path("core.json");
	std::ofstream(path) << r.out;
	RunSpec js = c.spec;
	js.files = {path};
	CHECK(run_capture(js).out == run_capture(c.spec).out);
	std::remove(path.c_str());
}

TEST_CASE("cli: value change dump") {
	std::string vcd = tmp_path("f.vcd");
	auto r = cli(design("factorial", "factorial.vhd") + " --cycles 2 --clock clk --vcd " + vcd);
	REQUIRE(r.code == 0);
	auto rep = read_vcd(slurp(vcd));
	CHECK(rep.times == std::vector<std::int64_t>{0, 1, 2});
	// initial sample plus one change per cycle
	CHECK(rep.changes["clk"] == 3);
	CHECK(rep.last["clk"] == "1");
	for (const auto &[n, k] : rep.declared)
		CHECK(k == 1);
	CHECK(rep.changes["state"] == 1);
	std::remove(vcd.c_str());

	r = cli(design("power_comp", "power_comp.vhd") + " --cycles 3 --clock clk --vcd " + vcd);
	REQUIRE(r.code == 0);
	std::string text = slurp(vcd);
	CHECK(text.find("$scope module u_mult $end") != std::string::npos);
	rep = read_vcd(text);
	CHECK(rep.declared.count("u_mult_p") == 1);
	std::remove(vcd.c_str());
}

TEST_CASE("cli: replaying the change dump gives the final state") {
	for (const auto &name : corpus_names()) {
		auto c = load_case(name);
		if (c.expect_exit != 0)
			continue;
		CAPTURE(name);
		std::string vcd = tmp_path(name + ".vcd");
		RunSpec s = c.spec;
		s.vcd_path = vcd;
		auto out = run_capture(s);
		REQUIRE(out.code == 0);
		auto rep = read_vcd(slurp(vcd));
		REQUIRE(!rep.last.empty());
		std::map<std::string, std::string> dumped;
		for (const auto &l : lines_of(out.out)) {
			auto eq = l.find(" = ");
			dumped[underscored(l.substr(0, eq))] = l.substr(eq + 3);
		}
		int compared = 0;
		for (const auto &[n, v] : rep.last) {
			CAPTURE(n);
			REQUIRE(dumped.count(n));
			std::string want = expected_vcd(dumped[n]);
			if (want.empty()) {
				if (v[0] == 'r')
					CHECK(std::stod(v.substr(1)) == std::stod(dumped[n]));
				continue;
			}
			CHECK(v == want);
			++compared;
		}
		CHECK(compared > 0);
		std::remove(vcd.c_str());
	}
}

TEST_CASE("cli: output is byte-identical across runs") {
	std::string f = design("div32", "div32.vhd");
	// the quotes must reach the program
	std::string args = f + " --cycles 120 --clock clk --set 1:start=1 --set '1:op1=x\"0000ff00\"' --set '1:op2=x\"00000011\"'";
	std::string v1 = tmp_path("a.vcd"), v2 = tmp_path("b.vcd"), d1 = tmp_path("a.dump");
	auto a = cli(args + " --vcd " + v1);
	auto b = cli(args + " --vcd " + v2 + " --dump-state " + d1);
	REQUIRE(a.code == 0);
	REQUIRE(b.code == 0);
	CHECK(a.out == slurp(d1));
	CHECK(b.out.empty());
	CHECK(slurp(v1) == slurp(v2));
	CHECK(!slurp(v1).empty());
	CHECK(a.out.find("r.q = \"00000000000000000000111100000000\"") != std::string::npos);
	for (const auto &p : {v1, v2, d1})
		std::remove(p.c_str());
}
