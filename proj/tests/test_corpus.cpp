#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "harness.hpp"
#include "vhdlkern/serialize.hpp"

using namespace vk_test;

namespace {

std::vector<std::string> signal_lines(const Bench &b) {
	std::vector<std::string> out;
	for (const auto &line : lines_of(b.dump())) {
		auto name = line.substr(0, line.find(" = "));
		if (b.top().idx().leaf_by_name.count(name))
			out.push_back(line);
	}
	return out;
}

bool core_only(const std::vector<CSeqStmt> &ss) {
	for (const auto &s : ss) {
		if (s.kind == CStmtKind::Case || s.kind == CStmtKind::For || !s.elsifs.empty())
			return false;
		if (!core_only(s.body) || !core_only(s.else_body))
			return false;
	}
	return true;
}

std::string bits32(std::uint32_t v) {
	std::string s = "\"";
	for (int i = 31; i >= 0; --i)
		s += (v >> i) & 1 ? '1' : '0';
	return s + "\"";
}

} // namespace

TEST_CASE("every corpus design matches its oracle dump") {
	auto names = corpus_names();
	REQUIRE(names.size() >= 13);
	for (const auto &n : names) {
		CAPTURE(n);
		auto c = load_case(n);
		auto r = run_capture(c.spec);
		CHECK(r.code == c.expect_exit);
		for (const auto &e : c.expect_stderr)
			CHECK(r.err.find(e) != std::string::npos);
		auto miss = missing_lines(c.expected, r.out);
		CHECK_MESSAGE(miss.empty(), (miss.empty() ? "" : miss.front()));
		if (c.expect_exit == 0)
			CHECK(!c.expected.empty());
	}
}

TEST_CASE("factorial of 0..10 within 10n+20 cycles") {
	std::int64_t f = 1;
	for (int n = 0; n <= 10; ++n) {
		if (n > 0)
			f *= n;
		Bench b({corpus_file("factorial", "factorial.vhd")}, std::nullopt, "clk");
		b.set("start", "1");
		b.set_int("n", n);
		int c = 0;
		while (c < 10 * n + 20 && b.get("done") != Val::logic(Logic9::L1)) {
			b.step();
			++c;
		}
		CAPTURE(n);
		CHECK(b.get("done") == Val::logic(Logic9::L1));
		CHECK(b.get_int("result") == f);
	}
}

TEST_CASE("factorial: the design is two processes") {
	auto lr = load_ok({corpus_file("factorial", "factorial.vhd")});
	REQUIRE(lr.registry.names().size() == 1);
	const Design &d = lr.registry.get("factorial");
	REQUIRE(d.processes.size() == 2);
	CHECK(d.processes[0].name == "mult");
	CHECK(d.processes[1].name == "doit");
}

TEST_CASE("power, monolithic and with a multiplier component") {
	auto lr = load_ok({corpus_file("power_comp", "power_comp.vhd")});
	CHECK(lr.registry.names().size() == 2);
	// The multiplier output crosses an instance boundary, which costs one
	// outer cycle: prod in the component version trails by exactly one.
	const char *ports[] = {"a", "b", "result", "done"};
	for (std::int64_t x = 2; x <= 5; ++x)
		for (std::int64_t n = 0; n <= 8; ++n) {
			CAPTURE(x);
			CAPTURE(n);
			std::int64_t want = 1;
			for (int k = 0; k < n; ++k)
				want *= x;
			Bench mono({corpus_file("power", "power.vhd")}, std::nullopt, "clk");
			Bench comp({corpus_file("power_comp", "power_comp.vhd")}, std::nullopt, "clk");
			for (Bench *b : {&mono, &comp}) {
				b->set("start", "1");
				b->set_int("x", x);
				b->set_int("n", n);
			}
			int diverged = 0;
			Val mono_prod_before = mono.get("prod");
			for (int c = 1; c <= 60; ++c) {
				mono.step();
				comp.step();
				for (const char *p : ports)
					if (!(mono.get(p) == comp.get(p)) && !diverged)
						diverged = c;
				if (!(comp.get("prod") == mono_prod_before) || !(comp.get("u_mult.p") == mono_prod_before))
					if (!diverged)
						diverged = c;
				mono_prod_before = mono.get("prod");
			}
			CHECK(diverged == 0);
			CHECK(mono.get("done") == Val::logic(Logic9::L1));
			CHECK(mono.get_int("result") == want);
			CHECK(comp.get_int("result") == want);
			CHECK(comp.get_int("u_mult.p") == comp.get_int("prod"));
		}
}

TEST_CASE("power with components: 2 ** 10") {
	Bench b({corpus_file("power_comp", "power_comp.vhd")}, std::nullopt, "clk");
	b.set("start", "1");
	b.set_int("x", 2);
	b.set_int("n", 10);
	b.step(80);
	CHECK(b.get_int("result") == 1024);
}

TEST_CASE("div32 seeded and boundary cases") {
	std::ifstream in(corpus_file("div32", "cases.txt"));
	REQUIRE(in);
	std::string line;
	int cases = 0, ovf_cases = 0;
	while (std::getline(in, line)) {
		if (line.empty() || line[0] == '#')
			continue;
		std::istringstream ls(line);
		std::string y, op1, op2, q;
		ls >> y >> op1 >> op2 >> q;
		CAPTURE(line);
		Bench b({corpus_file("div32", "div32.vhd")}, std::nullopt, "clk");
		b.set("start", "1");
		b.set("y", "x\"" + y + "\"");
		b.set("op1", "x\"" + op1 + "\"");
		b.set("op2", "x\"" + op2 + "\"");
		int c = 0;
		while (c < 120 && b.get("ready") != Val::logic(Logic9::L1)) {
			b.step();
			++c;
		}
		REQUIRE(b.get("ready") == Val::logic(Logic9::L1));
		if (q == "ovf") {
			++ovf_cases;
			CHECK(b.get("ovf") == Val::logic(Logic9::L1));
		} else {
			CHECK(b.get("ovf") == Val::logic(Logic9::L0));
			CHECK(to_string(b.get("result")) == bits32(static_cast<std::uint32_t>(std::stoul(q, nullptr, 16))));
		}
		++cases;
	}
	CHECK(cases == 220);
	CHECK(ovf_cases > 0);
}

TEST_CASE("complex designs and their core twins agree every cycle for 50 cycles") {
	for (std::string n : {"tristate_bus", "case_fsm", "loop_sum"}) {
		CAPTURE(n);
		auto c = load_case(n);
		Bench cx({corpus_file(n, n + ".vhd")}, std::nullopt, c.spec.clock);
		Bench core({corpus_file(n, n + "_core.vhd")}, std::nullopt, c.spec.clock);
		// The core twin really is core: nothing left for lowering to do.
		for (const auto &cd : load_ok({corpus_file(n, n + "_core.vhd")}).complex)
			for (const auto &p : cd.processes) {
				CHECK(p.kind == CConcKind::Process);
				CHECK(core_only(p.body));
			}
		bool same = true;
		for (std::int64_t cyc = 1; cyc <= 50 && same; ++cyc) {
			for (const auto &s : c.spec.stimuli)
				if (s.cycle == cyc) {
					cx.set(s.signal, s.value);
					core.set(s.signal, s.value);
				}
			cx.step();
			core.step();
			same = signal_lines(cx) == signal_lines(core);
			CHECK_MESSAGE(same, "cycle " << cyc);
		}
	}
}

TEST_CASE("process order does not change the outcome") {
	for (const auto &n : corpus_names()) {
		auto c = load_case(n);
		if (c.expect_exit != 0)
			continue;
		auto lr = load_ok(c.spec.files);
		std::string top = select_top(lr.registry, c.spec.top);
		const Design &d = lr.registry.get(top);
		if (d.processes.size() > 4 || !d.components.empty())
			continue;
		CAPTURE(n);
		std::string first;
		for (const auto &perm : process_permutations(d)) {
			SimState st = init_state(perm);
			SimConfig cfg;
			cfg.clock = c.spec.clock;
			for (std::int64_t cyc = 1; cyc <= c.spec.cycles; ++cyc) {
				for (const auto &s : c.spec.stimuli)
					if (s.cycle == cyc) {
						auto id = leaf_id(perm, s.signal);
						external_write(st, perm, id, parse_value(s.value, perm.idx().leaves[static_cast<std::size_t>(id)].type), true);
					}
				simulation(1, perm, st, cfg);
			}
			auto dump = dump_state(st, perm);
			if (first.empty())
				first = dump;
			else
				CHECK(dump == first);
		}
	}
}
