#include "doctest.h"
#include "support.hpp"
#include "vhdlkern/error.hpp"
#include "vhdlkern/sim_kernel.hpp"

#include <algorithm>

#include "harness.hpp"

using namespace vt;

TEST_CASE("mnxy reaches 3 2 5 5 in two delta iterations") {
	Design d = mnxy();
	CHECK(check_design(d).empty());
	SimState st = init_state(d);
	SimConfig cfg;
	auto m = leaf_id(d, "m"), n = leaf_id(d, "n");

	SimState one = st;
	exec_proc_all(d, {m, n}, one, cfg);
	CHECK(*driving_value(one, d, m, 0) == Val::integer(3));
	CHECK(*driving_value(one, d, n, 0) == Val::integer(2));
	CHECK(*driving_value(one, d, leaf_id(d, "x"), 0) == Val::integer(0));
	CHECK(*driving_value(one, d, leaf_id(d, "y"), 0) == Val::integer(0));

	resume_processes(d, {m, n}, st, cfg);
	CHECK(sig_int(st, d, "m") == 3);
	CHECK(sig_int(st, d, "n") == 2);
	CHECK(sig_int(st, d, "x") == 5);
	CHECK(sig_int(st, d, "y") == 5);
}

namespace {

struct DeltaCounter : Observer {
	int deltas = 0;
	void on_delta(const std::string &, const Design &, std::int64_t, std::int32_t, const std::vector<std::int32_t> &,
			const std::vector<Transition> &) override {
		++deltas;
	}
};

// p counts its runs in p.runs; q is independent and sensitive to b.
Design counting() {
	Design d;
	d.name = "counting";
	for (const char *n : {"a", "b", "qa", "qb"})
		d.env.sigprts.push_back(signal(n, int_t(), Val::integer(0)));
	d.env.variables.push_back(variable("p.runs", int_t(), Val::integer(0)));
	d.processes.push_back(process("p", {"a"},
			{sst_va("", lhs("p.runs"), rhs_e(bexpa(exp_var("p.runs"), Op::Add, ci(1)))),
					sst_sa("", lhs("qa"), rhs_e(bexpa(exp_sig("a"), Op::Mul, ci(2))))}));
	d.processes.push_back(process("q", {"b"}, {sst_sa("", lhs("qb"), rhs_e(bexpa(exp_sig("b"), Op::Add, exp_sig("a"))))}));
	return linked(std::move(d));
}

Design oscillator() {
	Design d;
	d.name = "osc";
	d.env.sigprts.push_back(signal("s", bit_t(), Val::bit(false)));
	d.processes.push_back(process("p", {"s"}, {sst_sa("", lhs("s"), rhs_e(uexp(Op::Not, exp_sig("s"))))}));
	return linked(std::move(d));
}

// cnt increments on clk = '1'
Design clocked() {
	Design d;
	d.name = "clocked";
	d.env.sigprts.push_back(port("clk", Mode::In, logic_t()));
	d.env.sigprts.push_back(signal("cnt", int_t(), Val::integer(0)));
	d.processes.push_back(process("p", {"clk"},
			{sst_if("", bexpr(exp_sig("clk"), Op::Eq, cl('1')),
					{sst_sa("", lhs("cnt"), rhs_e(bexpa(exp_sig("cnt"), Op::Add, ci(1))))}, {})}));
	return linked(std::move(d));
}

} // namespace

TEST_CASE("mnxy settles in exactly two delta iterations") {
	Design d = mnxy();
	SimState st = init_state(d);
	st.pending = {leaf_id(d, "m"), leaf_id(d, "n")};
	DeltaCounter obs;
	SimConfig cfg;
	cfg.observer = &obs;
	simulation(1, d, st, cfg);
	CHECK(obs.deltas == 2);
	CHECK(sig_int(st, d, "x") == 5);
	CHECK(sig_int(st, d, "y") == 5);
}

TEST_CASE("process activation") {
	Design d = counting();
	SimState st = init_state(d);
	SimConfig cfg;
	SimState same = st;
	exec_proc_all(d, {}, same, cfg);
	CHECK(same == st);
	CHECK(!has_active_processes(d, {}));
	CHECK(has_active_processes(d, {leaf_id(d, "a")}));
	exec_proc_all(d, {leaf_id(d, "a")}, st, cfg);
	CHECK(variable_value(st, d, "p.runs").as_int() == 1);
	CHECK(!driving_value(st, d, leaf_id(d, "qb"), 1)->has_value());
}

TEST_CASE("independent processes: order does not matter") {
	Design d = counting();
	std::string first;
	for (const auto &perm : vk_test::process_permutations(d)) {
		SimState st = init_state(perm);
		external_write(st, perm, leaf_id(perm, "a"), Val::integer(4), true);
		external_write(st, perm, leaf_id(perm, "b"), Val::integer(1), true);
		simulation(1, perm, st, SimConfig{});
		CHECK(sig_int(st, perm, "qa") == 8);
		CHECK(sig_int(st, perm, "qb") == 5);
	}
}

TEST_CASE("oscillation hits the delta limit") {
	Design d = oscillator();
	SimState st = init_state(d);
	SimConfig cfg;
	cfg.delta_limit = 50;
	try {
		resume_processes(d, {0}, st, cfg);
		FAIL("no error");
	} catch (const SimError &e) {
		CHECK(e.kind() == ErrorKind::DeltaLimit);
		std::string msg = e.what();
		CHECK(msg.find("delta cycle limit exceeded") != std::string::npos);
		CHECK(msg.find("s") != std::string::npos);
	}
}

TEST_CASE("quiescence and the clock") {
	Design d = clocked();
	SimState st = init_state(d);
	SimConfig none;
	SimState q = st;
	exec_sim_cyc(d, q, none);
	CHECK(q == st);
	SimState z = st;
	simulation(0, d, z, none);
	CHECK(z == st);
	SimState nf = st;
	flip_clk(d, nf, none);
	CHECK(nf == st);

	SimConfig cfg;
	cfg.clock = "clk";
	auto clk = leaf_id(d, "clk");
	SimState f = st;
	f.sp[static_cast<std::size_t>(clk)] = Val::logic(Logic9::L0);
	f.eff[static_cast<std::size_t>(clk)] = f.sp[static_cast<std::size_t>(clk)];
	SimState g = f;
	flip_clk(d, g, cfg);
	CHECK(*g.eff[static_cast<std::size_t>(clk)] == Val::logic(Logic9::L1));
	CHECK(g.pending == std::vector<std::int32_t>{clk}); // wakes clk processes next cycle
	exec_sim_cyc(d, g, cfg);
	CHECK(sig_int(g, d, "cnt") == 1);
	SimState h = f;
	flip_clk(d, h, cfg);
	flip_clk(d, h, cfg);
	CHECK(*h.eff[static_cast<std::size_t>(clk)] == Val::logic(Logic9::L0));

	// n cycles are n edges: rising ones in cycles 3, 5, ...
	SimState s = st;
	simulation(10, d, s, cfg);
	CHECK(sig_int(s, d, "cnt") == 4);
	CHECK(simulated(10, d, st, cfg) == s);
}

TEST_CASE("resume_processes reaches a fixpoint") {
	Design d = counting();
	SimState st = init_state(d);
	external_write(st, d, leaf_id(d, "a"), Val::integer(3), false);
	resume_processes(d, {leaf_id(d, "a")}, st, SimConfig{});
	for (auto l : active_sigprts(st))
		for (const auto &sens : d.idx().sensitivity)
			CHECK(std::find(sens.begin(), sens.end(), l) == sens.end());
}

TEST_CASE("factorial 5 through the kernel") {
	vk_test::Bench b({vk_test::corpus_file("factorial", "factorial.vhd")}, std::nullopt, "clk");
	b.set("start", "1");
	b.set("n", "5");
	b.step(40);
	CHECK(b.get_int("result") == 120);
}

TEST_CASE("dirty and full effective-value modes give the same runs") {
	for (const auto &n : vk_test::corpus_names()) {
		auto c = vk_test::load_case(n);
		if (c.expect_exit != 0)
			continue;
		CAPTURE(n);
		vk_test::Bench dirty(c.spec.files, c.spec.top, c.spec.clock);
		vk_test::Bench full(c.spec.files, c.spec.top, c.spec.clock);
		full.config().full_eff_recompute = true;
		bool same = true;
		for (std::int64_t cyc = 1; cyc <= c.spec.cycles && same; ++cyc) {
			for (const auto &s : c.spec.stimuli)
				if (s.cycle == cyc) {
					dirty.set(s.signal, s.value);
					full.set(s.signal, s.value);
				}
			dirty.step();
			full.step();
			same = dirty.dump() == full.dump();
		}
		CHECK(same);
	}
}
