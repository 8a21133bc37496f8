#include <set>

#include "doctest.h"
#include "harness.hpp"
#include "support.hpp"
#include "vhdlkern/desugar.hpp"
#include "vhdlkern/seq_exec.hpp"

using namespace vt;
using vk_test::Rng;

namespace {

CSeqStmt cnull() { return from_core(sst_nl()); }
CSeqStmt cset(const std::string &v, Expression e) { return from_core(sst_va("", lhs(v), rhs_e(std::move(e)))); }

// A design with integer variables and one process holding the lowered body.
Design run_lowered(std::vector<std::string> ints, const std::vector<CSeqStmt> &body, SimState &st) {
	Lowering lw;
	Design d;
	d.name = "t";
	for (auto &n : ints)
		d.env.variables.push_back(variable(n, int_t(), Val::integer(0)));
	d.processes.push_back(process("p", {}, lw.lower_seq_list(body)));
	for (const auto &v : lw.new_variables())
		d.env.variables.push_back(v);
	link(d);
	st = init_state(d);
	exec_process(d, 0, st);
	return d;
}

const char *kSweepComplex = R"(
library ieee;
use ieee.std_logic_1164.all;
entity sweep is
  port (a, b, c, d : in std_logic := '0'; y, z : out std_logic := '0'; n : out integer := 0);
end entity;
architecture rtl of sweep is
  signal sel : std_logic_vector(1 downto 0) := "00";
begin
  sel <= a & b;
  y <= c when a = '1' else d when b = '1' else c xor d;
  with sel select z <= c when "00", d when "01", c and d when "10", '0' when others;
  cnt : process (a, b, c, d)
    variable k : integer;
  begin
    k := 0;
    for i in 0 to 3 loop
      case i is
        when 0 => if a = '1' then k := k + 1; end if;
        when 1 => if b = '1' then k := k + 2; end if;
        when 2 => if c = '1' then k := k + 4; end if;
        when others => if d = '1' then k := k + 8; end if;
      end case;
    end loop;
    n <= k;
  end process;
end architecture;
)";

const char *kSweepCore = R"(
library ieee;
use ieee.std_logic_1164.all;
entity sweep is
  port (a, b, c, d : in std_logic := '0'; y, z : out std_logic := '0'; n : out integer := 0);
end entity;
architecture rtl of sweep is
  signal sel : std_logic_vector(1 downto 0) := "00";
begin
  ps : process (a, b)
  begin
    sel <= a & b;
  end process;
  py : process (a, b, c, d)
  begin
    if a = '1' then
      y <= c;
    else
      if b = '1' then
        y <= d;
      else
        y <= c xor d;
      end if;
    end if;
  end process;
  pz : process (sel, c, d)
  begin
    if sel = "00" then
      z <= c;
    else
      if sel = "01" then
        z <= d;
      else
        if sel = "10" then
          z <= c and d;
        else
          z <= '0';
        end if;
      end if;
    end if;
  end process;
  cnt : process (a, b, c, d)
    variable k : integer;
  begin
    k := 0;
    if a = '1' then k := k + 1; end if;
    if b = '1' then k := k + 2; end if;
    if c = '1' then k := k + 4; end if;
    if d = '1' then k := k + 8; end if;
    n <= k;
  end process;
end architecture;
)";

} // namespace

TEST_CASE("if with elsif folds into nested else branches") {
	auto c1 = exp_var("c1"), c2 = exp_var("c2");
	Lowering lw;
	auto got = lw.lower_seq(ssc_if("", c1, {cnull()}, {CElsif{c2, {cnull()}}}, {cnull()}));
	std::vector<SeqStmt> want{sst_if("", c1, {sst_nl()}, {sst_if("", c2, {sst_nl()}, {sst_nl()})})};
	CHECK(got == want);
}

TEST_CASE("case lowers to equality tests") {
	Expression sel = exp_sig("r.state");
	Val v000 = Val::vector_from_string(ValTag::VecDownto, 2, ScalarKind::Logic, "000");
	Lowering lw;
	auto got = lw.lower_seq(ssc_case("", sel, {CaseWhen{{CaseChoice{exp_con(v000), std::nullopt}}, {cnull()}}}, std::nullopt));
	REQUIRE(got.size() == 1);
	CHECK(got[0].kind == StmtKind::If);
	CHECK(got[0].cond == bexpr(sel, Op::Eq, exp_con(v000)));
	CHECK(got[0].body == std::vector<SeqStmt>{sst_nl()});
	CHECK(got[0].else_body == std::vector<SeqStmt>{sst_nl()});
}

TEST_CASE("exhaustive case never reaches others") {
	for (int width = 1; width <= 3; ++width) {
		int n = 1 << width;
		std::vector<CaseWhen> whens;
		for (int v = 0; v < n; ++v)
			whens.push_back(CaseWhen{{CaseChoice{ci(v), std::nullopt}}, {cset("p.hit", ci(v))}});
		for (int v = 0; v < n; ++v) {
			std::vector<CSeqStmt> body{cset("p.s", ci(v)), ssc_case("", exp_var("p.s"), whens, std::vector<CSeqStmt>{cset("p.hit", ci(-1))})};
			SimState st;
			Design d = run_lowered({"p.s", "p.hit"}, body, st);
			CHECK(variable_value(st, d, "p.hit").as_int() == v);
		}
	}
}

TEST_CASE("for loop lowering") {
	DiscreteRange r{ci(0), ci(3), false};
	SimState st;
	Design d = run_lowered({"p.x"}, {ssc_for("l", "l.i", r, {cset("p.x", bexpa(exp_var("p.x"), Op::Add, exp_var("l.i")))})}, st);
	CHECK(variable_value(st, d, "p.x").as_int() == 6);
	DiscreteRange down{ci(1), ci(4), true};
	Design e = run_lowered({"p.x"}, {ssc_for("l", "l.i", down, {cset("p.x", bexpa(bexpa(exp_var("p.x"), Op::Mul, ci(10)), Op::Add, exp_var("l.i")))})}, st);
	CHECK(variable_value(st, e, "p.x").as_int() == 4321);
}

TEST_CASE("conditional assignment lowering") {
	Lowering lw;
	auto c = csc_ca("thisproc", lhs("s"),
			{AsWhen{rhs_e(exp_sig("x")), bexpr(exp_sig("i"), Op::Gt, ci(0))},
					AsWhen{rhs_e(exp_sig("y")), bexpr(exp_sig("j"), Op::Eq, ci(5))}},
			rhs_e(exp_sig("z")));
	ConcStmt p = lw.lower_conc_assign(c);
	CHECK(p.sensitivity == std::vector<std::string>{"x", "i", "y", "j", "z"});
	REQUIRE(p.body.size() == 1);
	CHECK(p.body[0].kind == StmtKind::If);
	REQUIRE(p.body[0].else_body.size() == 1);
	CHECK(p.body[0].else_body[0].kind == StmtKind::If);
	CHECK(p.body[0].else_body[0].else_body == std::vector<SeqStmt>{sst_sa("thisproc", lhs("s"), rhs_e(exp_sig("z")))});

	Lowering cond_only(LowerOptions{true});
	CHECK(cond_only.lower_conc_assign(c).sensitivity == std::vector<std::string>{"i", "j"});

	ConcStmt u = lw.lower_conc_assign(csc_ca("u", lhs("s"), {}, rhs_e(exp_sig("e"))));
	CHECK(u.body == std::vector<SeqStmt>{sst_sa("u", lhs("s"), rhs_e(exp_sig("e")))});
	CHECK(u.sensitivity == std::vector<std::string>{"e"});
}

TEST_CASE("lowered design matches a hand-written core design on all inputs") {
	auto cx = vk_test::load_text(kSweepComplex);
	auto core = vk_test::load_text(kSweepCore);
	REQUIRE(cx.ok());
	REQUIRE(core.ok());
	const Design &a = cx.registry.get("sweep");
	const Design &b = core.registry.get("sweep");
	SimState sa = init_state(a), sb = init_state(b);
	std::vector<int> order;
	for (int v = 0; v < 16; ++v)
		order.push_back(v);
	for (int v = 15; v >= 0; v -= 3)
		order.push_back(v);
	for (int v : order) {
		CAPTURE(v);
		const char *ins[] = {"a", "b", "c", "d"};
		for (int k = 0; k < 4; ++k) {
			Val bit = Val::logic((v >> k) & 1 ? Logic9::L1 : Logic9::L0);
			external_write(sa, a, leaf_id(a, ins[k]), bit, true);
			external_write(sb, b, leaf_id(b, ins[k]), bit, true);
		}
		simulation(1, a, sa, SimConfig{});
		simulation(1, b, sb, SimConfig{});
		for (const char *o : {"y", "z", "n", "sel"})
			CHECK(signal_value(sa, a, o) == signal_value(sb, b, o));
		CHECK(signal_value(sa, a, "n").as_int() == v);
	}
}

TEST_CASE("generate statements") {
	Environment env;
	env.sigprts.push_back(signal("v", bv_t(9)));
	env.sigprts.push_back(signal("o", bv_t(9)));
	Lowering lw;
	auto p1 = csc_ps("p1", {"v"}, {from_core(sst_sa("", lhs_range("o", exp_var("g.i"), exp_var("g.i"), true),
			rhs_e(exp_tl(exp_nth(exp_sig("v"), exp_var("g.i"))))))});
	auto p2 = csc_ps("p2", {"v"}, {cnull()});
	CHECK(lw.lower_generate(csc_if_gen("g", cb(false), {p1}), env).empty());
	CHECK(lw.lower_generate(csc_if_gen("g", cb(true), {p1, p2}), env).size() == 2);
	auto procs = lw.lower_generate(csc_for_gen("g", "g.i", DiscreteRange{ci(0), ci(9), false}, {p1, p2}), env);
	REQUIRE(procs.size() == 20);
	std::vector<Expression> reads, want;
	for (const auto &p : procs)
		if (p.name.rfind("p1", 0) == 0)
			reads.push_back(p.body[0].rhs.expr.args[0]);
	for (int i = 0; i <= 9; ++i)
		want.push_back(exp_nth(exp_sig("v"), ci(i)));
	CHECK(reads == want);
	CHECK(procs[0].name == "p1_0");
	CHECK(procs[19].name == "p2_9");

	Rng r(43);
	for (int k = 0; k < 200; ++k) {
		auto lo = r.range(-3, 3), hi = r.range(lo - 1, lo + 6);
		std::vector<CConcStmt> body;
		for (auto m = r.range(0, 4); m > 0; --m)
			body.push_back(csc_ps("q" + std::to_string(m), {}, {cnull()}));
		Lowering l2;
		auto n = l2.lower_generate(csc_for_gen("g", "g.i", DiscreteRange{ci(lo), ci(hi), false}, body), env).size();
		CHECK(static_cast<std::int64_t>(n) == (hi - lo + 1) * static_cast<std::int64_t>(body.size()));
	}
}

TEST_CASE("substitution") {
	SeqStmt s = sst_va("", lhs("x"), rhs_e(bexpa(exp_var("y"), Op::Add, ci(1))));
	CHECK(subst(s, "i", Val::integer(4)) == s);
	SeqStmt t = sst_va("", lhs("x"), rhs_e(bexpa(exp_var("i"), Op::Add, ci(1))));
	CHECK(subst(t, "i", Val::integer(4)) == sst_va("", lhs("x"), rhs_e(bexpa(ci(4), Op::Add, ci(1)))));
}

namespace {

Expression random_expr(Rng &r, int depth) {
	static const std::vector<std::string> names = {"i", "j", "k", "v"};
	if (depth <= 0 || r.range(0, 3) == 0) {
		switch (r.range(0, 2)) {
		case 0:
			return ci(r.range(-9, 9));
		case 1:
			return exp_var(r.pick(names));
		default:
			return exp_sig(r.pick(names));
		}
	}
	switch (r.range(0, 3)) {
	case 0:
		return bexpa(random_expr(r, depth - 1), Op::Add, random_expr(r, depth - 1));
	case 1:
		return bexpr(random_expr(r, depth - 1), Op::Lt, random_expr(r, depth - 1));
	case 2:
		return exp_nth(exp_sig("v"), random_expr(r, depth - 1));
	default:
		return uexp(Op::Neg, random_expr(r, depth - 1));
	}
}

CSeqStmt random_stmt(Rng &r, int depth) {
	if (depth <= 0 || r.coin())
		return cset(r.coin() ? "x" : "i", random_expr(r, 3));
	std::vector<CSeqStmt> a, b;
	for (auto n = r.range(0, 2); n > 0; --n)
		a.push_back(random_stmt(r, depth - 1));
	for (auto n = r.range(0, 2); n > 0; --n)
		b.push_back(random_stmt(r, depth - 1));
	if (r.coin())
		return ssc_if("", random_expr(r, 2), a, {CElsif{random_expr(r, 2), b}}, {});
	return ssc_while("w", random_expr(r, 2), a);
}

} // namespace

TEST_CASE("substituting two distinct variables commutes") {
	Rng r(47);
	for (int k = 0; k < 1500; ++k) {
		CSeqStmt s = random_stmt(r, 3);
		Val a = Val::integer(r.range(-5, 5)), b = Val::integer(r.range(-5, 5));
		CHECK(subst(subst(s, "i", a), "j", b) == subst(subst(s, "j", b), "i", a));
		Expression e = random_expr(r, 4);
		CHECK(subst(subst(e, "k", a), "v", b) == subst(subst(e, "v", b), "k", a));
		// substituting a variable that does not occur is the identity
		CHECK(subst(e, "absent", a) == e);
	}
}
