#include <functional>
#include <map>

#include "doctest.h"
#include "harness.hpp"
#include "support.hpp"
#include "vhdlkern/error.hpp"
#include "vhdlkern/seq_exec.hpp"

using namespace vt;
using vk_test::Rng;

namespace {

Expression V(const std::string &n) { return exp_var(n); }
Expression add(Expression a, Expression b) { return bexpa(std::move(a), Op::Add, std::move(b)); }
SeqStmt setv(const std::string &n, Expression e) { return sst_va("", lhs(n), rhs_e(std::move(e))); }

// One process "p" running body, integer variables as named, plus the
// signals given.
Design with_body(std::vector<std::string> ints, std::vector<SeqStmt> body, std::vector<Spl> sigs = {}) {
	Design d;
	d.name = "t";
	d.env.sigprts = std::move(sigs);
	for (auto &n : ints)
		d.env.variables.push_back(variable(n, int_t(), Val::integer(0)));
	d.processes.push_back(process("p", {}, std::move(body)));
	return linked(std::move(d));
}

std::int64_t var_int(const SimState &st, const Design &d, const std::string &n) { return variable_value(st, d, n).as_int(); }

SimState run_body(const Design &d, std::int64_t budget = kDefaultLoopBudget) {
	SimState st = init_state(d);
	ExecCtx ctx(d, 0, budget);
	exec_stmt_list(ctx, d.processes[0].body, st);
	return st;
}

Subprogram function(const std::string &name, std::vector<std::string> formals, std::vector<std::string> locals,
		std::vector<SeqStmt> body) {
	Subprogram f;
	f.name = name;
	f.kind = SubKind::Function;
	for (auto &x : formals)
		f.formals.push_back(Formal{x, Mode::In});
	f.locals = std::move(locals);
	f.ret_type = int_t();
	f.body = std::move(body);
	return f;
}

SubProgCall call(const std::string &callee, std::vector<std::string> args, bool fn = true) {
	SubProgCall c;
	c.callee = callee;
	for (auto &a : args)
		c.args.push_back(lhs(a));
	if (fn)
		c.ret_type = int_t();
	return c;
}

} // namespace

TEST_CASE("empty and null statement lists change nothing") {
	Design d = with_body({"p.x"}, {});
	CHECK(run_body(d) == init_state(d));
	Design n = with_body({"p.x"}, {sst_nl(), sst_nl()});
	CHECK(run_body(n) == init_state(n));
}

TEST_CASE("exit inside a loop stops the body and raises the flag") {
	Design d = with_body({"p.x"}, {setv("p.x", ci(1)), sst_e("", "l", cb(true)), setv("p.x", ci(2))});
	SimState st = init_state(d);
	ExecCtx ctx(d, 0);
	exec_stmt_list(ctx, d.processes[0].body, st);
	CHECK(var_int(st, d, "p.x") == 1);
	CHECK(st.exit_flag == LoopFlag{"l", true});
}

TEST_CASE("signal assignments drive, reads see current values") {
	Design d = mnxy();
	SimState st = init_state(d);
	exec_process(d, 0, st);
	CHECK(*driving_value(st, d, leaf_id(d, "m"), 0) == Val::integer(3));
	CHECK(*driving_value(st, d, leaf_id(d, "x"), 0) == Val::integer(0));
	CHECK(sig_int(st, d, "m") == 0);
}

TEST_CASE("ranged signal assignment replaces only its slots") {
	Rng r(31);
	for (int k = 0; k < 300; ++k) {
		int w = static_cast<int>(r.range(1, 12));
		int lo = static_cast<int>(r.range(0, w - 1)), hi = static_cast<int>(r.range(lo, w - 1));
		std::string init, part;
		for (int i = 0; i < w; ++i)
			init += r.coin() ? '1' : '0';
		for (int i = lo; i <= hi; ++i)
			part += r.coin() ? '1' : 'Z';
		Val iv = Val::vector_from_string(ValTag::VecDownto, w - 1, ScalarKind::Logic, init);
		Val pv = Val::vector_from_string(ValTag::VecDownto, hi - lo, ScalarKind::Logic, part);
		Design d = with_body({}, {sst_sa("", lhs_range("v", ci(lo), ci(hi), true), rhs_e(exp_con(pv)))},
				{signal("v", slv_t(w - 1), iv)});
		SimState st = run_body(d);
		Val got = **driving_value(st, d, 0, 0);
		for (int i = 0; i < w; ++i) {
			Val want = i >= lo && i <= hi ? vec_nth(pv.rebased(ValTag::VecDownto, hi), i) : vec_nth(iv, i);
			CHECK(vec_nth(got, i) == want);
		}
	}
	Design f = with_body({}, {sst_sa("", lhs_range("v", ci(0), ci(7), true), rhs_o(cl('0')))}, {signal("v", slv_t(7))});
	SimState st = run_body(f);
	CHECK(**driving_value(st, f, 0, 0) == Val::vector_from_string(ValTag::VecDownto, 7, ScalarKind::Logic, "00000000"));
}

TEST_CASE("variables: immediate visibility and ranged writes") {
	Design d = with_body({"p.x", "p.y"}, {setv("p.x", ci(1)), setv("p.y", V("p.x"))});
	CHECK(var_int(run_body(d), d, "p.y") == 1);

	Design c;
	c.name = "c";
	c.env.variables.push_back(variable("p.cnt", bv_t(4)));
	c.env.variables.push_back(variable("p.x", bv_t(7), Val::vector_from_string(ValTag::VecDownto, 7, ScalarKind::Bit, "10101010")));
	c.processes.push_back(process("p", {},
			{sst_va("", lhs("p.cnt"), rhs_e(exp_con(Val::vector_from_string(ValTag::VecTo, 0, ScalarKind::Bit, "00000")))),
					sst_va("", lhs_range("p.x", ci(3), ci(4), true),
							rhs_e(exp_con(Val::vector_from_string(ValTag::VecDownto, 1, ScalarKind::Bit, "10"))))}));
	link(c);
	SimState st = run_body(c);
	CHECK(variable_value(st, c, "p.cnt").length() == 5);
	// x(4 downto 3) := "10" on "10101010"
	CHECK(variable_value(st, c, "p.x") == Val::vector_from_string(ValTag::VecDownto, 7, ScalarKind::Bit, "10110010"));
}

TEST_CASE("if picks one branch") {
	Design d = with_body({"p.x"}, {sst_if("", cb(true), {setv("p.x", ci(1))}, {setv("p.x", ci(2))})});
	CHECK(var_int(run_body(d), d, "p.x") == 1);
	Design e = with_body({"p.x"}, {sst_if("", cb(false), {setv("p.x", ci(1))}, {})});
	CHECK(run_body(e) == init_state(e));
}

TEST_CASE("while loops") {
	Design none = with_body({"p.x"}, {sst_l("l", cb(false), {setv("p.x", ci(9))})});
	CHECK(run_body(none) == init_state(none));

	auto lt = [](std::int64_t n) { return bexpr(V("p.x"), Op::Lt, ci(n)); };
	Design count = with_body({"p.x"}, {sst_l("l", lt(7), {setv("p.x", add(V("p.x"), ci(1)))})});
	CHECK(var_int(run_body(count), count, "p.x") == 7);

	// exit on iteration 3
	Design ex = with_body({"p.x"}, {sst_l("l", cb(true), {setv("p.x", add(V("p.x"), ci(1))),
			sst_e("", "l", bexpr(V("p.x"), Op::Eq, ci(3)))})});
	SimState st = run_body(ex);
	CHECK(var_int(st, ex, "p.x") == 3);
	CHECK(st.exit_flag == LoopFlag{});
	CHECK(st.next_flag == LoopFlag{});

	// inner exit naming the outer loop leaves both
	Design nest = with_body({"p.x", "p.y"},
			{sst_l("outer", cb(true), {setv("p.x", add(V("p.x"), ci(1))),
					sst_l("inner", cb(true), {setv("p.y", add(V("p.y"), ci(1))), sst_e("", "outer", cb(true)),
							setv("p.y", ci(100))}),
					setv("p.x", ci(100))})});
	st = run_body(nest);
	CHECK(var_int(st, nest, "p.x") == 1);
	CHECK(var_int(st, nest, "p.y") == 1);
	CHECK(st.exit_flag == LoopFlag{});

	// next when i = 5 skips the tail once
	Design nx = with_body({"p.i", "p.s"}, {sst_l("l", bexpr(V("p.i"), Op::Lt, ci(8)),
			{setv("p.i", add(V("p.i"), ci(1))), sst_n("", "l", bexpr(V("p.i"), Op::Eq, ci(5))),
					setv("p.s", add(V("p.s"), V("p.i")))})});
	CHECK(var_int(run_body(nx), nx, "p.s") == 1 + 2 + 3 + 4 + 6 + 7 + 8);

	Design spin = with_body({"p.x"}, {sst_l("spin", cb(true), {})});
	try {
		run_body(spin, 0);
		FAIL("no error");
	} catch (const SimError &e) {
		CHECK(e.kind() == ErrorKind::LoopBudget);
		CHECK(std::string(e.what()).find("loop budget exceeded") != std::string::npos);
		CHECK(std::string(e.what()).find("spin") != std::string::npos);
	}
}

TEST_CASE("functions and procedures") {
	auto base = [](std::vector<Subprogram> subs, std::vector<std::string> vars, std::vector<SeqStmt> body) {
		Design d = with_body(vars, std::move(body));
		d.subprograms = std::move(subs);
		link(d);
		return d;
	};
	Design id = base({function("id", {"id.x"}, {}, {sst_rt("", rhs_e(V("id.x")))})}, {"id.x", "p.a", "p.v"},
			{setv("p.a", ci(7)), sst_fn("", lhs("p.v"), call("id", {"p.a"}))});
	CHECK(check_design(id).empty());
	CHECK(var_int(run_body(id), id, "p.v") == 7);

	// f(x) = x <= 1 ? 1 : x * f(x - 1)
	Subprogram f = function("f", {"f.x"}, {"f.t", "f.r"},
			{sst_if("", bexpr(V("f.x"), Op::Le, ci(1)), {sst_rt("", rhs_e(ci(1)))}, {}),
					setv("f.t", bexpa(V("f.x"), Op::Sub, ci(1))), sst_fn("", lhs("f.r"), call("f", {"f.t"})),
					sst_rt("", rhs_e(bexpa(V("f.x"), Op::Mul, V("f.r"))))});
	Design fact = base({f}, {"f.x", "f.t", "f.r", "p.a", "p.v", "p.w"},
			{setv("p.a", ci(5)), sst_fn("", lhs("p.v"), call("f", {"p.a"})), setv("p.a", ci(2)),
					sst_fn("", lhs("p.w"), call("f", {"p.a"})), sst_fn("", lhs("p.w"), call("f", {"p.w"}))});
	REQUIRE(check_design(fact).empty());
	SimState st = run_body(fact);
	CHECK(var_int(st, fact, "p.v") == 120);
	CHECK(var_int(st, fact, "p.w") == 2); // f(f(2))
	CHECK(var_int(st, fact, "f.x") == 0);
	CHECK(var_int(st, fact, "f.r") == 0);

	// p(x in, y out): y := x; x := 99
	Subprogram pr;
	pr.name = "pr";
	pr.kind = SubKind::Procedure;
	pr.formals = {Formal{"pr.x", Mode::In}, Formal{"pr.y", Mode::Out}};
	pr.body = {setv("pr.y", V("pr.x")), setv("pr.x", ci(99))};
	Design pc = base({pr}, {"pr.x", "pr.y", "p.a", "p.r"},
			{setv("p.a", ci(3)), sst_pc("", call("pr", {"p.a", "p.r"}, false))});
	REQUIRE(check_design(pc).empty());
	st = run_body(pc);
	CHECK(var_int(st, pc, "p.r") == 3);
	CHECK(var_int(st, pc, "p.a") == 3);
}

TEST_CASE("calls restore every callee variable (random bodies)") {
	Rng r(37);
	const std::vector<std::string> fv = {"h.a", "h.b", "h.c"};
	for (int k = 0; k < 1200; ++k) {
		// straight-line body over h.a h.b h.c, then return one of them
		std::vector<SeqStmt> body;
		std::map<std::string, std::int64_t> env;
		std::int64_t x = r.range(-20, 20), y = r.range(-20, 20);
		env["h.a"] = x;
		env["h.b"] = y;
		env["h.c"] = 0; // locals start from their declared initial value
		for (auto n = r.range(0, 6); n > 0; --n) {
			const auto &dst = r.pick(fv);
			const auto &src = r.pick(fv);
			auto c = r.range(-5, 5);
			bool mul = r.coin();
			body.push_back(setv(dst, bexpa(V(src), mul ? Op::Mul : Op::Add, ci(c))));
			env[dst] = mul ? env[src] * c : env[src] + c;
		}
		const auto &ret = r.pick(fv);
		body.push_back(sst_rt("", rhs_e(V(ret))));
		Design d = with_body({"h.a", "h.b", "h.c", "p.x", "p.y", "p.v"},
				{setv("p.x", ci(x)), setv("p.y", ci(y)), sst_fn("", lhs("p.v"), call("h", {"p.x", "p.y"}))});
		d.subprograms.push_back(function("h", {"h.a", "h.b"}, {"h.c"}, body));
		link(d);
		SimState st = init_state(d);
		std::map<std::string, Val> before;
		for (const auto &n : fv) {
			st.var[static_cast<std::size_t>(var_id(d, n))] = Val::integer(r.range(-100, 100));
			before[n] = variable_value(st, d, n);
		}
		ExecCtx ctx(d, 0);
		exec_stmt_list(ctx, d.processes[0].body, st);
		CHECK(var_int(st, d, "p.v") == env[ret]);
		for (const auto &n : fv)
			CHECK(variable_value(st, d, n) == before[n]);
	}
}

namespace {

// Random nested loop programs with next/exit aimed at enclosing loops,
// and a direct interpreter of the same programs.
struct LNode {
	enum Kind { Loop, Hit, Next, Exit } kind = Hit;
	int id = 0;     // loop id, hit counter id
	int bound = 0;  // loop
	int target = 0; // next/exit: loop id
	int self = 0;   // next/exit: innermost loop whose counter is tested
	int mod = 1, rem = 0;
	std::vector<LNode> body;
};

struct Gen {
	Rng &r;
	int loops = 0, hits = 0;
	std::vector<LNode> list(std::vector<int> &stack, int depth) {
		std::vector<LNode> out;
		for (auto n = r.range(1, 4); n > 0; --n) {
			auto pick = r.range(0, 9);
			LNode x;
			if (pick < 3 && depth < 3) {
				x.kind = LNode::Loop;
				x.id = loops++;
				x.bound = static_cast<int>(r.range(0, 4));
				stack.push_back(x.id);
				x.body = list(stack, depth + 1);
				stack.pop_back();
			} else if (pick < 7 || stack.empty()) {
				x.kind = LNode::Hit;
				x.id = hits++;
			} else {
				x.kind = r.coin() ? LNode::Next : LNode::Exit;
				x.target = stack[static_cast<std::size_t>(r.range(0, static_cast<std::int64_t>(stack.size()) - 1))];
				x.self = stack.back();
				x.mod = static_cast<int>(r.range(1, 3));
				x.rem = static_cast<int>(r.range(0, x.mod - 1));
			}
			out.push_back(std::move(x));
		}
		return out;
	}
};

std::string cnt(int id) { return "p.c" + std::to_string(id); }
std::string hit(int id) { return "p.h" + std::to_string(id); }
std::string lname(int id) { return "l" + std::to_string(id); }

std::vector<SeqStmt> lower(const std::vector<LNode> &ns) {
	std::vector<SeqStmt> out;
	for (const auto &n : ns) {
		auto cond = [&] {
			return bexpr(bexpa(V(cnt(n.self)), Op::Mod, ci(n.mod)), Op::Eq, ci(n.rem));
		};
		switch (n.kind) {
		case LNode::Loop: {
			out.push_back(setv(cnt(n.id), ci(0)));
			std::vector<SeqStmt> body{setv(cnt(n.id), add(V(cnt(n.id)), ci(1)))};
			for (auto &s : lower(n.body))
				body.push_back(std::move(s));
			out.push_back(sst_l(lname(n.id), bexpr(V(cnt(n.id)), Op::Lt, ci(n.bound)), std::move(body)));
			break;
		}
		case LNode::Hit:
			out.push_back(setv(hit(n.id), add(V(hit(n.id)), ci(1))));
			break;
		case LNode::Next:
			out.push_back(sst_n("", lname(n.target), cond()));
			break;
		case LNode::Exit:
			out.push_back(sst_e("", lname(n.target), cond()));
			break;
		}
	}
	return out;
}

struct Interp {
	std::map<int, std::int64_t> c, h;
	// 0: fell through; otherwise (kind, loop) of a pending next/exit
	std::pair<int, int> run(const std::vector<LNode> &ns) {
		for (const auto &n : ns) {
			switch (n.kind) {
			case LNode::Loop: {
				c[n.id] = 0;
				while (c[n.id] < n.bound) {
					++c[n.id];
					auto sig = run(n.body);
					if (sig.first == 0 || (sig.first == 1 && sig.second == n.id))
						continue;
					if (sig.first == 2 && sig.second == n.id)
						break;
					return sig;
				}
				break;
			}
			case LNode::Hit:
				++h[n.id];
				break;
			case LNode::Next:
			case LNode::Exit:
				if (c[n.self] % n.mod == n.rem)
					return {n.kind == LNode::Next ? 1 : 2, n.target};
				break;
			}
		}
		return {0, 0};
	}
};

} // namespace

TEST_CASE("nested next/exit against a reference interpreter") {
	Rng r(41);
	int with_flags = 0;
	for (int k = 0; k < 1500; ++k) {
		Gen g{r};
		std::vector<int> stack;
		// the whole program sits in one outer loop so every next/exit has a target
		LNode top;
		top.kind = LNode::Loop;
		top.id = g.loops++;
		top.bound = static_cast<int>(r.range(1, 3));
		stack.push_back(top.id);
		top.body = g.list(stack, 1);
		std::vector<LNode> prog{top};
		std::vector<std::string> vars;
		for (int i = 0; i < g.loops; ++i)
			vars.push_back(cnt(i));
		for (int i = 0; i < g.hits; ++i)
			vars.push_back(hit(i));
		Design d = with_body(vars, lower(prog));
		REQUIRE(check_design(d).empty());
		SimState st = run_body(d);
		Interp ref;
		ref.run(prog);
		for (int i = 0; i < g.loops; ++i)
			CHECK(var_int(st, d, cnt(i)) == ref.c[i]);
		for (int i = 0; i < g.hits; ++i)
			CHECK(var_int(st, d, hit(i)) == ref.h[i]);
		CHECK(st.next_flag == LoopFlag{});
		CHECK(st.exit_flag == LoopFlag{});
		with_flags += g.loops > 1;
	}
	CHECK(with_flags > 500);
}
