#include "vhdlkern/seq_exec.hpp"

#include <ostream>

#include "vhdlkern/error.hpp"

namespace vhdlkern {

namespace {

using Group = DesignIndex::Group;

const Group &sig_group(const Design &d, std::int32_t g) { return d.idx().sig_groups[static_cast<std::size_t>(g)]; }
const Group &var_group(const Design &d, std::int32_t g) { return d.idx().var_groups[static_cast<std::size_t>(g)]; }

const Val &read_leaf_sig(const ExecCtx &ctx, std::int32_t leaf, const SimState &st) {
	auto k = static_cast<std::size_t>(leaf);
	if (!st.eff[k])
		fail(ErrorKind::Unresolved, "signal " + ctx.d.idx().leaves[k].name +
				" has several drivers and no resolution function");
	return st.sp[k];
}

Val read_sig_group(const ExecCtx &ctx, std::int32_t g, const SimState &st) {
	const auto &grp = sig_group(ctx.d, g);
	std::vector<Val> ms;
	for (const auto &m : grp.members)
		ms.push_back(m.is_leaf ? read_leaf_sig(ctx, m.id, st) : read_sig_group(ctx, m.id, st));
	return Val::record(grp.field_names, std::move(ms));
}

Val read_var_group(const ExecCtx &ctx, std::int32_t g, const SimState &st) {
	const auto &grp = var_group(ctx.d, g);
	std::vector<Val> ms;
	for (const auto &m : grp.members)
		ms.push_back(m.is_leaf ? st.var[static_cast<std::size_t>(m.id)] : read_var_group(ctx, m.id, st));
	return Val::record(grp.field_names, std::move(ms));
}

std::int64_t eval_int(const ExecCtx &ctx, const Expression &e, const SimState &st, const char *what) {
	Val v = eval_expr(ctx, e, st);
	if (!v.is_scalar() || v.scalar_kind() != ScalarKind::Integer)
		fail(ErrorKind::Eval, std::string(what) + " is not an integer: " + to_string(v));
	return v.as_int();
}

bool eval_cond(const ExecCtx &ctx, const Expression &e, const SimState &st) {
	Val v = eval_expr(ctx, e, st);
	if (!v.is_scalar() || v.scalar_kind() != ScalarKind::Boolean)
		fail(ErrorKind::Eval, "condition is not boolean: " + to_string(v));
	return v.as_bool();
}

std::string proc_name(const ExecCtx &ctx) {
	if (ctx.proc >= 0 && static_cast<std::size_t>(ctx.proc) < ctx.d.processes.size())
		return ctx.d.processes[static_cast<std::size_t>(ctx.proc)].name;
	return "?";
}

struct Range {
	std::int64_t lo, hi;
	std::int64_t len() const { return hi - lo + 1; }
};

std::optional<Range> eval_range(const ExecCtx &ctx, const Target &t, const SimState &st) {
	if (!t.range)
		return std::nullopt;
	Range r{eval_int(ctx, t.range->lo, st, "range bound"), eval_int(ctx, t.range->hi, st, "range bound")};
	if (r.hi < r.lo)
		fail(ErrorKind::Eval, "null range " + std::to_string(r.lo) + ".." + std::to_string(r.hi) + " in assignment to " +
				t.name);
	return r;
}

// Right-hand side value for a leaf of type t; "others" fills to the target
// (or range) length.
Val rhs_for_leaf(const Val &rhs, bool others, const TypeDesc &t, const std::optional<Range> &r, const std::string &name) {
	if (!others)
		return rhs;
	if (t.kind != TypeDesc::Kind::Vector)
		fail(ErrorKind::Eval, "\"others\" assignment to non-vector " + name);
	if (!rhs.is_scalar())
		fail(ErrorKind::Eval, "\"others\" element for " + name + " is not a scalar");
	std::int64_t n = r ? r->len() : t.length();
	std::vector<Scalar> el(static_cast<std::size_t>(n), rhs.scalar());
	std::int64_t left = r ? (t.downto ? r->hi : r->lo) : t.left;
	return Val::vector(t.vec_tag(), left, rhs.scalar_kind(), std::move(el));
}

void trace_write(const ExecCtx &ctx, const std::string &stmt, const std::string &target, const Val &v) {
	if (ctx.trace)
		*ctx.trace << "  " << proc_name(ctx) << ": " << (stmt.empty() ? "-" : stmt) << ": " << target << " := "
				<< to_string(v) << "\n";
}

struct Writer {
	ExecCtx &ctx;
	SimState &st;
	const std::string &stmt;
	bool is_signal;

	void leaf(std::int32_t id, const Val &rhs, bool others, const std::optional<Range> &r) {
		const auto &ix = ctx.d.idx();
		auto k = static_cast<std::size_t>(id);
		const TypeDesc &t = is_signal ? ix.leaves[k].type : ix.vars[k].type;
		const std::string &name = is_signal ? ix.leaves[k].name : ix.vars[k].name;
		Val v = rhs_for_leaf(rhs, others, t, r, name);
		Val out;
		if (r) {
			if (t.kind != TypeDesc::Kind::Vector)
				fail(ErrorKind::Eval, "range assignment to non-vector " + name);
			if (!v.is_vector())
				fail(ErrorKind::Eval, "range assignment to " + name + " needs a vector, got " + to_string(v));
			if (v.length() != r->len())
				fail(ErrorKind::Eval, "range " + std::to_string(r->lo) + ".." + std::to_string(r->hi) + " of " + name +
						" takes " + std::to_string(r->len()) + " elements, got " + std::to_string(v.length()));
			Val base;
			if (is_signal) {
				const auto *dv = driving_value(st, ctx.d, id, ctx.proc);
				base = dv && *dv ? **dv : st.sp[k];
			} else {
				base = st.var[k];
			}
			out = vec_replace(base, r->lo, v);
		} else {
			out = conform(v, t, name);
		}
		trace_write(ctx, stmt, r ? name + "(" + std::to_string(r->lo) + ".." + std::to_string(r->hi) + ")" : name, out);
		if (is_signal)
			set_driving(st, ctx.d, id, ctx.proc, std::move(out));
		else
			st.var[k] = std::move(out);
	}

	void group(std::int32_t g, const Val &rhs, bool others) {
		const Group &grp = is_signal ? sig_group(ctx.d, g) : var_group(ctx.d, g);
		if (others)
			fail(ErrorKind::Eval, "\"others\" assignment to record " + grp.name);
		if (!rhs.is_record() || rhs.members().size() != grp.members.size())
			fail(ErrorKind::Eval, "record " + grp.name + " assigned a value of different shape: " + to_string(rhs));
		for (std::size_t k = 0; k < grp.members.size(); ++k) {
			const auto &m = grp.members[k];
			if (m.is_leaf)
				leaf(m.id, rhs.members()[k], false, std::nullopt);
			else
				group(m.id, rhs.members()[k], false);
		}
	}

	void assign(const Target &t, const Val &rhs, bool others) {
		auto r = eval_range(ctx, t, st);
		if (t.slot >= 0) {
			leaf(t.slot, rhs, others, r);
		} else if (t.group >= 0) {
			if (r)
				fail(ErrorKind::Eval, "range assignment to record " + t.name);
			group(t.group, rhs, others);
		} else {
			fail(ErrorKind::Eval, std::string("assignment to unknown ") + (is_signal ? "signal " : "variable ") + t.name);
		}
	}
};

Val read_var_target(const ExecCtx &ctx, const Target &t, const SimState &st) {
	Val v;
	if (t.slot >= 0)
		v = st.var[static_cast<std::size_t>(t.slot)];
	else if (t.group >= 0)
		v = read_var_group(ctx, t.group, st);
	else
		fail(ErrorKind::Eval, "unknown variable " + t.name);
	if (auto r = eval_range(ctx, t, st))
		v = vec_slice(v, r->lo, r->len());
	return v;
}

struct Snapshot {
	std::vector<std::pair<std::int32_t, Val>> saved;

	Snapshot(const std::vector<std::int32_t> &ids, const SimState &st) {
		for (auto id : ids)
			saved.emplace_back(id, st.var[static_cast<std::size_t>(id)]);
	}
	void restore(SimState &st) const {
		for (const auto &[id, v] : saved)
			st.var[static_cast<std::size_t>(id)] = v;
	}
};

struct CallFrame {
	const Subprogram *sp = nullptr;
	std::int32_t id = -1;
};

CallFrame lookup(const ExecCtx &ctx, const SubProgCall &call, SubKind kind) {
	const auto &ix = ctx.d.idx();
	auto it = ix.subprogram_by_name.find(call.callee);
	if (it == ix.subprogram_by_name.end())
		fail(ErrorKind::Eval, std::string("call to unknown ") + (kind == SubKind::Function ? "function " : "procedure ") +
				call.callee);
	const Subprogram &sp = ctx.d.subprograms[static_cast<std::size_t>(it->second)];
	if (sp.kind != kind)
		fail(ErrorKind::Eval, call.callee + " is not a " + (kind == SubKind::Function ? "function" : "procedure"));
	if (sp.formals.size() != call.args.size())
		fail(ErrorKind::Eval, "call to " + call.callee + " passes " + std::to_string(call.args.size()) +
				" arguments, expected " + std::to_string(sp.formals.size()));
	return {&sp, it->second};
}


Target var_target(const DesignIndex &ix, const std::string &name) {
	Target t = lhs(name);
	t.slot = ix.var(name);
	if (t.slot < 0) {
		auto g = ix.var_group_by_name.find(name);
		t.group = g == ix.var_group_by_name.end() ? -1 : g->second;
	}
	return t;
}

// Copies in-mode actuals to formals, re-initialises locals and runs the body.
// Returns the value of the executed return statement, if any. The caller
// restores the snapshot once it has collected the results.
std::optional<Val> run_body(ExecCtx &ctx, const CallFrame &f, const SubProgCall &call, SimState &st) {
	const auto &ix = ctx.d.idx();
	if (ctx.call_depth >= kMaxCallDepth)
		fail(ErrorKind::LoopBudget, "call depth limit exceeded in " + call.callee);

	// Actuals are all read before any formal is written.
	std::vector<std::optional<Val>> in(call.args.size());
	for (std::size_t k = 0; k < call.args.size(); ++k)
		if (f.sp->formals[k].mode != Mode::Out)
			in[k] = read_var_target(ctx, call.args[k], st);

	for (auto id : ix.local_vars[static_cast<std::size_t>(f.id)])
		st.var[static_cast<std::size_t>(id)] = ix.vars[static_cast<std::size_t>(id)].init;

	Writer w{ctx, st, call.callee, false};
	for (std::size_t k = 0; k < call.args.size(); ++k)
		if (in[k])
			w.assign(var_target(ix, f.sp->formals[k].var), *in[k], false);

	++ctx.call_depth;
	bool outer_returning = ctx.returning;
	auto outer_ret = std::move(ctx.ret);
	auto outer_next = st.next_flag, outer_exit = st.exit_flag;
	ctx.returning = false;
	ctx.ret.reset();
	st.next_flag = {};
	st.exit_flag = {};

	exec_stmt_list(ctx, f.sp->body, st);

	std::optional<Val> result = std::move(ctx.ret);
	st.next_flag = outer_next;
	st.exit_flag = outer_exit;
	ctx.returning = outer_returning;
	ctx.ret = std::move(outer_ret);
	--ctx.call_depth;
	return result;
}

} // namespace

Val eval_expr(const ExecCtx &ctx, const Expression &e, const SimState &st) {
	switch (e.kind) {
	case ExprKind::Sig:
	case ExprKind::Prt:
		if (e.slot >= 0)
			return read_leaf_sig(ctx, e.slot, st);
		if (e.group >= 0)
			return read_sig_group(ctx, e.group, st);
		fail(ErrorKind::Eval, "unknown signal or port " + e.name);
	case ExprKind::Var:
		if (e.slot >= 0)
			return st.var[static_cast<std::size_t>(e.slot)];
		if (e.group >= 0)
			return read_var_group(ctx, e.group, st);
		fail(ErrorKind::Eval, "unknown variable " + e.name);
	case ExprKind::Con: return e.value;
	case ExprKind::Unary: return eval_unop(e.op, eval_expr(ctx, e.args[0], st));
	case ExprKind::Logical:
	case ExprKind::Relational:
	case ExprKind::Shift:
	case ExprKind::Arith:
		return eval_binop(e.op, eval_expr(ctx, e.args[0], st), eval_expr(ctx, e.args[1], st));
	case ExprKind::Nth: return vec_nth(eval_expr(ctx, e.args[0], st), eval_int(ctx, e.args[1], st, "index"));
	case ExprKind::Slice:
		return vec_slice(eval_expr(ctx, e.args[0], st), eval_int(ctx, e.args[1], st, "slice start"),
				eval_int(ctx, e.args[2], st, "slice length"));
	case ExprKind::ToList: return to_vector(eval_expr(ctx, e.args[0], st), false);
	case ExprKind::ToRevList: return to_vector(eval_expr(ctx, e.args[0], st), true);
	case ExprKind::Record: {
		std::vector<Val> ms;
		ms.reserve(e.args.size());
		for (const auto &a : e.args)
			ms.push_back(eval_expr(ctx, a, st));
		return Val::record(e.fields, std::move(ms));
	}
	}
	fail(ErrorKind::Eval, "malformed expression");
}

void exec_stmt_list(ExecCtx &ctx, const std::vector<SeqStmt> &ss, SimState &st) {
	for (const auto &s : ss) {
		if (st.next_flag.raised || st.exit_flag.raised || ctx.returning)
			return;
		exec_stmt(ctx, s, st);
	}
}

void exec_stmt(ExecCtx &ctx, const SeqStmt &s, SimState &st) {
	switch (s.kind) {
	case StmtKind::SignalAssign: {
		Writer w{ctx, st, s.name, true};
		w.assign(s.target, eval_expr(ctx, s.rhs.expr, st), s.rhs.others);
		break;
	}
	case StmtKind::VarAssign: {
		Writer w{ctx, st, s.name, false};
		w.assign(s.target, eval_expr(ctx, s.rhs.expr, st), s.rhs.others);
		break;
	}
	case StmtKind::If: exec_if(ctx, s, st); break;
	case StmtKind::Loop: exec_loop_stmt(ctx, s, st); break;
	case StmtKind::FnCall: exec_fn_call(ctx, s.target, s.call, st); break;
	case StmtKind::ProcCall: exec_proc_call(ctx, s.call, st); break;
	case StmtKind::Return:
		if (ctx.call_depth == 0)
			fail(ErrorKind::Eval, "return outside a function in process " + proc_name(ctx));
		ctx.ret = eval_expr(ctx, s.rhs.expr, st);
		ctx.returning = true;
		break;
	case StmtKind::Next: exec_next(ctx, s, st); break;
	case StmtKind::Exit: exec_exit(ctx, s, st); break;
	case StmtKind::Null: break;
	}
}

void exec_signal_assign(ExecCtx &ctx, const Target &t, const AsmtRhs &rhs, SimState &st) {
	Writer w{ctx, st, t.name, true};
	w.assign(t, eval_expr(ctx, rhs.expr, st), rhs.others);
}

void exec_var_assign(ExecCtx &ctx, const Target &t, const AsmtRhs &rhs, SimState &st) {
	Writer w{ctx, st, t.name, false};
	w.assign(t, eval_expr(ctx, rhs.expr, st), rhs.others);
}

void exec_if(ExecCtx &ctx, const SeqStmt &s, SimState &st) {
	if (eval_cond(ctx, s.cond, st))
		exec_stmt_list(ctx, s.body, st);
	else
		exec_stmt_list(ctx, s.else_body, st);
}

void exec_loop_stmt(ExecCtx &ctx, const SeqStmt &s, SimState &st) {
	for (;;) {
		if (st.exit_flag.raised) {
			if (st.exit_flag.name == s.name)
				st.exit_flag = {};
			return;
		}
		if (st.next_flag.raised) {
			if (st.next_flag.name != s.name)
				return;
			st.next_flag = {};
		}
		if (ctx.returning)
			return;
		// rec_loop
		if (!eval_cond(ctx, s.cond, st))
			return;
		if (ctx.budget_left <= 0)
			fail(ErrorKind::LoopBudget, "loop budget exceeded in loop " + s.name + " of process " + proc_name(ctx) +
					" (" + std::to_string(ctx.loop_budget) + " iterations)");
		--ctx.budget_left;
		exec_stmt_list(ctx, s.body, st);
	}
}

void exec_next(ExecCtx &ctx, const SeqStmt &s, SimState &st) {
	if (eval_cond(ctx, s.cond, st))
		st.next_flag = {s.loop, true};
}

void exec_exit(ExecCtx &ctx, const SeqStmt &s, SimState &st) {
	if (eval_cond(ctx, s.cond, st))
		st.exit_flag = {s.loop, true};
}

void exec_fn_call(ExecCtx &ctx, const Target &t, const SubProgCall &call, SimState &st) {
	CallFrame f = lookup(ctx, call, SubKind::Function);
	Snapshot snap(ctx.d.idx().owned_vars[static_cast<std::size_t>(f.id)], st);
	auto result = run_body(ctx, f, call, st);
	if (!result)
		fail(ErrorKind::Eval, "function " + call.callee + " ended without a return statement");
	if (f.sp->ret_type)
		*result = conform(*result, *f.sp->ret_type, "result of " + call.callee);
	// Restore before assigning: the target may itself be one of the callee's
	// variables when calls nest.
	snap.restore(st);
	Writer w{ctx, st, call.callee, false};
	w.assign(t, *result, false);
}

void exec_proc_call(ExecCtx &ctx, const SubProgCall &call, SimState &st) {
	CallFrame f = lookup(ctx, call, SubKind::Procedure);
	const auto &ix = ctx.d.idx();
	Snapshot snap(ix.owned_vars[static_cast<std::size_t>(f.id)], st);
	run_body(ctx, f, call, st);
	std::vector<std::optional<Val>> out(call.args.size());
	for (std::size_t k = 0; k < call.args.size(); ++k)
		if (f.sp->formals[k].mode != Mode::In)
			out[k] = read_var_target(ctx, var_target(ix, f.sp->formals[k].var), st);
	snap.restore(st);
	Writer w{ctx, st, call.callee, false};
	for (std::size_t k = 0; k < call.args.size(); ++k)
		if (out[k])
			w.assign(call.args[k], *out[k], false);
}

void exec_process(const Design &d, std::int32_t proc, SimState &st, std::int64_t loop_budget, std::ostream *trace) {
	ExecCtx ctx(d, proc, loop_budget);
	ctx.trace = trace;
	exec_stmt_list(ctx, d.processes[static_cast<std::size_t>(proc)].body, st);
	st.next_flag = {};
	st.exit_flag = {};
}

} // namespace vhdlkern
