#include "vhdlkern/desugar.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "vhdlkern/error.hpp"

namespace vhdlkern {

// --- constructors -----------------------------------------------------------

CSeqStmt from_core(const SeqStmt &s) {
	CSeqStmt c;
	c.name = s.name;
	c.target = s.target;
	c.rhs = s.rhs;
	c.cond = s.cond;
	c.call = s.call;
	c.loop = s.loop;
	for (const auto &b : s.body)
		c.body.push_back(from_core(b));
	for (const auto &b : s.else_body)
		c.else_body.push_back(from_core(b));
	switch (s.kind) {
	case StmtKind::SignalAssign: c.kind = CStmtKind::SignalAssign; break;
	case StmtKind::VarAssign: c.kind = CStmtKind::VarAssign; break;
	case StmtKind::If: c.kind = CStmtKind::If; break;
	case StmtKind::Loop: c.kind = CStmtKind::Loop; break;
	case StmtKind::FnCall: c.kind = CStmtKind::FnCall; break;
	case StmtKind::Return: c.kind = CStmtKind::Return; break;
	case StmtKind::ProcCall: c.kind = CStmtKind::ProcCall; break;
	case StmtKind::Next: c.kind = CStmtKind::Next; break;
	case StmtKind::Exit: c.kind = CStmtKind::Exit; break;
	case StmtKind::Null: c.kind = CStmtKind::Null; break;
	}
	return c;
}

CSeqStmt ssc_if(std::string name, Expression cond, std::vector<CSeqStmt> then_ss, std::vector<CElsif> elsifs,
		std::vector<CSeqStmt> else_ss) {
	CSeqStmt c;
	c.kind = CStmtKind::If;
	c.name = std::move(name);
	c.cond = std::move(cond);
	c.body = std::move(then_ss);
	c.elsifs = std::move(elsifs);
	c.else_body = std::move(else_ss);
	return c;
}

CSeqStmt ssc_case(std::string name, Expression selector, std::vector<CaseWhen> whens,
		std::optional<std::vector<CSeqStmt>> others) {
	CSeqStmt c;
	c.kind = CStmtKind::Case;
	c.name = std::move(name);
	c.selector = std::move(selector);
	c.whens = std::move(whens);
	if (others) {
		c.has_others = true;
		c.others = std::move(*others);
	}
	return c;
}

CSeqStmt ssc_for(std::string name, std::string var, DiscreteRange range, std::vector<CSeqStmt> body) {
	CSeqStmt c;
	c.kind = CStmtKind::For;
	c.name = std::move(name);
	c.var = std::move(var);
	c.range = std::move(range);
	c.body = std::move(body);
	return c;
}

CSeqStmt ssc_while(std::string name, Expression cond, std::vector<CSeqStmt> body) {
	CSeqStmt c;
	c.kind = CStmtKind::Loop;
	c.name = std::move(name);
	c.cond = std::move(cond);
	c.body = std::move(body);
	return c;
}

CConcStmt csc_ps(std::string name, std::vector<std::string> sensitivity, std::vector<CSeqStmt> body) {
	CConcStmt c;
	c.kind = CConcKind::Process;
	c.name = std::move(name);
	c.sensitivity = std::move(sensitivity);
	c.body = std::move(body);
	return c;
}

CConcStmt csc_ca(std::string name, Target target, std::vector<AsWhen> whens, std::optional<AsmtRhs> else_rhs) {
	CConcStmt c;
	c.kind = CConcKind::CondAssign;
	c.name = std::move(name);
	c.target = std::move(target);
	c.whens = std::move(whens);
	c.else_rhs = std::move(else_rhs);
	return c;
}

CConcStmt csc_for_gen(std::string name, std::string var, DiscreteRange range, std::vector<CConcStmt> body) {
	CConcStmt c;
	c.kind = CConcKind::Generate;
	c.for_gen = true;
	c.name = std::move(name);
	c.var = std::move(var);
	c.range = std::move(range);
	c.gen_body = std::move(body);
	return c;
}

CConcStmt csc_if_gen(std::string name, Expression cond, std::vector<CConcStmt> body) {
	CConcStmt c;
	c.kind = CConcKind::Generate;
	c.name = std::move(name);
	c.cond = std::move(cond);
	c.gen_body = std::move(body);
	return c;
}

// --- substitution -------------------------------------------------------------

namespace {

// Applies f to every expression position of a statement tree.
using ExprFn = std::function<void(Expression &)>;

void walk_target(Target &t, const ExprFn &f) {
	if (t.range) {
		f(t.range->lo);
		f(t.range->hi);
	}
}

void walk(SeqStmt &s, const ExprFn &f) {
	walk_target(s.target, f);
	f(s.rhs.expr);
	f(s.cond);
	for (auto &a : s.call.args)
		walk_target(a, f);
	for (auto &b : s.body)
		walk(b, f);
	for (auto &b : s.else_body)
		walk(b, f);
}

void walk(CSeqStmt &s, const ExprFn &f) {
	walk_target(s.target, f);
	f(s.rhs.expr);
	f(s.cond);
	f(s.selector);
	f(s.range.lo);
	f(s.range.hi);
	for (auto &a : s.call.args)
		walk_target(a, f);
	for (auto &b : s.body)
		walk(b, f);
	for (auto &e : s.elsifs) {
		f(e.cond);
		for (auto &b : e.body)
			walk(b, f);
	}
	for (auto &b : s.else_body)
		walk(b, f);
	for (auto &w : s.whens) {
		for (auto &c : w.choices) {
			f(c.value);
			if (c.hi)
				f(*c.hi);
		}
		for (auto &b : w.body)
			walk(b, f);
	}
	for (auto &b : s.others)
		walk(b, f);
}

void walk(CConcStmt &c, const ExprFn &f) {
	for (auto &b : c.body)
		walk(b, f);
	walk_target(c.target, f);
	for (auto &w : c.whens) {
		f(w.rhs.expr);
		f(w.cond);
	}
	if (c.else_rhs)
		f(c.else_rhs->expr);
	f(c.range.lo);
	f(c.range.hi);
	f(c.cond);
	for (auto &g : c.gen_body)
		walk(g, f);
}

ExprFn substituter(const std::string &var, const Val &lit) {
	return [&var, &lit](Expression &e) { e = subst(e, var, lit); };
}

} // namespace

Expression subst(const Expression &e, const std::string &var, const Val &lit) {
	if (e.kind == ExprKind::Var && e.name == var)
		return exp_con(lit);
	Expression r = e;
	for (auto &a : r.args)
		a = subst(a, var, lit);
	return r;
}

SeqStmt subst(const SeqStmt &s, const std::string &var, const Val &lit) {
	SeqStmt r = s;
	walk(r, substituter(var, lit));
	return r;
}

ConcStmt subst(const ConcStmt &c, const std::string &var, const Val &lit) {
	ConcStmt r = c;
	for (auto &s : r.body)
		walk(s, substituter(var, lit));
	return r;
}

CSeqStmt subst(const CSeqStmt &s, const std::string &var, const Val &lit) {
	CSeqStmt r = s;
	walk(r, substituter(var, lit));
	return r;
}

CConcStmt subst(const CConcStmt &c, const std::string &var, const Val &lit) {
	CConcStmt r = c;
	walk(r, substituter(var, lit));
	return r;
}

std::optional<Val> const_eval(const Expression &e) {
	std::vector<Val> a;
	for (const auto &x : e.args) {
		auto v = const_eval(x);
		if (!v)
			return std::nullopt;
		a.push_back(std::move(*v));
	}
	try {
		switch (e.kind) {
		case ExprKind::Con: return e.value;
		case ExprKind::Unary: return eval_unop(e.op, a[0]);
		case ExprKind::Logical:
		case ExprKind::Relational:
		case ExprKind::Shift:
		case ExprKind::Arith: return eval_binop(e.op, a[0], a[1]);
		case ExprKind::Nth: return vec_nth(a[0], a[1].as_int());
		case ExprKind::Slice: return vec_slice(a[0], a[1].as_int(), a[2].as_int());
		case ExprKind::ToList: return to_vector(a[0], false);
		case ExprKind::ToRevList: return to_vector(a[0], true);
		case ExprKind::Record: return Val::record(e.fields, std::move(a));
		default: return std::nullopt;
		}
	} catch (const SimError &) {
		return std::nullopt;
	}
}

// --- lowering -----------------------------------------------------------------

void Lowering::error(std::string msg) {
	Diagnostic d;
	d.message = std::move(msg);
	diags_.push_back(std::move(d));
}

void Lowering::declare_int(const std::string &name) {
	if (std::find(declared_.begin(), declared_.end(), name) != declared_.end())
		return;
	declared_.push_back(name);
	VarTree v;
	v.name = name;
	v.leaf = VarDecl{name, TypeDesc::scalar_of(ScalarKind::Integer), Val::integer(0)};
	vars_.push_back(std::move(v));
}

std::vector<SeqStmt> Lowering::lower_seq_list(const std::vector<CSeqStmt> &ss) {
	std::vector<SeqStmt> out;
	for (const auto &s : ss) {
		auto l = lower_seq(s);
		out.insert(out.end(), std::make_move_iterator(l.begin()), std::make_move_iterator(l.end()));
	}
	return out;
}

namespace {

Expression choice_test(const Expression &sel, const CaseChoice &c) {
	if (!c.hi)
		return bexpr(sel, Op::Eq, c.value);
	return bexpl(bexpr(sel, Op::Ge, c.value), Op::And, bexpr(sel, Op::Le, *c.hi));
}

Expression one(std::int64_t v) { return exp_con(Val::integer(v)); }

} // namespace

std::vector<SeqStmt> Lowering::lower_seq(const CSeqStmt &s) {
	switch (s.kind) {
	case CStmtKind::SignalAssign: return {sst_sa(s.name, s.target, s.rhs)};
	case CStmtKind::VarAssign: return {sst_va(s.name, s.target, s.rhs)};
	case CStmtKind::FnCall: return {sst_fn(s.name, s.target, s.call)};
	case CStmtKind::Return: return {sst_rt(s.name, s.rhs)};
	case CStmtKind::ProcCall: return {sst_pc(s.name, s.call)};
	case CStmtKind::Next: return {sst_n(s.name, s.loop, s.cond)};
	case CStmtKind::Exit: return {sst_e(s.name, s.loop, s.cond)};
	case CStmtKind::Null: return {sst_nl()};
	case CStmtKind::Loop: return {sst_l(s.name, s.cond, lower_seq_list(s.body))};
	case CStmtKind::If: {
		// Fold elsifs right to left into else branches.
		std::vector<SeqStmt> tail = lower_seq_list(s.else_body);
		for (auto it = s.elsifs.rbegin(); it != s.elsifs.rend(); ++it) {
			std::vector<SeqStmt> nested;
			nested.push_back(sst_if(s.name, it->cond, lower_seq_list(it->body), std::move(tail)));
			tail = std::move(nested);
		}
		return {sst_if(s.name, s.cond, lower_seq_list(s.body), std::move(tail))};
	}
	case CStmtKind::Case: {
		std::vector<Val> seen;
		for (const auto &w : s.whens) {
			for (const auto &c : w.choices) {
				if (c.hi)
					continue;
				if (auto v = const_eval(c.value)) {
					if (std::find(seen.begin(), seen.end(), *v) != seen.end())
						error("case " + s.name + ": duplicate choice " + to_string(*v));
					seen.push_back(*v);
				}
			}
		}
		// No others: the final else is an explicit null.
		std::vector<SeqStmt> tail = s.has_others ? lower_seq_list(s.others) : std::vector<SeqStmt>{sst_nl()};
		for (auto it = s.whens.rbegin(); it != s.whens.rend(); ++it) {
			if (it->choices.empty())
				continue;
			Expression test = choice_test(s.selector, it->choices[0]);
			for (std::size_t k = 1; k < it->choices.size(); ++k)
				test = bexpl(std::move(test), Op::Or, choice_test(s.selector, it->choices[k]));
			std::vector<SeqStmt> nested;
			nested.push_back(sst_if(s.name, std::move(test), lower_seq_list(it->body), std::move(tail)));
			tail = std::move(nested);
		}
		if (tail.empty())
			tail.push_back(sst_nl());
		return tail;
	}
	case CStmtKind::For: {
		// counter := first - 1; while counter < last loop counter := counter + 1;
		// body. Incrementing first keeps `next` from skipping the step.
		declare_int(s.var);
		bool down = s.range.downto;
		Expression first = down ? s.range.hi : s.range.lo;
		Expression last = down ? s.range.lo : s.range.hi;
		std::vector<SeqStmt> out;
		if (!const_eval(last)) {
			std::string end = s.name + "__end";
			declare_int(end);
			out.push_back(sst_va(s.name, lhs(end), rhs_e(last)));
			last = exp_var(end);
		}
		Op step = down ? Op::Sub : Op::Add;
		Op back = down ? Op::Add : Op::Sub;
		out.push_back(sst_va(s.name, lhs(s.var), rhs_e(bexpa(first, back, one(1)))));
		std::vector<SeqStmt> body;
		body.push_back(sst_va(s.name, lhs(s.var), rhs_e(bexpa(exp_var(s.var), step, one(1)))));
		auto rest = lower_seq_list(s.body);
		body.insert(body.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
		out.push_back(sst_l(s.name, bexpr(exp_var(s.var), down ? Op::Gt : Op::Lt, last), std::move(body)));
		return out;
	}
	}
	return {};
}

namespace {

void reads_of(const Expression &e, std::vector<std::string> &sigs) {
	std::vector<std::string> vars;
	collect_reads(e, sigs, vars);
}

void reads_of_target(const Target &t, std::vector<std::string> &sigs) {
	if (t.range) {
		reads_of(t.range->lo, sigs);
		reads_of(t.range->hi, sigs);
	}
}

std::vector<std::string> uniq(std::vector<std::string> v) {
	std::vector<std::string> out;
	for (auto &s : v)
		if (std::find(out.begin(), out.end(), s) == out.end())
			out.push_back(std::move(s));
	return out;
}

} // namespace

ConcStmt Lowering::lower_conc_assign(const CConcStmt &c) {
	std::vector<std::string> all, conds;
	for (const auto &w : c.whens) {
		reads_of(w.rhs.expr, all);
		reads_of(w.cond, all);
		reads_of(w.cond, conds);
	}
	if (c.else_rhs)
		reads_of(c.else_rhs->expr, all);
	reads_of_target(c.target, all);

	std::vector<SeqStmt> tail;
	if (c.else_rhs)
		tail.push_back(sst_sa(c.name, c.target, *c.else_rhs));
	for (auto it = c.whens.rbegin(); it != c.whens.rend(); ++it) {
		std::vector<SeqStmt> then_ss;
		then_ss.push_back(sst_sa(c.name, c.target, it->rhs));
		std::vector<SeqStmt> nested;
		nested.push_back(sst_if(c.name, it->cond, std::move(then_ss), std::move(tail)));
		tail = std::move(nested);
	}
	std::vector<std::string> sens = opt_.paper_sensitivity && !conds.empty() ? conds : all;
	return ConcStmt{c.name, uniq(std::move(sens)), std::move(tail)};
}

namespace {

// Renames variables owned by process `from` ("from.x") to "to.x".
void rename_owned(Expression &e, const std::string &from, const std::string &to) {
	if (e.kind == ExprKind::Var && e.name.rfind(from + ".", 0) == 0)
		e.name = to + e.name.substr(from.size());
	for (auto &a : e.args)
		rename_owned(a, from, to);
}

void rename_target(Target &t, const std::string &from, const std::string &to) {
	if (t.name.rfind(from + ".", 0) == 0)
		t.name = to + t.name.substr(from.size());
}

void rename_stmt(CSeqStmt &s, const std::string &from, const std::string &to) {
	walk(s, [&](Expression &e) { rename_owned(e, from, to); });
	std::function<void(CSeqStmt &)> names = [&](CSeqStmt &x) {
		if (x.kind == CStmtKind::VarAssign || x.kind == CStmtKind::FnCall)
			rename_target(x.target, from, to);
		for (auto &a : x.call.args)
			rename_target(a, from, to);
		if (x.var.rfind(from + ".", 0) == 0)
			x.var = to + x.var.substr(from.size());
		// loop labels are qualified by the process name too
		if (x.name.rfind(from + ".", 0) == 0)
			x.name = to + x.name.substr(from.size());
		if (x.loop.rfind(from + ".", 0) == 0)
			x.loop = to + x.loop.substr(from.size());
		for (auto &b : x.body)
			names(b);
		for (auto &e : x.elsifs)
			for (auto &b : e.body)
				names(b);
		for (auto &b : x.else_body)
			names(b);
		for (auto &w : x.whens)
			for (auto &b : w.body)
				names(b);
		for (auto &b : x.others)
			names(b);
	};
	names(s);
}

VarTree rename_tree(VarTree t, const std::string &from, const std::string &to) {
	if (t.name.rfind(from + ".", 0) == 0)
		t.name = to + t.name.substr(from.size());
	if (t.leaf)
		t.leaf->name = t.name;
	for (auto &m : t.members)
		m = rename_tree(std::move(m), from, to);
	return t;
}

} // namespace

std::vector<ConcStmt> Lowering::lower_conc(const CConcStmt &c, const Environment &env) {
	switch (c.kind) {
	case CConcKind::Process: return {ConcStmt{c.name, c.sensitivity, lower_seq_list(c.body)}};
	case CConcKind::CondAssign: return {lower_conc_assign(c)};
	case CConcKind::Generate: return lower_generate(c, env);
	}
	return {};
}

std::vector<ConcStmt> Lowering::lower_generate(const CConcStmt &c, const Environment &env) {
	std::vector<ConcStmt> out;
	if (!c.for_gen) {
		auto v = const_eval(c.cond);
		if (!v || !v->is_scalar() || v->scalar_kind() != ScalarKind::Boolean) {
			error("generate " + c.name + ": condition is not a constant boolean");
			return out;
		}
		if (!v->as_bool())
			return out;
		for (const auto &b : c.gen_body) {
			auto l = lower_conc(b, env);
			out.insert(out.end(), l.begin(), l.end());
		}
		return out;
	}
	auto lo = const_eval(c.range.lo), hi = const_eval(c.range.hi);
	if (!lo || !hi || !lo->is_scalar() || !hi->is_scalar() || lo->scalar_kind() != ScalarKind::Integer ||
			hi->scalar_kind() != ScalarKind::Integer) {
		error("generate " + c.name + ": range bounds are not constant integers");
		return out;
	}
	std::vector<std::int64_t> iters;
	for (std::int64_t k = lo->as_int(); k <= hi->as_int(); ++k)
		iters.push_back(k);
	if (c.range.downto)
		std::reverse(iters.begin(), iters.end());
	for (auto k : iters) {
		Val lit = Val::integer(k);
		std::string suffix = "_" + std::to_string(k);
		for (const auto &b : c.gen_body) {
			CConcStmt copy = subst(b, c.var, lit);
			std::function<void(CConcStmt &)> rename = [&](CConcStmt &x) {
				std::string from = x.name;
				x.name += suffix;
				if (x.kind == CConcKind::Process) {
					for (auto &s : x.body)
						rename_stmt(s, from, x.name);
					for (const auto &t : env.variables) {
						if (t.name.rfind(from + ".", 0) == 0) {
							vars_.push_back(rename_tree(t, from, x.name));
							retired_.insert(t.name);
						}
					}
				}
				for (auto &g : x.gen_body)
					rename(g);
			};
			rename(copy);
			auto l = lower_conc(copy, env);
			out.insert(out.end(), l.begin(), l.end());
		}
	}
	return out;
}

Design lower_design(const ComplexDesign &cd, std::vector<Diagnostic> &diags, LowerOptions opt) {
	Lowering lw(opt);
	Design d;
	d.name = cd.name;
	d.env = cd.env;
	d.res_fn = cd.res_fn;
	d.components = cd.components;
	for (const auto &c : cd.processes) {
		auto l = lw.lower_conc(c, cd.env);
		d.processes.insert(d.processes.end(), l.begin(), l.end());
	}
	for (const auto &sp : cd.subprograms)
		d.subprograms.push_back(Subprogram{sp.name, sp.kind, sp.formals, sp.locals, sp.ret_type, lw.lower_seq_list(sp.body)});

	// Variables of generate templates are replaced by their per-copy clones.
	auto &vars = d.env.variables;
	vars.erase(std::remove_if(vars.begin(), vars.end(), [&](const VarTree &t) { return lw.retired().count(t.name) > 0; }),
			vars.end());
	for (const auto &v : lw.new_variables()) {
		bool exists = std::any_of(vars.begin(), vars.end(), [&](const VarTree &t) { return t.name == v.name; });
		if (!exists)
			vars.push_back(v);
	}
	// Loop counters of subprograms belong to them.
	for (auto &sp : d.subprograms) {
		for (const auto &v : lw.new_variables()) {
			if (v.name.rfind(sp.name + ".", 0) == 0 &&
					std::find(sp.locals.begin(), sp.locals.end(), v.name) == sp.locals.end())
				sp.locals.push_back(v.name);
		}
	}
	diags.insert(diags.end(), lw.diagnostics().begin(), lw.diagnostics().end());
	if (!has_errors(lw.diagnostics()))
		link(d);
	return d;
}

} // namespace vhdlkern
