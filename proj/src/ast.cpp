#include "vhdlkern/ast.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "vhdlkern/error.hpp"

namespace vhdlkern {

// --- constructors -----------------------------------------------------------

Expression uexp(Op op, Expression e, Numeric n, std::int64_t width) {
	Expression r;
	r.kind = ExprKind::Unary;
	r.op = make_op(op, n, width);
	r.args.push_back(std::move(e));
	return r;
}

Expression bexp(Expression a, Op op, Expression b, Numeric n) {
	Expression r;
	switch (class_of(op)) {
	case OpClass::Logical: r.kind = ExprKind::Logical; break;
	case OpClass::Relational: r.kind = ExprKind::Relational; break;
	case OpClass::Shift: r.kind = ExprKind::Shift; break;
	default: r.kind = ExprKind::Arith; break;
	}
	r.op = make_op(op, n);
	r.args.push_back(std::move(a));
	r.args.push_back(std::move(b));
	return r;
}

namespace {
Expression named(ExprKind k, std::string name) {
	Expression r;
	r.kind = k;
	r.name = std::move(name);
	return r;
}

Expression wrap(ExprKind k, std::vector<Expression> args) {
	Expression r;
	r.kind = k;
	r.args = std::move(args);
	return r;
}
} // namespace

Expression exp_sig(std::string name) { return named(ExprKind::Sig, std::move(name)); }
Expression exp_prt(std::string name) { return named(ExprKind::Prt, std::move(name)); }
Expression exp_var(std::string name) { return named(ExprKind::Var, std::move(name)); }

Expression exp_con(Val v) {
	Expression r;
	r.kind = ExprKind::Con;
	r.value = std::move(v);
	return r;
}

Expression exp_nth(Expression v, Expression i) {
	std::vector<Expression> a;
	a.push_back(std::move(v));
	a.push_back(std::move(i));
	return wrap(ExprKind::Nth, std::move(a));
}

Expression exp_sl(Expression v, Expression start, Expression len) {
	std::vector<Expression> a;
	a.push_back(std::move(v));
	a.push_back(std::move(start));
	a.push_back(std::move(len));
	return wrap(ExprKind::Slice, std::move(a));
}

Expression exp_tl(Expression e) {
	std::vector<Expression> a;
	a.push_back(std::move(e));
	return wrap(ExprKind::ToList, std::move(a));
}

Expression exp_trl(Expression e) {
	std::vector<Expression> a;
	a.push_back(std::move(e));
	return wrap(ExprKind::ToRevList, std::move(a));
}

Expression exp_r(std::vector<std::string> fields, std::vector<Expression> members) {
	Expression r = wrap(ExprKind::Record, std::move(members));
	r.fields = std::move(fields);
	return r;
}

std::string_view mode_name(Mode m) {
	switch (m) {
	case Mode::In: return "in";
	case Mode::Out: return "out";
	case Mode::Inout: return "inout";
	case Mode::Internal: return "internal";
	}
	return "?";
}

Spl spl_leaf(SigPrt sp) {
	Spl s;
	s.name = sp.name;
	s.leaf = std::move(sp);
	return s;
}

Spl spnl(std::string name, std::vector<Spl> members) {
	Spl s;
	s.name = std::move(name);
	s.members = std::move(members);
	return s;
}

namespace {
template <class Leaf>
void flatten_into(const NameTree<Leaf> &t, std::vector<Leaf> &out) {
	if (t.is_leaf()) {
		out.push_back(*t.leaf);
		return;
	}
	for (const auto &m : t.members)
		flatten_into(m, out);
}
} // namespace

std::vector<SigPrt> flatten_spl(const Spl &s) {
	std::vector<SigPrt> out;
	flatten_into(s, out);
	return out;
}

std::vector<VarDecl> flatten_vars(const VarTree &t) {
	std::vector<VarDecl> out;
	flatten_into(t, out);
	return out;
}

std::string_view field_of(std::string_view qualified) {
	auto p = qualified.rfind('.');
	return p == std::string_view::npos ? qualified : qualified.substr(p + 1);
}

const Spl &record_field(const Spl &s, const std::vector<std::string> &path) {
	const Spl *cur = &s;
	for (const auto &f : path) {
		const Spl *next = nullptr;
		for (const auto &m : cur->members) {
			if (field_of(m.name) == f) {
				next = &m;
				break;
			}
		}
		if (!next)
			fail(ErrorKind::Config, "no field \"" + f + "\" in record " + cur->name);
		cur = next;
	}
	return *cur;
}

SeqStmt sst_sa(std::string name, Target l, AsmtRhs rhs) {
	SeqStmt s;
	s.kind = StmtKind::SignalAssign;
	s.name = std::move(name);
	s.target = std::move(l);
	s.rhs = std::move(rhs);
	return s;
}

SeqStmt sst_va(std::string name, Target l, AsmtRhs rhs) {
	SeqStmt s = sst_sa(std::move(name), std::move(l), std::move(rhs));
	s.kind = StmtKind::VarAssign;
	return s;
}

SeqStmt sst_if(std::string name, Expression cond, std::vector<SeqStmt> then_ss, std::vector<SeqStmt> else_ss) {
	SeqStmt s;
	s.kind = StmtKind::If;
	s.name = std::move(name);
	s.cond = std::move(cond);
	s.body = std::move(then_ss);
	s.else_body = std::move(else_ss);
	return s;
}

SeqStmt sst_l(std::string name, Expression cond, std::vector<SeqStmt> body) {
	SeqStmt s;
	s.kind = StmtKind::Loop;
	s.name = std::move(name);
	s.cond = std::move(cond);
	s.body = std::move(body);
	return s;
}

SeqStmt sst_fn(std::string name, Target l, SubProgCall call) {
	SeqStmt s;
	s.kind = StmtKind::FnCall;
	s.name = std::move(name);
	s.target = std::move(l);
	s.call = std::move(call);
	return s;
}

SeqStmt sst_rt(std::string name, AsmtRhs rhs) {
	SeqStmt s;
	s.kind = StmtKind::Return;
	s.name = std::move(name);
	s.rhs = std::move(rhs);
	return s;
}

SeqStmt sst_pc(std::string name, SubProgCall call) {
	SeqStmt s;
	s.kind = StmtKind::ProcCall;
	s.name = std::move(name);
	s.call = std::move(call);
	return s;
}

SeqStmt sst_n(std::string name, std::string loop, Expression cond) {
	SeqStmt s;
	s.kind = StmtKind::Next;
	s.name = std::move(name);
	s.loop = std::move(loop);
	s.cond = std::move(cond);
	return s;
}

SeqStmt sst_e(std::string name, std::string loop, Expression cond) {
	SeqStmt s = sst_n(std::move(name), std::move(loop), std::move(cond));
	s.kind = StmtKind::Exit;
	return s;
}

SeqStmt sst_nl() { return SeqStmt{}; }

Target lhs(std::string name) {
	Target t;
	t.name = std::move(name);
	return t;
}

Target lhs_range(std::string name, Expression lo, Expression hi, bool downto) {
	Target t;
	t.name = std::move(name);
	t.range = DiscreteRange{std::move(lo), std::move(hi), downto};
	return t;
}

// --- index ------------------------------------------------------------------

const DesignIndex &Design::idx() const {
	if (!index.ptr)
		fail(ErrorKind::Config, "design \"" + name + "\" used before link()");
	return *index.ptr;
}

std::int32_t DesignIndex::leaf(const std::string &n) const {
	auto it = leaf_by_name.find(n);
	return it == leaf_by_name.end() ? -1 : it->second;
}

std::int32_t DesignIndex::var(const std::string &n) const {
	auto it = var_by_name.find(n);
	return it == var_by_name.end() ? -1 : it->second;
}

namespace {

template <class Leaf>
DesignIndex::Member index_tree(const NameTree<Leaf> &t, std::vector<Leaf> &leaves,
		std::unordered_map<std::string, std::int32_t> &leaf_by_name, std::vector<DesignIndex::Group> &groups,
		std::unordered_map<std::string, std::int32_t> &group_by_name) {
	if (t.is_leaf()) {
		auto id = static_cast<std::int32_t>(leaves.size());
		leaves.push_back(*t.leaf);
		leaf_by_name.emplace(t.leaf->name, id);
		return {true, id};
	}
	DesignIndex::Group g;
	g.name = t.name;
	for (const auto &m : t.members) {
		g.field_names.emplace_back(field_of(m.name));
		g.members.push_back(index_tree(m, leaves, leaf_by_name, groups, group_by_name));
	}
	auto gid = static_cast<std::int32_t>(groups.size());
	group_by_name.emplace(t.name, gid);
	groups.push_back(std::move(g));
	return {false, gid};
}

void collect_group_leaves(const std::vector<DesignIndex::Group> &groups, std::int32_t g,
		std::vector<std::int32_t> &out) {
	for (const auto &m : groups[static_cast<std::size_t>(g)].members) {
		if (m.is_leaf)
			out.push_back(m.id);
		else
			collect_group_leaves(groups, m.id, out);
	}
}

struct Linker {
	DesignIndex &ix;

	void sig(std::string_view n, std::int32_t &slot, std::int32_t &group) const {
		std::string s(n);
		auto it = ix.leaf_by_name.find(s);
		slot = it == ix.leaf_by_name.end() ? -1 : it->second;
		auto g = ix.sig_group_by_name.find(s);
		group = g == ix.sig_group_by_name.end() ? -1 : g->second;
	}

	void var(std::string_view n, std::int32_t &slot, std::int32_t &group) const {
		std::string s(n);
		auto it = ix.var_by_name.find(s);
		slot = it == ix.var_by_name.end() ? -1 : it->second;
		auto g = ix.var_group_by_name.find(s);
		group = g == ix.var_group_by_name.end() ? -1 : g->second;
	}

	void expr(Expression &e) const {
		switch (e.kind) {
		case ExprKind::Sig:
		case ExprKind::Prt: sig(e.name, e.slot, e.group); break;
		case ExprKind::Var: var(e.name, e.slot, e.group); break;
		default: break;
		}
		for (auto &a : e.args)
			expr(a);
	}

	void target(Target &t, bool is_signal) const {
		if (is_signal)
			sig(t.name, t.slot, t.group);
		else
			var(t.name, t.slot, t.group);
		if (t.range) {
			expr(t.range->lo);
			expr(t.range->hi);
		}
	}

	void stmts(std::vector<SeqStmt> &ss) const {
		for (auto &s : ss)
			stmt(s);
	}

	void stmt(SeqStmt &s) const {
		switch (s.kind) {
		case StmtKind::SignalAssign:
			target(s.target, true);
			expr(s.rhs.expr);
			break;
		case StmtKind::VarAssign:
			target(s.target, false);
			expr(s.rhs.expr);
			break;
		case StmtKind::If:
		case StmtKind::Loop:
			expr(s.cond);
			stmts(s.body);
			stmts(s.else_body);
			break;
		case StmtKind::FnCall:
			target(s.target, false);
			for (auto &a : s.call.args)
				target(a, false);
			break;
		case StmtKind::ProcCall:
			for (auto &a : s.call.args)
				target(a, false);
			break;
		case StmtKind::Return: expr(s.rhs.expr); break;
		case StmtKind::Next:
		case StmtKind::Exit: expr(s.cond); break;
		case StmtKind::Null: break;
		}
	}
};

// Signal leaves assigned by a statement list, following procedure calls.
void assigned_leaves(const Design &d, const std::vector<SeqStmt> &ss, std::set<std::int32_t> &out,
		std::set<std::string> &visiting) {
	const auto &ix = *d.index.ptr;
	for (const auto &s : ss) {
		switch (s.kind) {
		case StmtKind::SignalAssign:
			if (s.target.slot >= 0) {
				out.insert(s.target.slot);
			} else if (s.target.group >= 0) {
				std::vector<std::int32_t> ls;
				collect_group_leaves(ix.sig_groups, s.target.group, ls);
				out.insert(ls.begin(), ls.end());
			}
			break;
		case StmtKind::If:
		case StmtKind::Loop:
			assigned_leaves(d, s.body, out, visiting);
			assigned_leaves(d, s.else_body, out, visiting);
			break;
		case StmtKind::ProcCall:
		case StmtKind::FnCall: {
			auto it = ix.subprogram_by_name.find(s.call.callee);
			if (it != ix.subprogram_by_name.end() && visiting.insert(s.call.callee).second) {
				assigned_leaves(d, d.subprograms[static_cast<std::size_t>(it->second)].body, out, visiting);
				visiting.erase(s.call.callee);
			}
			break;
		}
		default: break;
		}
	}
}

} // namespace

void link(Design &d) {
	auto ix = std::make_shared<DesignIndex>();
	for (const auto &t : d.env.sigprts)
		index_tree(t, ix->leaves, ix->leaf_by_name, ix->sig_groups, ix->sig_group_by_name);
	for (const auto &t : d.env.variables)
		index_tree(t, ix->vars, ix->var_by_name, ix->var_groups, ix->var_group_by_name);

	for (std::size_t k = 0; k < d.processes.size(); ++k)
		ix->process_by_name.emplace(d.processes[k].name, static_cast<std::int32_t>(k));
	for (std::size_t k = 0; k < d.subprograms.size(); ++k)
		ix->subprogram_by_name.emplace(d.subprograms[k].name, static_cast<std::int32_t>(k));

	Linker lk{*ix};
	for (auto &p : d.processes)
		lk.stmts(p.body);
	for (auto &sp : d.subprograms)
		lk.stmts(sp.body);

	for (const auto &p : d.processes) {
		std::vector<std::int32_t> sens;
		for (const auto &n : p.sensitivity) {
			auto id = ix->leaf(n);
			if (id >= 0)
				sens.push_back(id);
		}
		ix->sensitivity.push_back(std::move(sens));
	}

	ix->resolved.assign(ix->leaves.size(), false);
	for (std::size_t k = 0; k < ix->leaves.size(); ++k)
		ix->resolved[k] = d.res_fn.count(ix->leaves[k].name) > 0;

	auto expand_vars = [&](const std::string &n, std::vector<std::int32_t> &out) {
		auto v = ix->var(n);
		if (v >= 0) {
			out.push_back(v);
			return;
		}
		auto g = ix->var_group_by_name.find(n);
		if (g != ix->var_group_by_name.end())
			collect_group_leaves(ix->var_groups, g->second, out);
	};
	for (const auto &sp : d.subprograms) {
		std::vector<std::int32_t> owned, locals;
		for (const auto &f : sp.formals)
			expand_vars(f.var, owned);
		for (const auto &l : sp.locals) {
			expand_vars(l, owned);
			expand_vars(l, locals);
		}
		ix->owned_vars.push_back(std::move(owned));
		ix->local_vars.push_back(std::move(locals));
	}

	d.index.ptr = ix;

	ix->drivers.assign(ix->leaves.size(), {});
	for (std::size_t p = 0; p < d.processes.size(); ++p) {
		std::set<std::int32_t> leaves;
		std::set<std::string> visiting;
		assigned_leaves(d, d.processes[p].body, leaves, visiting);
		for (auto l : leaves)
			ix->drivers[static_cast<std::size_t>(l)].push_back(static_cast<std::int32_t>(p));
	}
}

std::vector<SigPrt> all_sigprts(const Design &d) {
	std::vector<SigPrt> out;
	for (const auto &t : d.env.sigprts) {
		auto f = flatten_spl(t);
		out.insert(out.end(), f.begin(), f.end());
	}
	return out;
}

void collect_reads(const Expression &e, std::vector<std::string> &sigs, std::vector<std::string> &vars) {
	switch (e.kind) {
	case ExprKind::Sig:
	case ExprKind::Prt: sigs.push_back(e.name); break;
	case ExprKind::Var: vars.push_back(e.name); break;
	default: break;
	}
	for (const auto &a : e.args)
		collect_reads(a, sigs, vars);
}

// --- check_design -----------------------------------------------------------

namespace {

struct Shape {
	TypeDesc::Kind kind = TypeDesc::Kind::Scalar;
	ScalarKind scalar = ScalarKind::Integer;
	std::optional<std::int64_t> length;
	std::size_t fields = 0;
};

std::optional<Shape> shape_of_type(const TypeDesc &t) {
	Shape s;
	s.kind = t.kind;
	s.scalar = t.scalar;
	if (t.kind == TypeDesc::Kind::Vector)
		s.length = t.length();
	s.fields = t.fields.size();
	return s;
}

class Checker {
public:
	explicit Checker(const Design &d) : d_(d) {
		for (const auto &sp : all_sigprts(d))
			sigs_.emplace(sp.name, sp);
		for (const auto &t : d.env.sigprts)
			index_groups(t);
		for (const auto &t : d.env.variables) {
			for (const auto &v : flatten_vars(t))
				vars_.emplace(v.name, v);
			index_var_groups(t);
		}
		for (const auto &sp : d.subprograms)
			subs_.emplace(sp.name, &sp);
	}

	std::vector<Diagnostic> run() {
		std::set<std::string> seen;
		for (const auto &p : d_.processes) {
			if (!seen.insert(p.name).second)
				error("duplicate process name \"" + p.name + "\"");
			for (const auto &n : p.sensitivity) {
				if (!sigs_.count(n))
					error("process \"" + p.name + "\": sensitivity list names undeclared signal \"" + n + "\"");
			}
			where_ = "process \"" + p.name + "\"";
			loop_names_.clear();
			std::vector<std::string> loops;
			stmts(p.body, loops, false);
		}
		seen.clear();
		for (const auto &sp : d_.subprograms) {
			if (!seen.insert(sp.name).second)
				error("duplicate subprogram name \"" + sp.name + "\"");
			for (const auto &f : sp.formals)
				if (!vars_.count(f.var) && !var_groups_.count(f.var))
					error("subprogram \"" + sp.name + "\": formal \"" + f.var + "\" is not a declared variable");
			where_ = (sp.kind == SubKind::Function ? "function \"" : "procedure \"") + sp.name + "\"";
			loop_names_.clear();
			std::vector<std::string> loops;
			stmts(sp.body, loops, sp.kind == SubKind::Function);
			if (sp.kind == SubKind::Function && !terminates(sp.body))
				error(where_ + ": not every path ends in a return statement");
		}
		return std::move(diags_);
	}

private:
	void index_groups(const Spl &t) {
		if (t.is_leaf())
			return;
		sig_groups_.emplace(t.name, &t);
		for (const auto &m : t.members)
			index_groups(m);
	}

	void index_var_groups(const VarTree &t) {
		if (t.is_leaf())
			return;
		var_groups_.emplace(t.name, &t);
		for (const auto &m : t.members)
			index_var_groups(m);
	}

	void error(std::string msg) {
		Diagnostic dg;
		dg.message = d_.name.empty() ? std::move(msg) : "design \"" + d_.name + "\": " + msg;
		diags_.push_back(std::move(dg));
	}

	static bool terminates(const std::vector<SeqStmt> &ss) {
		for (const auto &s : ss) {
			if (s.kind == StmtKind::Return)
				return true;
			if (s.kind == StmtKind::If && terminates(s.body) && terminates(s.else_body))
				return true;
		}
		return false;
	}

	template <class Tree>
	static TypeDesc record_type(const Tree &t) {
		TypeDesc r;
		r.kind = TypeDesc::Kind::Record;
		for (const auto &m : t.members) {
			if (m.is_leaf())
				r.fields.emplace_back(std::string(field_of(m.name)), m.leaf->type);
			else
				r.fields.emplace_back(std::string(field_of(m.name)), record_type(m));
		}
		return r;
	}

	std::optional<TypeDesc> sig_type(const std::string &n) const {
		if (auto it = sigs_.find(n); it != sigs_.end())
			return it->second.type;
		if (auto it = sig_groups_.find(n); it != sig_groups_.end())
			return record_type(*it->second);
		return std::nullopt;
	}

	std::optional<TypeDesc> var_type(const std::string &n) const {
		if (auto it = vars_.find(n); it != vars_.end())
			return it->second.type;
		if (auto it = var_groups_.find(n); it != var_groups_.end())
			return record_type(*it->second);
		return std::nullopt;
	}

	// Best-effort static shape; nullopt when not determinable.
	std::optional<Shape> expr(const Expression &e) {
		std::vector<std::optional<Shape>> a;
		for (const auto &x : e.args)
			a.push_back(expr(x));
		switch (e.kind) {
		case ExprKind::Sig:
		case ExprKind::Prt: {
			auto t = sig_type(e.name);
			if (!t) {
				error(where_ + ": undeclared signal/port \"" + e.name + "\"");
				return std::nullopt;
			}
			return shape_of_type(*t);
		}
		case ExprKind::Var: {
			auto t = var_type(e.name);
			if (!t) {
				error(where_ + ": undeclared variable \"" + e.name + "\"");
				return std::nullopt;
			}
			return shape_of_type(*t);
		}
		case ExprKind::Con: {
			Shape s;
			if (e.value.is_scalar()) {
				s.scalar = e.value.scalar_kind();
			} else if (e.value.is_vector()) {
				s.kind = TypeDesc::Kind::Vector;
				s.scalar = e.value.elem_kind();
				s.length = e.value.length();
			} else {
				return std::nullopt;
			}
			return s;
		}
		case ExprKind::Relational: return Shape{TypeDesc::Kind::Scalar, ScalarKind::Boolean, {}, 0};
		case ExprKind::Logical:
		case ExprKind::Shift: return a.empty() ? std::nullopt : a[0];
		case ExprKind::Unary:
			if (e.op.op == Op::ToInteger)
				return Shape{TypeDesc::Kind::Scalar, ScalarKind::Integer, {}, 0};
			if (e.op.op == Op::ToVector || e.op.op == Op::Resize)
				return Shape{TypeDesc::Kind::Vector, e.op.op == Op::ToVector ? ScalarKind::Logic
						: (a[0] ? a[0]->scalar : ScalarKind::Logic), e.op.width, 0};
			return a[0];
		case ExprKind::Arith:
			if (a[0] && a[1] && a[0]->kind == TypeDesc::Kind::Scalar && a[1]->kind == TypeDesc::Kind::Scalar)
				return a[0];
			return std::nullopt;
		case ExprKind::Nth:
			if (a[0] && a[0]->kind == TypeDesc::Kind::Vector)
				return Shape{TypeDesc::Kind::Scalar, a[0]->scalar, {}, 0};
			return std::nullopt;
		case ExprKind::Slice:
			if (a[0] && a[0]->kind == TypeDesc::Kind::Vector) {
				Shape s{TypeDesc::Kind::Vector, a[0]->scalar, {}, 0};
				if (e.args[2].kind == ExprKind::Con && e.args[2].value.is_scalar() &&
						e.args[2].value.scalar_kind() == ScalarKind::Integer)
					s.length = e.args[2].value.as_int();
				return s;
			}
			return std::nullopt;
		case ExprKind::ToList:
		case ExprKind::ToRevList:
			if (a[0] && a[0]->kind == TypeDesc::Kind::Scalar)
				return Shape{TypeDesc::Kind::Vector, a[0]->scalar, 1, 0};
			return a[0];
		case ExprKind::Record: {
			Shape s;
			s.kind = TypeDesc::Kind::Record;
			s.fields = e.args.size();
			return s;
		}
		}
		return std::nullopt;
	}

	void check_assign(const Target &t, const AsmtRhs &rhs, bool is_signal) {
		auto tt = is_signal ? sig_type(t.name) : var_type(t.name);
		if (!tt) {
			error(where_ + ": assignment to undeclared " + (is_signal ? "signal/port \"" : "variable \"") + t.name + "\"");
			expr(rhs.expr);
			return;
		}
		if (is_signal) {
			if (auto it = sigs_.find(t.name); it != sigs_.end() && it->second.kind == SpKind::Port &&
					it->second.mode == Mode::In)
				error(where_ + ": assignment to input port \"" + t.name + "\"");
		}
		if (t.range) {
			expr(t.range->lo);
			expr(t.range->hi);
			if (tt->kind != TypeDesc::Kind::Vector)
				error(where_ + ": range assignment to non-vector \"" + t.name + "\"");
		}
		auto rs = expr(rhs.expr);
		if (!rs)
			return;
		if (rhs.others) {
			if (tt->kind != TypeDesc::Kind::Vector)
				error(where_ + ": \"others\" assignment to non-vector \"" + t.name + "\"");
			else if (rs->kind != TypeDesc::Kind::Scalar || rs->scalar != tt->scalar)
				error(where_ + ": \"others\" element does not match element type of \"" + t.name + "\"");
			return;
		}
		if (t.range) {
			if (rs->kind != TypeDesc::Kind::Vector || rs->scalar != tt->scalar)
				error(where_ + ": range assignment to \"" + t.name + "\" needs a vector of " +
						std::string(kind_name(tt->scalar)));
			return;
		}
		auto ts = *shape_of_type(*tt);
		bool ok = ts.kind == rs->kind;
		if (ok && ts.kind == TypeDesc::Kind::Scalar)
			ok = ts.scalar == rs->scalar;
		if (ok && ts.kind == TypeDesc::Kind::Vector)
			ok = ts.scalar == rs->scalar && (!rs->length || !ts.length || *rs->length == *ts.length);
		if (ok && ts.kind == TypeDesc::Kind::Record && rhs.expr.kind == ExprKind::Record)
			ok = ts.fields == rs->fields;
		if (!ok)
			error(where_ + ": type mismatch in assignment to \"" + t.name + "\"");
	}

	void check_call(const SubProgCall &c, SubKind expect) {
		auto it = subs_.find(c.callee);
		if (it == subs_.end()) {
			error(where_ + ": call to unknown " + (expect == SubKind::Function ? "function \"" : "procedure \"") +
					c.callee + "\"");
			return;
		}
		const Subprogram &sp = *it->second;
		if (sp.kind != expect)
			error(where_ + ": \"" + c.callee + "\" is not a " + (expect == SubKind::Function ? "function" : "procedure"));
		if (sp.formals.size() != c.args.size())
			error(where_ + ": call to \"" + c.callee + "\" passes " + std::to_string(c.args.size()) +
					" arguments, expected " + std::to_string(sp.formals.size()));
		for (const auto &a : c.args)
			if (!var_type(a.name))
				error(where_ + ": call argument \"" + a.name + "\" is not a declared variable");
	}

	void stmts(const std::vector<SeqStmt> &ss, std::vector<std::string> &loops, bool in_function) {
		for (const auto &s : ss)
			stmt(s, loops, in_function);
	}

	void stmt(const SeqStmt &s, std::vector<std::string> &loops, bool in_function) {
		switch (s.kind) {
		case StmtKind::SignalAssign: check_assign(s.target, s.rhs, true); break;
		case StmtKind::VarAssign: check_assign(s.target, s.rhs, false); break;
		case StmtKind::If:
			cond(s.cond);
			stmts(s.body, loops, in_function);
			stmts(s.else_body, loops, in_function);
			break;
		case StmtKind::Loop:
			cond(s.cond);
			if (!s.name.empty() && !loop_names_.insert(s.name).second)
				error(where_ + ": duplicate loop name \"" + s.name + "\"");
			loops.push_back(s.name);
			stmts(s.body, loops, in_function);
			loops.pop_back();
			break;
		case StmtKind::FnCall:
			if (!var_type(s.target.name))
				error(where_ + ": function result target \"" + s.target.name + "\" is not a declared variable");
			check_call(s.call, SubKind::Function);
			break;
		case StmtKind::ProcCall: check_call(s.call, SubKind::Procedure); break;
		case StmtKind::Return:
			if (!in_function)
				error(where_ + ": return statement outside a function");
			expr(s.rhs.expr);
			break;
		case StmtKind::Next:
		case StmtKind::Exit:
			cond(s.cond);
			if (std::find(loops.begin(), loops.end(), s.loop) == loops.end())
				error(where_ + ": unknown loop \"" + s.loop + "\" in " +
						(s.kind == StmtKind::Next ? "next" : "exit") + " statement");
			break;
		case StmtKind::Null: break;
		}
	}

	void cond(const Expression &c) {
		auto s = expr(c);
		if (s && (s->kind != TypeDesc::Kind::Scalar || s->scalar != ScalarKind::Boolean))
			error(where_ + ": condition is not boolean");
	}

	const Design &d_;
	std::unordered_map<std::string, SigPrt> sigs_;
	std::unordered_map<std::string, const Spl *> sig_groups_;
	std::unordered_map<std::string, VarDecl> vars_;
	std::unordered_map<std::string, const VarTree *> var_groups_;
	std::unordered_map<std::string, const Subprogram *> subs_;
	std::set<std::string> loop_names_;
	std::string where_;
	std::vector<Diagnostic> diags_;
};

} // namespace

std::vector<Diagnostic> check_design(const Design &d) { return Checker(d).run(); }

// --- diagnostics ------------------------------------------------------------

std::string format(const Diagnostic &d, bool color) {
	std::string sev = d.severity == Diagnostic::Severity::Error ? "error" : "warning";
	if (color)
		sev = (d.severity == Diagnostic::Severity::Error ? "\x1b[1;31m" : "\x1b[1;35m") + sev + "\x1b[0m";
	std::string where;
	if (!d.span.file.empty()) {
		where = d.span.file;
		if (d.span.line > 0)
			where += ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col);
		where += ": ";
	}
	return where + sev + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic> &ds) {
	return std::any_of(ds.begin(), ds.end(),
			[](const Diagnostic &d) { return d.severity == Diagnostic::Severity::Error; });
}

} // namespace vhdlkern
