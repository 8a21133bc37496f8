// Elaboration: resolves names and types in the parse tree and builds
// surface designs. Function calls inside expressions are hoisted into
// temporaries (`owner.__tN`) because the core calls functions only as
// statements with variable arguments.

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "parse_tree.hpp"
#include "vhdlkern/error.hpp"
#include "vhdlkern/frontend.hpp"

namespace vhdlkern {

namespace {

using namespace syntax;

struct ElabError {};

constexpr std::int64_t kIntLo = -2147483648LL, kIntHi = 2147483647LL;

struct SubSig {
	std::string name;
	bool is_function = true;
	std::vector<std::string> params; // bare names
	std::vector<TypeDesc> types;
	std::vector<Mode> modes;
	std::optional<TypeDesc> ret;
};

struct Sym {
	enum class K { Signal, Port, Var, Const, EnumLit, Sub, Type, Component, GenParam };
	K k = K::Const;
	std::string qname;
	TypeDesc type;
	Val value;
	Mode mode = Mode::Internal;
	bool unconstrained = false;
	bool read_only = false;
	std::size_t sub = 0;
	std::vector<std::string> ports; // Component
};

// An elaborated name: an object (possibly indexed/sliced), a value, or
// something that needs arguments.
struct NRef {
	enum class K { Object, Value, Sub, Type, Builtin };
	K k = K::Value;
	Sym::K base = Sym::K::Signal; // Signal, Port or Var for objects
	std::string name;
	TypeDesc type;                // type of the whole reference
	std::optional<DiscreteRange> sel;
	bool index = false;           // sel is a single index
	TypeDesc base_type;           // when sel is set
	Expression e;                 // Value
	const Sym *sym = nullptr;     // Sub, Type
	std::string builtin;
	bool read_only = false;
};

struct EV {
	Expression e;
	TypeDesc t;
};

struct LoopInfo {
	std::string label; // as written
	std::string qname;
};

// Statement context: owner of variables and temporaries.
struct Ctx {
	std::string owner;
	std::vector<std::string> *locals = nullptr; // subprogram locals
	bool in_function = false;
	std::optional<TypeDesc> ret;
	std::vector<LoopInfo> loops;
	std::vector<CSeqStmt> *pre = nullptr;
};

TypeDesc int_type(std::string name = "integer") { return TypeDesc::scalar_of(ScalarKind::Integer, std::move(name)); }
TypeDesc bool_type() { return TypeDesc::scalar_of(ScalarKind::Boolean, "boolean"); }

bool char_kind(ScalarKind k) { return k == ScalarKind::Bit || k == ScalarKind::Logic || k == ScalarKind::Character; }

bool is_vec(const TypeDesc &t) { return t.kind == TypeDesc::Kind::Vector; }
bool is_scalar(const TypeDesc &t, ScalarKind k) { return t.kind == TypeDesc::Kind::Scalar && t.scalar == k; }

Expression con_int(std::int64_t v) { return exp_con(Val::integer(v)); }

// Constant offset decomposition: e == base + off.
std::pair<const Expression *, std::int64_t> split_offset(const Expression &e) {
	if (e.kind == ExprKind::Con && e.value.is_scalar() && e.value.scalar_kind() == ScalarKind::Integer)
		return {nullptr, e.value.as_int()};
	if (e.kind == ExprKind::Arith && (e.op.op == Op::Add || e.op.op == Op::Sub)) {
		auto r = split_offset(e.args[1]);
		if (!r.first) {
			auto l = split_offset(e.args[0]);
			return {l.first ? l.first : nullptr, e.op.op == Op::Add ? l.second + r.second : l.second - r.second};
		}
		if (e.op.op == Op::Add) {
			auto l = split_offset(e.args[0]);
			if (!l.first)
				return {r.first, l.second + r.second};
		}
	}
	return {&e, 0};
}

// hi - lo when it is statically known.
std::optional<std::int64_t> static_diff(const Expression &hi, const Expression &lo) {
	auto h = split_offset(hi), l = split_offset(lo);
	if (!h.first && !l.first)
		return h.second - l.second;
	if (h.first && l.first && *h.first == *l.first)
		return h.second - l.second;
	return std::nullopt;
}

class Elab {
public:
	Elab(const std::string &path, std::vector<Diagnostic> &diags) : path_(path), diags_(diags) {}

	std::vector<ComplexDesign> run(const PFile &f) {
		for (const auto &u : f.uses) {
			static const std::set<std::string> known = {"ieee.std_logic_1164", "ieee.numeric_std", "ieee.std_logic_unsigned",
				"ieee.std_logic_signed", "ieee.std_logic_arith", "ieee.numeric_bit", "std.standard"};
			if (u == "ieee.std_logic_unsigned")
				default_numeric_ = Numeric::Unsigned;
			else if (u == "ieee.std_logic_signed")
				default_numeric_ = Numeric::Signed;
			else if (!known.count(u) && u.rfind("work.", 0) != 0)
				warn({path_, 0, 0, 0}, "use clause \"" + u + "\" ignored");
		}
		std::map<std::string, const PEntity *> ents;
		for (const auto &e : f.entities) {
			if (ents.count(e.name))
				error_at(e.at, "entity \"" + e.name + "\" declared twice");
			ents[e.name] = &e;
			entity_ports_[e.name] = {};
			for (const auto &p : e.ports)
				for (const auto &n : p.names)
					entity_ports_[e.name].push_back(n);
		}
		std::vector<ComplexDesign> out;
		std::set<std::string> done;
		for (const auto &a : f.archs) {
			auto it = ents.find(a.entity);
			if (it == ents.end()) {
				error_at(a.at, "architecture \"" + a.name + "\" of unknown entity \"" + a.entity + "\" (entity and architecture must share a file)");
				continue;
			}
			if (!done.insert(a.entity).second) {
				error_at(a.at, "second architecture for entity \"" + a.entity + "\"");
				continue;
			}
			std::size_t before = error_count();
			ComplexDesign d = design(*it->second, a);
			if (error_count() == before)
				out.push_back(std::move(d));
		}
		for (const auto &e : f.entities)
			if (!done.count(e.name))
				warn(e.at, "entity \"" + e.name + "\" has no architecture and is ignored");
		return out;
	}

private:
	// --- diagnostics ----------------------------------------------------------------

	std::size_t error_count() const {
		return static_cast<std::size_t>(std::count_if(diags_.begin(), diags_.end(),
				[](const Diagnostic &d) { return d.severity == Diagnostic::Severity::Error; }));
	}

	void error_at(const SourceSpan &at, const std::string &msg) {
		diags_.push_back(Diagnostic{Diagnostic::Severity::Error, msg, at});
	}
	void warn(const SourceSpan &at, const std::string &msg) {
		diags_.push_back(Diagnostic{Diagnostic::Severity::Warning, msg, at});
	}
	[[noreturn]] void fail_at(const SourceSpan &at, const std::string &msg) {
		error_at(at, msg);
		throw ElabError{};
	}

	// Runs f, turning an elaboration error into a recorded diagnostic.
	template <class F>
	void guarded(F &&f) {
		try {
			f();
		} catch (const ElabError &) {
		} catch (const SimError &e) {
			error_at({path_, 0, 0, 0}, e.what());
		}
	}

	// --- scopes -------------------------------------------------------------------------

	void push() { scopes_.emplace_back(); }
	void pop() { scopes_.pop_back(); }

	void declare(const SourceSpan &at, const std::string &n, Sym s) {
		auto &top = scopes_.back();
		if (top.count(n))
			fail_at(at, "\"" + n + "\" is already declared in this scope");
		top.emplace(n, std::move(s));
	}

	const Sym *lookup(const std::string &n) const {
		for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
			auto f = it->find(n);
			if (f != it->end())
				return &f->second;
		}
		return nullptr;
	}

	void builtin_scope() {
		push();
		auto type = [&](const std::string &n, TypeDesc t, bool unconstrained = false) {
			Sym s;
			s.k = Sym::K::Type;
			s.type = std::move(t);
			s.unconstrained = unconstrained;
			scopes_.back().emplace(n, std::move(s));
		};
		TypeDesc i = int_type();
		i.range_lo = kIntLo;
		i.range_hi = kIntHi;
		type("integer", i);
		TypeDesc nat = int_type("natural");
		nat.range_lo = 0;
		nat.range_hi = kIntHi;
		type("natural", nat);
		TypeDesc pos = int_type("positive");
		pos.range_lo = 1;
		pos.range_hi = kIntHi;
		type("positive", pos);
		type("boolean", bool_type());
		type("bit", TypeDesc::scalar_of(ScalarKind::Bit, "bit"));
		type("character", TypeDesc::scalar_of(ScalarKind::Character, "character"));
		type("real", TypeDesc::scalar_of(ScalarKind::Real, "real"));
		type("std_logic", TypeDesc::scalar_of(ScalarKind::Logic, "std_logic"));
		type("std_ulogic", TypeDesc::scalar_of(ScalarKind::Logic, "std_ulogic"));
		type("std_logic_vector", TypeDesc::vector_of(ScalarKind::Logic, true, 0, 0, "std_logic_vector"), true);
		type("std_ulogic_vector", TypeDesc::vector_of(ScalarKind::Logic, true, 0, 0, "std_ulogic_vector"), true);
		type("bit_vector", TypeDesc::vector_of(ScalarKind::Bit, true, 0, 0, "bit_vector"), true);
		type("string", TypeDesc::vector_of(ScalarKind::Character, false, 1, 1, "string"), true);
		type("unsigned", TypeDesc::vector_of(ScalarKind::Logic, true, 0, 0, "unsigned", Numeric::Unsigned), true);
		type("signed", TypeDesc::vector_of(ScalarKind::Logic, true, 0, 0, "signed", Numeric::Signed), true);
		Sym t;
		t.k = Sym::K::Const;
		t.type = bool_type();
		t.value = Val::boolean(true);
		scopes_.back().emplace("true", t);
		t.value = Val::boolean(false);
		scopes_.back().emplace("false", t);
	}

	// --- types ----------------------------------------------------------------------------

	struct Bounds {
		std::int64_t left, right;
		bool downto;
	};

	std::int64_t const_int(const PExpr &p) {
		EV v = expr(p, nullptr, nullptr);
		auto c = const_eval(v.e);
		if (!c || !c->is_scalar() || c->scalar_kind() != ScalarKind::Integer)
			fail_at(p.at, "expected a constant integer expression");
		return c->as_int();
	}

	Bounds const_range(const PExpr &r) {
		if (r.k == PExpr::K::Range)
			return Bounds{const_int(r.args[0]), const_int(r.args[1]), r.text == "downto"};
		if (r.k == PExpr::K::Attr) {
			TypeDesc t = range_prefix_type(r.args[0]);
			Bounds b = bounds_of(r.at, t);
			if (r.text == "reverse_range")
				return Bounds{b.right, b.left, !b.downto};
			return b;
		}
		fail_at(r.at, "expected a range");
	}

	Bounds bounds_of(const SourceSpan &at, const TypeDesc &t) {
		if (is_vec(t))
			return Bounds{t.left, t.right, t.downto};
		if (t.kind == TypeDesc::Kind::Scalar && t.range_lo)
			return Bounds{*t.range_lo, *t.range_hi, false};
		fail_at(at, "type " + to_string(t) + " has no range");
	}

	TypeDesc range_prefix_type(const PExpr &p) {
		NRef r = name_ref(p, nullptr);
		if (r.k == NRef::K::Object || r.k == NRef::K::Value || r.k == NRef::K::Type)
			return r.type;
		fail_at(p.at, "'range needs an object or a type");
	}

	TypeDesc subtype(const PType &pt) {
		const Sym *s = lookup(pt.mark);
		if (!s || s->k != Sym::K::Type)
			fail_at(pt.at, "unknown type \"" + pt.mark + "\"");
		TypeDesc t = s->type;
		if (!pt.constraint) {
			if (s->unconstrained)
				fail_at(pt.at, "unconstrained type \"" + pt.mark + "\" needs an index constraint here");
			return t;
		}
		Bounds b = const_range(*pt.constraint);
		if (is_vec(t)) {
			if (!s->unconstrained)
				fail_at(pt.at, "type \"" + pt.mark + "\" is already constrained");
			TypeDesc r = TypeDesc::vector_of(t.scalar, b.downto, b.left, b.right, t.name, t.numeric);
			return r;
		}
		if (t.kind == TypeDesc::Kind::Scalar && t.scalar == ScalarKind::Integer) {
			if (b.downto)
				fail_at(pt.at, "descending integer subtypes are not supported");
			t.range_lo = b.left;
			t.range_hi = b.right;
			return t;
		}
		fail_at(pt.at, "type \"" + pt.mark + "\" cannot be constrained");
	}

	void type_decl(const PDecl &d) {
		const std::string &n = d.names[0];
		Sym s;
		s.k = Sym::K::Type;
		switch (d.k) {
		case PDecl::K::TypeEnum: {
			s.type = int_type(n);
			s.type.range_lo = 0;
			s.type.range_hi = static_cast<std::int64_t>(d.literals.size()) - 1;
			declare(d.at, n, s);
			for (std::size_t k = 0; k < d.literals.size(); ++k) {
				Sym lit;
				lit.k = Sym::K::EnumLit;
				lit.type = s.type;
				lit.value = Val::integer(static_cast<std::int64_t>(k));
				declare(d.at, d.literals[k], lit);
			}
			return;
		}
		case PDecl::K::TypeRecord: {
			s.type.kind = TypeDesc::Kind::Record;
			s.type.name = n;
			std::set<std::string> seen;
			for (const auto &[names, pt] : d.fields) {
				TypeDesc ft = subtype(pt);
				for (const auto &f : names) {
					if (!seen.insert(f).second)
						fail_at(pt.at, "duplicate record field \"" + f + "\"");
					s.type.fields.emplace_back(f, ft);
				}
			}
			declare(d.at, n, s);
			return;
		}
		case PDecl::K::TypeArray: {
			TypeDesc et = subtype(d.type);
			if (et.kind != TypeDesc::Kind::Scalar || !char_kind(et.scalar))
				fail_at(d.type.at, "array elements must be bit, std_logic or character");
			Bounds b = const_range(d.range);
			s.type = TypeDesc::vector_of(et.scalar, b.downto, b.left, b.right,
					et.name == "std_ulogic" ? "std_ulogic_vector" : n);
			declare(d.at, n, s);
			return;
		}
		case PDecl::K::TypeRange: {
			Bounds b = const_range(d.range);
			if (b.downto)
				fail_at(d.at, "descending integer types are not supported");
			s.type = int_type(n);
			s.type.range_lo = b.left;
			s.type.range_hi = b.right;
			declare(d.at, n, s);
			return;
		}
		case PDecl::K::Subtype: {
			s.type = subtype(d.type);
			declare(d.at, n, s);
			return;
		}
		default: break;
		}
	}

	// std_logic and the vectors built on it carry the `resolved` function.
	static bool resolved_type(const TypeDesc &t) {
		return t.scalar == ScalarKind::Logic && t.name != "std_ulogic" && t.name != "std_ulogic_vector";
	}

	Val initial(const SourceSpan &at, const TypeDesc &t, const std::optional<PExpr> &init, const std::string &what) {
		if (!init)
			return default_value(t);
		EV v = expr_rhs_const(*init, t);
		auto c = const_eval(v.e);
		if (!c)
			fail_at(at, "initial value of " + what + " is not constant");
		try {
			return conform(*c, t, what);
		} catch (const SimError &e) {
			fail_at(at, e.what());
		}
	}

	EV expr_rhs_const(const PExpr &p, const TypeDesc &t) {
		if (p.k == PExpr::K::Aggregate)
			return EV{aggregate(p, t, nullptr), t};
		return expr(p, &t, nullptr);
	}

	Spl make_spl(const std::string &name, const TypeDesc &t, SpKind kind, Mode mode, const Val &init, bool has_default) {
		if (t.kind == TypeDesc::Kind::Record) {
			std::vector<Spl> ms;
			for (std::size_t k = 0; k < t.fields.size(); ++k)
				ms.push_back(make_spl(name + "." + t.fields[k].first, t.fields[k].second, kind, mode, init.members()[k],
						has_default));
			return spnl(name, std::move(ms));
		}
		SigPrt sp;
		sp.kind = kind;
		sp.name = name;
		sp.mode = kind == SpKind::Port ? mode : Mode::Internal;
		sp.type = t;
		sp.init = init;
		sp.has_default = has_default;
		if (resolved_type(t))
			cd_->res_fn[name] = "resolved";
		return spl_leaf(std::move(sp));
	}

	static VarTree make_var(const std::string &name, const TypeDesc &t, const Val &init) {
		VarTree v;
		v.name = name;
		if (t.kind == TypeDesc::Kind::Record) {
			for (std::size_t k = 0; k < t.fields.size(); ++k)
				v.members.push_back(make_var(name + "." + t.fields[k].first, t.fields[k].second, init.members()[k]));
			return v;
		}
		v.leaf = VarDecl{name, t, init};
		return v;
	}

	static void leaf_names(const Spl &s, std::vector<std::string> &out) {
		if (s.is_leaf()) {
			out.push_back(s.name);
			return;
		}
		for (const auto &m : s.members)
			leaf_names(m, out);
	}

	const Spl *find_spl(const std::string &name) const {
		std::function<const Spl *(const Spl &)> rec = [&](const Spl &s) -> const Spl * {
			if (s.name == name)
				return &s;
			if (name.rfind(s.name + ".", 0) == 0)
				for (const auto &m : s.members)
					if (auto r = rec(m))
						return r;
			return nullptr;
		};
		for (const auto &s : cd_->env.sigprts)
			if (auto r = rec(s))
				return r;
		return nullptr;
	}

	// --- declarations -----------------------------------------------------------------

	void add_variable(const std::string &qname, const TypeDesc &t, const Val &init, Ctx *ctx) {
		cd_->env.variables.push_back(make_var(qname, t, init));
		if (ctx && ctx->locals)
			ctx->locals->push_back(qname);
	}

	// Declarations of an architecture, process or subprogram.
	void decls(const std::vector<PDecl> &ds, Ctx *ctx, bool arch) {
		for (const auto &d : ds) {
			guarded([&] { decl(d, ctx, arch); });
		}
	}

	void decl(const PDecl &d, Ctx *ctx, bool arch) {
		switch (d.k) {
		case PDecl::K::Signal: {
			if (!arch)
				fail_at(d.at, "signals can only be declared in an architecture");
			TypeDesc t = subtype(d.type);
			for (const auto &n : d.names) {
				Val init = initial(d.at, t, d.init, "signal " + n);
				Sym s;
				s.k = Sym::K::Signal;
				s.qname = n;
				s.type = t;
				declare(d.at, n, s);
				cd_->env.sigprts.push_back(make_spl(n, t, SpKind::Signal, Mode::Internal, init, false));
			}
			return;
		}
		case PDecl::K::Constant: {
			TypeDesc t = subtype_or_deferred(d);
			if (!d.init)
				fail_at(d.at, "deferred constants are not supported");
			for (const auto &n : d.names) {
				Sym s;
				s.k = Sym::K::Const;
				s.type = t;
				s.value = initial(d.at, t, d.init, "constant " + n);
				if (is_vec(s.type) && s.type.length() != s.value.length())
					fail_at(d.at, "constant " + n + " has the wrong length");
				declare(d.at, n, s);
			}
			return;
		}
		case PDecl::K::Variable: {
			if (arch || !ctx)
				fail_at(d.at, "'shared' variables are not in synthesizable subset");
			TypeDesc t = subtype(d.type);
			for (const auto &n : d.names) {
				Val init = initial(d.at, t, d.init, "variable " + n);
				Sym s;
				s.k = Sym::K::Var;
				s.qname = ctx->owner + "." + n;
				s.type = t;
				declare(d.at, n, s);
				add_variable(s.qname, t, init, ctx);
			}
			return;
		}
		case PDecl::K::Component: {
			Sym s;
			s.k = Sym::K::Component;
			for (const auto &p : d.ports)
				for (const auto &n : p.names)
					s.ports.push_back(n);
			declare(d.at, d.names[0], s);
			return;
		}
		case PDecl::K::Sub:
			if (!arch)
				fail_at(d.at, "subprograms can only be declared in an architecture");
			subprogram(d.sub);
			return;
		default: type_decl(d); return;
		}
	}

	// An unconstrained constant takes its bounds from the initial value.
	TypeDesc subtype_or_deferred(const PDecl &d) {
		const Sym *s = lookup(d.type.mark);
		if (s && s->k == Sym::K::Type && s->unconstrained && !d.type.constraint && d.init) {
			EV v = expr(*d.init, &s->type, nullptr);
			auto c = const_eval(v.e);
			if (!c || !c->is_vector())
				fail_at(d.at, "constant of unconstrained type needs a constant vector value");
			return TypeDesc::vector_of(s->type.scalar, s->type.downto, c->left(),
					c->left() + (c->tag() == ValTag::VecDownto ? -(c->length() - 1) : c->length() - 1), s->type.name,
					s->type.numeric);
		}
		return subtype(d.type);
	}

	void subprogram(const PSub &ps) {
		if (!ps.has_body)
			fail_at(ps.at, "subprogram declarations without a body are not supported");
		if (lookup(ps.name) && scopes_.back().count(ps.name))
			fail_at(ps.at, "\"" + ps.name + "\" is already declared (overloading is not supported)");
		SubSig sig;
		sig.name = ps.name;
		sig.is_function = ps.is_function;
		CSubprogram sp;
		sp.name = ps.name;
		sp.kind = ps.is_function ? SubKind::Function : SubKind::Procedure;
		if (ps.ret) {
			sig.ret = subtype(*ps.ret);
			sp.ret_type = sig.ret;
		}
		Ctx ctx;
		ctx.owner = ps.name;
		ctx.locals = &sp.locals;
		ctx.in_function = ps.is_function;
		ctx.ret = sig.ret;
		push();
		std::vector<std::pair<std::string, Sym>> formals;
		for (const auto &p : ps.params) {
			if (p.cls == "signal")
				fail_at(p.at, "signal parameters are not supported; pass values");
			Mode m = p.mode == "out" ? Mode::Out : p.mode == "inout" ? Mode::Inout : Mode::In;
			if (ps.is_function && m != Mode::In)
				fail_at(p.at, "function parameters must have mode in");
			if (p.init)
				fail_at(p.at, "default parameter values are not supported");
			TypeDesc t = subtype(p.type);
			for (const auto &n : p.names) {
				Sym s;
				s.k = Sym::K::Var;
				s.qname = ps.name + "." + n;
				s.type = t;
				s.read_only = m == Mode::In && p.cls == "constant";
				declare(p.at, n, s);
				cd_->env.variables.push_back(make_var(s.qname, t, default_value(t)));
				sp.formals.push_back(Formal{s.qname, m});
				sig.params.push_back(n);
				sig.types.push_back(t);
				sig.modes.push_back(m);
			}
		}
		// Registered before the body so that recursive calls resolve.
		subs_.push_back(sig);
		Sym self;
		self.k = Sym::K::Sub;
		self.sub = subs_.size() - 1;
		scopes_[scopes_.size() - 2].emplace(ps.name, self);
		decls(ps.decls, &ctx, false);
		sp.body = stmts(ps.body, ctx);
		pop();
		cd_->subprograms.push_back(std::move(sp));
	}

	// --- design --------------------------------------------------------------------------

	ComplexDesign design(const PEntity &e, const PArch &a) {
		ComplexDesign d;
		d.name = e.name;
		cd_ = &d;
		subs_.clear();
		temp_counter_.clear();
		auto_names_ = 0;
		scopes_.clear();
		builtin_scope();
		push();
		for (const auto &g : e.generics) {
			guarded([&] {
				if (!g.init)
					fail_at(g.at, "generics need a default value (generic maps are not supported)");
				TypeDesc t = subtype(g.type);
				for (const auto &n : g.names) {
					Sym s;
					s.k = Sym::K::Const;
					s.type = t;
					s.value = initial(g.at, t, g.init, "generic " + n);
					declare(g.at, n, s);
				}
			});
		}
		for (const auto &p : e.ports) {
			guarded([&] {
				Mode m = p.mode == "out" ? Mode::Out : p.mode == "inout" ? Mode::Inout : Mode::In;
				TypeDesc t = subtype(p.type);
				for (const auto &n : p.names) {
					Val init = initial(p.at, t, p.init, "port " + n);
					Sym s;
					s.k = Sym::K::Port;
					s.qname = n;
					s.type = t;
					s.mode = m;
					declare(p.at, n, s);
					d.env.sigprts.push_back(make_spl(n, t, SpKind::Port, m, init, p.init.has_value()));
				}
			});
		}
		push();
		decls(a.decls, nullptr, true);
		for (const auto &c : a.stmts)
			guarded([&] { conc(c, d.processes, true); });
		cd_ = nullptr;
		return d;
	}

	std::string auto_name(const char *prefix) { return std::string(prefix) + std::to_string(++auto_names_); }

	void conc(const PConc &c, std::vector<CConcStmt> &out, bool top) {
		switch (c.k) {
		case PConc::K::Process: out.push_back(process(c)); return;
		case PConc::K::CondAssign: out.push_back(cond_assign(c)); return;
		case PConc::K::SelAssign: out.push_back(sel_assign(c)); return;
		case PConc::K::ForGen: {
			Bounds b = const_range(c.range);
			push();
			Sym s;
			s.k = Sym::K::GenParam;
			s.qname = c.label + "." + c.var;
			s.type = int_type();
			declare(c.at, c.var, s);
			std::vector<CConcStmt> body;
			for (const auto &g : c.gen_body)
				guarded([&] { conc(g, body, false); });
			pop();
			std::int64_t lo = b.downto ? b.right : b.left, hi = b.downto ? b.left : b.right;
			out.push_back(csc_for_gen(c.label, s.qname, DiscreteRange{con_int(lo), con_int(hi), b.downto}, std::move(body)));
			return;
		}
		case PConc::K::IfGen: {
			EV v = expr(c.cond, nullptr, nullptr);
			if (!const_eval(v.e) || !is_scalar(v.t, ScalarKind::Boolean))
				fail_at(c.cond.at, "generate condition must be a constant boolean");
			std::vector<CConcStmt> body;
			for (const auto &g : c.gen_body)
				guarded([&] { conc(g, body, false); });
			out.push_back(csc_if_gen(c.label, v.e, std::move(body)));
			return;
		}
		case PConc::K::Instance:
			if (!top)
				fail_at(c.at, "component instances inside generate statements are not supported");
			instance(c);
			return;
		}
	}

	void sensitivity_of(const PExpr &p, std::vector<std::string> &out) {
		NRef r = name_ref(p, nullptr);
		if (r.k != NRef::K::Object || r.sel || (r.base != Sym::K::Signal && r.base != Sym::K::Port))
			fail_at(p.at, "sensitivity list entries must be signals or ports");
		const Spl *s = find_spl(r.name);
		if (!s)
			fail_at(p.at, "unknown signal \"" + r.name + "\"");
		std::vector<std::string> leaves;
		leaf_names(*s, leaves);
		for (auto &l : leaves)
			if (std::find(out.begin(), out.end(), l) == out.end())
				out.push_back(std::move(l));
	}

	CConcStmt process(const PConc &c) {
		std::string name = c.label.empty() ? auto_name("_p") : c.label;
		std::vector<std::string> sens;
		for (const auto &s : c.sensitivity)
			guarded([&] { sensitivity_of(s, sens); });
		if (c.sensitivity.empty())
			warn(c.at, "process \"" + name + "\" has no sensitivity list and only runs when stimulated");
		Ctx ctx;
		ctx.owner = name;
		push();
		decls(c.decls, &ctx, false);
		auto body = stmts(c.body, ctx);
		pop();
		return csc_ps(name, std::move(sens), std::move(body));
	}

	AsmtRhs rhs_for(const PExpr &p, const TypeDesc &t, Ctx *ctx) {
		if (p.k == PExpr::K::Aggregate && p.assocs.size() == 1 && p.assocs[0].others && is_vec(t)) {
			TypeDesc et = TypeDesc::scalar_of(t.scalar);
			EV v = expr(p.assocs[0].value, &et, ctx);
			check_assignable(p.at, et, v.t, "aggregate element");
			return rhs_o(v.e);
		}
		EV v = p.k == PExpr::K::Aggregate ? EV{aggregate(p, t, ctx), t} : expr(p, &t, ctx);
		check_assignable(p.at, t, v.t, "assignment");
		return rhs_e(v.e);
	}

	void check_assignable(const SourceSpan &at, const TypeDesc &target, const TypeDesc &v, const std::string &what) {
		bool ok = target.kind == v.kind;
		if (ok && target.kind == TypeDesc::Kind::Scalar)
			ok = target.scalar == v.scalar;
		if (ok && target.kind == TypeDesc::Kind::Vector)
			ok = target.scalar == v.scalar && target.length() == v.length();
		if (ok && target.kind == TypeDesc::Kind::Record)
			ok = same_shape(target, v);
		if (!ok)
			fail_at(at, "type mismatch in " + what + ": expected " + to_string(target) + ", got " + to_string(v));
	}

	struct TargetInfo {
		Target t;
		TypeDesc type; // type of what is assigned (element for an index)
		Sym::K base;
	};

	TargetInfo target(const PExpr &p, Ctx *ctx) {
		NRef r = name_ref(p, ctx);
		if (r.k != NRef::K::Object)
			fail_at(p.at, "assignment target is not a signal, port or variable");
		TargetInfo ti;
		ti.base = r.base;
		ti.t = lhs(r.name);
		ti.type = r.type;
		if (r.sel)
			ti.t.range = r.sel;
		if (r.read_only)
			fail_at(p.at, "cannot assign to \"" + r.name + "\"");
		return ti;
	}

	// An index target `v(i)` is a one-element range; its value is wrapped
	// into a singleton vector.
	AsmtRhs assign_rhs(const PExpr &value, const TargetInfo &ti, Ctx *ctx, const NRef *ref) {
		(void)ref;
		if (ti.t.range && ti.type.kind == TypeDesc::Kind::Scalar) {
			EV v = expr(value, &ti.type, ctx);
			check_assignable(value.at, ti.type, v.t, "assignment");
			return rhs_e(exp_tl(v.e));
		}
		return rhs_for(value, ti.type, ctx);
	}

	CConcStmt cond_assign(const PConc &c) {
		std::string name = c.label.empty() ? auto_name("_ca") : c.label;
		TargetInfo ti = target(c.target, nullptr);
		if (ti.base == Sym::K::Var)
			fail_at(c.target.at, "concurrent assignment to a variable");
		std::vector<AsWhen> whens;
		std::optional<AsmtRhs> else_rhs;
		for (const auto &w : c.waves) {
			AsmtRhs r = assign_rhs(w.value, ti, nullptr, nullptr);
			if (w.cond) {
				EV cv = expr(*w.cond, nullptr, nullptr);
				require_bool(w.cond->at, cv.t);
				whens.push_back(AsWhen{std::move(r), cv.e});
			} else {
				else_rhs = std::move(r);
			}
		}
		return csc_ca(name, ti.t, std::move(whens), std::move(else_rhs));
	}

	// `with s select t <= a when c1, b when others;` becomes a process with
	// a case statement.
	CConcStmt sel_assign(const PConc &c) {
		std::string name = c.label.empty() ? auto_name("_sel") : c.label;
		TargetInfo ti = target(c.target, nullptr);
		if (ti.base == Sym::K::Var)
			fail_at(c.target.at, "concurrent assignment to a variable");
		EV sel = expr(c.selector, nullptr, nullptr);
		std::vector<std::string> sigs, vars;
		collect_reads(sel.e, sigs, vars);
		if (ti.t.range) {
			collect_reads(ti.t.range->lo, sigs, vars);
			collect_reads(ti.t.range->hi, sigs, vars);
		}
		std::vector<CaseWhen> whens;
		std::optional<std::vector<CSeqStmt>> others;
		for (const auto &arm : c.sel) {
			AsmtRhs r = assign_rhs(arm.value, ti, nullptr, nullptr);
			collect_reads(r.expr, sigs, vars);
			std::vector<CSeqStmt> body{from_core(sst_sa(name, ti.t, r))};
			if (arm.others) {
				others = std::move(body);
				continue;
			}
			CaseWhen w;
			for (const auto &ch : arm.choices)
				w.choices.push_back(choice(ch, sel.t));
			w.body = std::move(body);
			whens.push_back(std::move(w));
		}
		std::vector<std::string> sens;
		for (auto &s : sigs)
			if (std::find(sens.begin(), sens.end(), s) == sens.end())
				sens.push_back(s);
		std::vector<CSeqStmt> body{ssc_case(name, sel.e, std::move(whens), std::move(others))};
		return csc_ps(name, std::move(sens), std::move(body));
	}

	void instance(const PConc &c) {
		ComponentInst ci;
		ci.label = c.label;
		ci.design = c.unit;
		std::vector<std::string> order;
		if (!c.entity_inst) {
			const Sym *s = lookup(c.unit);
			if (!s || s->k != Sym::K::Component)
				fail_at(c.at, "\"" + c.unit + "\" is not a declared component");
			order = s->ports;
		} else if (auto it = entity_ports_.find(c.unit); it != entity_ports_.end()) {
			order = it->second;
		}
		std::size_t pos = 0;
		std::set<std::string> formals;
		for (const auto &a : c.port_map) {
			std::string formal;
			if (a.others)
				fail_at(c.at, "'others' in a port map is not supported");
			if (a.choices.empty()) {
				if (pos >= order.size())
					fail_at(a.value.at, order.empty() ? "positional port association needs a component declaration"
									: "too many port associations");
				formal = order[pos++];
			} else {
				formal = formal_name(a.choices[0]);
			}
			if (!formals.insert(formal).second)
				fail_at(a.value.at, "port \"" + formal + "\" associated twice");
			if (a.value.k == PExpr::K::Open)
				continue;
			NRef r = name_ref(a.value, nullptr);
			if (r.k != NRef::K::Object || r.sel || r.base == Sym::K::Var)
				fail_at(a.value.at, "port actuals must be whole signals or ports (expressions, slices and constants are not supported)");
			const Spl *s = find_spl(r.name);
			std::vector<std::string> leaves;
			leaf_names(*s, leaves);
			for (const auto &l : leaves)
				ci.port_map.emplace_back(formal + l.substr(r.name.size()), l);
		}
		cd_->components.push_back(std::move(ci));
	}

	std::string formal_name(const PExpr &p) {
		if (p.k == PExpr::K::Name)
			return p.text;
		if (p.k == PExpr::K::Select)
			return formal_name(p.args[0]) + "." + p.text;
		fail_at(p.at, "formal part must be a port name");
	}

	// --- sequential statements ---------------------------------------------------------

	std::vector<CSeqStmt> stmts(const std::vector<PStmt> &ss, Ctx &ctx) {
		std::vector<CSeqStmt> out;
		for (const auto &s : ss)
			guarded([&] { stmt(s, ctx, out); });
		return out;
	}

	void require_bool(const SourceSpan &at, const TypeDesc &t) {
		if (!is_scalar(t, ScalarKind::Boolean))
			fail_at(at, "condition must be boolean, got " + to_string(t));
	}

	// Elaborates a condition; hoisted statements go to `pre`.
	Expression cond(const PExpr &p, Ctx &ctx, std::vector<CSeqStmt> &pre) {
		auto *saved = ctx.pre;
		ctx.pre = &pre;
		EV v = expr(p, nullptr, &ctx);
		ctx.pre = saved;
		require_bool(p.at, v.t);
		return v.e;
	}

	std::string loop_name(const PStmt &s, Ctx &ctx) {
		std::string label = s.label.empty() ? auto_name("_l") : s.label;
		for (const auto &l : ctx.loops)
			if (!s.label.empty() && l.label == s.label)
				fail_at(s.at, "loop label \"" + s.label + "\" is already in use");
		return ctx.owner + "." + label;
	}

	std::string loop_target(const PStmt &s, Ctx &ctx) {
		if (ctx.loops.empty())
			fail_at(s.at, std::string(s.k == PStmt::K::Next ? "next" : "exit") + " outside a loop");
		if (s.loop.empty())
			return ctx.loops.back().qname;
		for (auto it = ctx.loops.rbegin(); it != ctx.loops.rend(); ++it)
			if (it->label == s.loop)
				return it->qname;
		fail_at(s.at, "no enclosing loop labelled \"" + s.loop + "\"");
	}

	std::vector<CSeqStmt> if_chain(const PStmt &s, std::size_t from, Ctx &ctx) {
		std::vector<CSeqStmt> out;
		Expression c0 = cond(s.arms[from].cond, ctx, out);
		std::vector<CElsif> elsifs;
		std::vector<CSeqStmt> else_body;
		std::size_t k = from + 1;
		for (; k < s.arms.size(); ++k) {
			std::vector<CSeqStmt> pre;
			Expression ck = cond(s.arms[k].cond, ctx, pre);
			if (!pre.empty()) {
				// This condition needs statements first: it goes into an else.
				else_body = if_chain(s, k, ctx);
				break;
			}
			elsifs.push_back(CElsif{std::move(ck), stmts(s.arms[k].body, ctx)});
		}
		if (k == s.arms.size())
			else_body = stmts(s.else_body, ctx);
		out.push_back(ssc_if(s.label, std::move(c0), stmts(s.arms[from].body, ctx), std::move(elsifs), std::move(else_body)));
		return out;
	}

	CaseChoice choice(const PExpr &p, const TypeDesc &sel) {
		auto constant = [&](const PExpr &x) {
			EV v = x.k == PExpr::K::Aggregate ? EV{aggregate(x, sel, nullptr), sel} : expr(x, &sel, nullptr);
			auto c = const_eval(v.e);
			if (!c)
				fail_at(x.at, "case choices must be constant");
			if (sel.kind != v.t.kind || sel.scalar != v.t.scalar || (is_vec(sel) && sel.length() != c->length()))
				fail_at(x.at, "case choice " + to_string(*c) + " does not match selector type " + to_string(sel));
			return exp_con(*c);
		};
		if (p.k == PExpr::K::Range) {
			if (!is_scalar(sel, ScalarKind::Integer))
				fail_at(p.at, "range choices need an integer selector");
			Expression a = constant(p.args[0]), b = constant(p.args[1]);
			if (p.text == "downto")
				std::swap(a, b);
			return CaseChoice{std::move(a), std::move(b)};
		}
		return CaseChoice{constant(p), std::nullopt};
	}

	DiscreteRange loop_range(const PExpr &r, Ctx &ctx, std::vector<CSeqStmt> &pre) {
		if (r.k == PExpr::K::Attr) {
			Bounds b = const_range(r);
			std::int64_t lo = b.downto ? b.right : b.left, hi = b.downto ? b.left : b.right;
			return DiscreteRange{con_int(lo), con_int(hi), b.downto};
		}
		auto *saved = ctx.pre;
		ctx.pre = &pre;
		TypeDesc it = int_type();
		EV a = expr(r.args[0], &it, &ctx);
		EV b = expr(r.args[1], &it, &ctx);
		ctx.pre = saved;
		if (!is_scalar(a.t, ScalarKind::Integer) || !is_scalar(b.t, ScalarKind::Integer))
			fail_at(r.at, "loop ranges must be integer");
		bool down = r.text == "downto";
		return down ? DiscreteRange{b.e, a.e, true} : DiscreteRange{a.e, b.e, false};
	}

	void stmt(const PStmt &s, Ctx &ctx, std::vector<CSeqStmt> &out) {
		std::vector<CSeqStmt> pre;
		auto *saved = ctx.pre;
		ctx.pre = &pre;
		struct Restore {
			Ctx &c;
			std::vector<CSeqStmt> *p;
			~Restore() { c.pre = p; }
		} restore{ctx, saved};
		auto flush = [&] {
			out.insert(out.end(), std::make_move_iterator(pre.begin()), std::make_move_iterator(pre.end()));
			pre.clear();
		};
		switch (s.k) {
		case PStmt::K::SigAssign:
		case PStmt::K::VarAssign: {
			TargetInfo ti = target(s.target, &ctx);
			bool sig = s.k == PStmt::K::SigAssign;
			if (sig && ti.base == Sym::K::Var)
				fail_at(s.at, "\"<=\" assigns signals; use \":=\" for variable " + ti.t.name);
			if (!sig && ti.base != Sym::K::Var)
				fail_at(s.at, "\":=\" assigns variables; use \"<=\" for signal " + ti.t.name);
			AsmtRhs r = assign_rhs(s.value, ti, &ctx, nullptr);
			flush();
			out.push_back(from_core(sig ? sst_sa(s.label, ti.t, r) : sst_va(s.label, ti.t, r)));
			return;
		}
		case PStmt::K::If: {
			ctx.pre = saved;
			auto l = if_chain(s, 0, ctx);
			out.insert(out.end(), l.begin(), l.end());
			return;
		}
		case PStmt::K::Case: {
			EV sel = expr(s.selector, nullptr, &ctx);
			flush();
			std::vector<CaseWhen> whens;
			std::optional<std::vector<CSeqStmt>> others;
			for (const auto &arm : s.cases) {
				if (arm.others) {
					if (others)
						fail_at(s.at, "more than one \"when others\"");
					others = stmts(arm.body, ctx);
					continue;
				}
				CaseWhen w;
				for (const auto &ch : arm.choices)
					w.choices.push_back(choice(ch, sel.t));
				w.body = stmts(arm.body, ctx);
				whens.push_back(std::move(w));
			}
			out.push_back(ssc_case(s.label, sel.e, std::move(whens), std::move(others)));
			return;
		}
		case PStmt::K::For: {
			std::string name = loop_name(s, ctx);
			DiscreteRange r = loop_range(s.range, ctx, pre);
			flush();
			push();
			Sym v;
			v.k = Sym::K::Var;
			v.qname = name + "." + s.var;
			v.type = int_type();
			v.read_only = true;
			declare(s.at, s.var, v);
			ctx.loops.push_back(LoopInfo{s.label, name});
			auto body = stmts(s.body, ctx);
			ctx.loops.pop_back();
			pop();
			out.push_back(ssc_for(name, v.qname, std::move(r), std::move(body)));
			return;
		}
		case PStmt::K::While:
		case PStmt::K::Loop: {
			std::string name = loop_name(s, ctx);
			ctx.loops.push_back(LoopInfo{s.label, name});
			std::vector<CSeqStmt> cpre;
			Expression c = s.k == PStmt::K::While ? cond(s.cond, ctx, cpre) : exp_con(Val::boolean(true));
			auto body = stmts(s.body, ctx);
			ctx.loops.pop_back();
			if (!cpre.empty()) {
				// Re-evaluate the hoisted calls on every iteration.
				cpre.push_back(from_core(sst_e(name, name, uexp(Op::Not, std::move(c)))));
				cpre.insert(cpre.end(), std::make_move_iterator(body.begin()), std::make_move_iterator(body.end()));
				body = std::move(cpre);
				c = exp_con(Val::boolean(true));
			}
			out.push_back(ssc_while(name, std::move(c), std::move(body)));
			return;
		}
		case PStmt::K::Next:
		case PStmt::K::Exit: {
			std::string loop = loop_target(s, ctx);
			Expression c = s.has_cond ? cond(s.cond, ctx, pre) : exp_con(Val::boolean(true));
			flush();
			out.push_back(from_core(s.k == PStmt::K::Next ? sst_n(s.label, loop, c) : sst_e(s.label, loop, c)));
			return;
		}
		case PStmt::K::Return: {
			if (!ctx.in_function)
				fail_at(s.at, "return is only supported in functions");
			if (!s.has_value)
				fail_at(s.at, "function return needs a value");
			AsmtRhs r = rhs_for(s.value, *ctx.ret, &ctx);
			flush();
			out.push_back(from_core(sst_rt(s.label, r)));
			return;
		}
		case PStmt::K::Null: out.push_back(from_core(sst_nl())); return;
		case PStmt::K::Call: {
			SubProgCall call = proc_call(s.call, ctx);
			flush();
			out.push_back(from_core(sst_pc(s.label, std::move(call))));
			return;
		}
		}
	}

	// --- subprogram calls --------------------------------------------------------------

	std::string temp(Ctx &ctx, const TypeDesc &t) {
		std::string n = ctx.owner + ".__t" + std::to_string(++temp_counter_[ctx.owner]);
		add_variable(n, t, default_value(t), &ctx);
		return n;
	}

	// Binds actuals to formals; `in` actuals that are not plain variables
	// are evaluated into temporaries.
	std::vector<Target> call_args(const SourceSpan &at, const SubSig &sig, const std::vector<Assoc> &assocs, Ctx &ctx) {
		std::vector<const PExpr *> bound(sig.params.size(), nullptr);
		std::size_t pos = 0;
		for (const auto &a : assocs) {
			std::size_t k;
			if (a.others)
				fail_at(at, "'others' in a call");
			if (a.choices.empty()) {
				k = pos++;
			} else {
				if (a.choices.size() != 1 || a.choices[0].k != PExpr::K::Name)
					fail_at(a.value.at, "named association needs a parameter name");
				auto it = std::find(sig.params.begin(), sig.params.end(), a.choices[0].text);
				if (it == sig.params.end())
					fail_at(a.value.at, "\"" + sig.name + "\" has no parameter \"" + a.choices[0].text + "\"");
				k = static_cast<std::size_t>(it - sig.params.begin());
			}
			if (k >= sig.params.size())
				fail_at(a.value.at, "too many arguments to \"" + sig.name + "\"");
			if (bound[k])
				fail_at(a.value.at, "parameter \"" + sig.params[k] + "\" given twice");
			bound[k] = &a.value;
		}
		std::vector<Target> args;
		for (std::size_t k = 0; k < sig.params.size(); ++k) {
			if (!bound[k])
				fail_at(at, "missing argument for parameter \"" + sig.params[k] + "\" of \"" + sig.name + "\"");
			const PExpr &p = *bound[k];
			if (sig.modes[k] != Mode::In) {
				NRef r = name_ref(p, &ctx);
				if (r.k != NRef::K::Object || r.base != Sym::K::Var || r.sel)
					fail_at(p.at, "actual for out/inout parameter \"" + sig.params[k] + "\" must be a whole variable");
				if (r.read_only)
					fail_at(p.at, "cannot pass read-only \"" + r.name + "\" as out/inout");
				check_assignable(p.at, sig.types[k], r.type, "argument " + sig.params[k]);
				args.push_back(lhs(r.name));
				continue;
			}
			EV v = p.k == PExpr::K::Aggregate ? EV{aggregate(p, sig.types[k], &ctx), sig.types[k]}
					: expr(p, &sig.types[k], &ctx);
			check_assignable(p.at, sig.types[k], v.t, "argument " + sig.params[k]);
			if (v.e.kind == ExprKind::Var) {
				args.push_back(lhs(v.e.name));
				continue;
			}
			std::string t = temp(ctx, sig.types[k]);
			ctx.pre->push_back(from_core(sst_va("", lhs(t), rhs_e(v.e))));
			args.push_back(lhs(t));
		}
		return args;
	}

	EV fn_call(const SourceSpan &at, const SubSig &sig, const std::vector<Assoc> &assocs, Ctx *ctx) {
		if (!sig.is_function)
			fail_at(at, "procedure \"" + sig.name + "\" used in an expression");
		if (!ctx || !ctx->pre)
			fail_at(at, "function calls are only supported inside processes and subprograms");
		SubProgCall call{sig.name, call_args(at, sig, assocs, *ctx), sig.ret};
		std::string t = temp(*ctx, *sig.ret);
		ctx->pre->push_back(from_core(sst_fn("", lhs(t), std::move(call))));
		return EV{exp_var(t), *sig.ret};
	}

	SubProgCall proc_call(const PExpr &p, Ctx &ctx) {
		const PExpr &head = p.k == PExpr::K::Apply ? p.args[0] : p;
		if (head.k != PExpr::K::Name)
			fail_at(p.at, "expected a procedure call");
		const Sym *s = lookup(head.text);
		if (!s || s->k != Sym::K::Sub)
			fail_at(p.at, "\"" + head.text + "\" is not a procedure");
		const SubSig &sig = subs_[s->sub];
		if (sig.is_function)
			fail_at(p.at, "function \"" + sig.name + "\" called as a statement");
		static const std::vector<Assoc> none;
		return SubProgCall{sig.name, call_args(p.at, sig, p.k == PExpr::K::Apply ? p.assocs : none, ctx), std::nullopt};
	}

	// --- names --------------------------------------------------------------------------

	struct NRefX : NRef {};

	NRef object_ref(const Sym &s) {
		NRef r;
		r.k = NRef::K::Object;
		r.base = s.k;
		r.name = s.qname;
		r.type = s.type;
		r.read_only = s.read_only;
		return r;
	}

	Expression object_expr(const NRef &r) {
		Expression base = r.base == Sym::K::Signal ? exp_sig(r.name) : r.base == Sym::K::Port ? exp_prt(r.name)
				: exp_var(r.name);
		if (!r.sel)
			return base;
		if (r.index)
			return exp_nth(std::move(base), r.sel->lo);
		return exp_sl(std::move(base), r.sel->lo, slice_len(*r.sel));
	}

	static Expression slice_len(const DiscreteRange &r) {
		if (auto d = static_diff(r.hi, r.lo))
			return con_int(*d + 1);
		return bexpa(bexpa(r.hi, Op::Sub, r.lo), Op::Add, con_int(1));
	}

	EV as_value(const SourceSpan &at, const NRef &r) {
		switch (r.k) {
		case NRef::K::Object: return EV{object_expr(r), r.type};
		case NRef::K::Value: return EV{r.e, r.type};
		case NRef::K::Sub: fail_at(at, "\"" + subs_[r.sym->sub].name + "\" needs arguments");
		case NRef::K::Type: fail_at(at, "type name used as a value");
		case NRef::K::Builtin: fail_at(at, "\"" + r.builtin + "\" needs arguments");
		}
		fail_at(at, "bad name");
	}

	static bool is_builtin(const std::string &n) {
		static const std::set<std::string> b = {"to_integer", "to_unsigned", "to_signed", "resize", "rising_edge",
			"falling_edge", "shift_left", "shift_right", "rotate_left", "rotate_right", "conv_integer",
			"conv_std_logic_vector", "std_match"};
		return b.count(n) > 0;
	}

	NRef name_ref(const PExpr &p, Ctx *ctx) {
		switch (p.k) {
		case PExpr::K::Name: {
			const Sym *s = lookup(p.text);
			if (!s) {
				if (is_builtin(p.text)) {
					NRef r;
					r.k = NRef::K::Builtin;
					r.builtin = p.text;
					return r;
				}
				fail_at(p.at, "unknown name \"" + p.text + "\"");
			}
			NRef r;
			switch (s->k) {
			case Sym::K::Signal:
			case Sym::K::Port:
			case Sym::K::Var: return object_ref(*s);
			case Sym::K::Const:
			case Sym::K::EnumLit:
				r.k = NRef::K::Value;
				r.e = exp_con(s->value);
				r.type = s->type;
				return r;
			case Sym::K::GenParam:
				r.k = NRef::K::Value;
				r.e = exp_var(s->qname);
				r.type = s->type;
				return r;
			case Sym::K::Sub:
				r.k = NRef::K::Sub;
				r.sym = s;
				return r;
			case Sym::K::Type:
				r.k = NRef::K::Type;
				r.sym = s;
				r.type = s->type;
				return r;
			case Sym::K::Component: fail_at(p.at, "component \"" + p.text + "\" used as a value");
			}
			break;
		}
		case PExpr::K::Select: {
			NRef r = name_ref(p.args[0], ctx);
			if (r.type.kind != TypeDesc::Kind::Record || (r.k != NRef::K::Object && r.k != NRef::K::Value))
				fail_at(p.at, "\"." + p.text + "\" applied to a value that is not a record");
			auto it = std::find_if(r.type.fields.begin(), r.type.fields.end(), [&](const auto &f) { return f.first == p.text; });
			if (it == r.type.fields.end())
				fail_at(p.at, "record type " + to_string(r.type) + " has no field \"" + p.text + "\"");
			TypeDesc ft = it->second;
			if (r.k == NRef::K::Object && !r.sel) {
				r.name += "." + p.text;
				r.type = ft;
				return r;
			}
			if (r.k == NRef::K::Value) {
				if (auto c = const_eval(r.e)) {
					r.e = exp_con(c->members()[static_cast<std::size_t>(it - r.type.fields.begin())]);
					r.type = ft;
					return r;
				}
			}
			fail_at(p.at, "field selection is only supported on record objects");
		}
		case PExpr::K::Apply: return apply(p, ctx);
		case PExpr::K::Attr: return attribute(p, ctx);
		default: break;
		}
		NRef r;
		r.k = NRef::K::Value;
		EV v = expr(p, nullptr, ctx);
		r.e = v.e;
		r.type = v.t;
		return r;
	}

	NRef value_ref(EV v) {
		NRef r;
		r.k = NRef::K::Value;
		r.e = std::move(v.e);
		r.type = std::move(v.t);
		return r;
	}

	const PExpr &single_arg(const PExpr &p, const char *what) {
		if (p.assocs.size() != 1 || !p.assocs[0].choices.empty() || p.assocs[0].others)
			fail_at(p.at, std::string(what) + " takes one positional argument");
		return p.assocs[0].value;
	}

	NRef apply(const PExpr &p, Ctx *ctx) {
		NRef head = name_ref(p.args[0], ctx);
		switch (head.k) {
		case NRef::K::Sub: return value_ref(fn_call(p.at, subs_[head.sym->sub], p.assocs, ctx));
		case NRef::K::Builtin: return value_ref(builtin(p, head.builtin, ctx));
		case NRef::K::Type: {
			// Type conversion between closely related vector types.
			const PExpr &a = single_arg(p, "a type conversion");
			EV v = expr(a, nullptr, ctx);
			const TypeDesc &to = head.type;
			if (is_vec(to) && is_vec(v.t) && to.scalar == v.t.scalar) {
				TypeDesc t = TypeDesc::vector_of(v.t.scalar, v.t.downto, v.t.left, v.t.right, to.name, to.numeric);
				return value_ref(EV{v.e, t});
			}
			if (to.kind == TypeDesc::Kind::Scalar && v.t.kind == TypeDesc::Kind::Scalar && to.scalar == v.t.scalar)
				return value_ref(EV{v.e, to});
			fail_at(p.at, "unsupported conversion from " + to_string(v.t) + " to " + to_string(to));
		}
		default: break;
		}
		if (!is_vec(head.type))
			fail_at(p.at, "indexing a value of type " + to_string(head.type));
		const PExpr &a = single_arg(p, "an index");
		TypeDesc elem = TypeDesc::scalar_of(head.type.scalar,
				head.type.scalar == ScalarKind::Logic ? (resolved_type(head.type) ? "std_logic" : "std_ulogic")
				: std::string(kind_name(head.type.scalar)));
		if (head.type.scalar == ScalarKind::Bit)
			elem.name = "bit";
		DiscreteRange sel;
		bool index = false;
		TypeDesc result;
		if (a.k == PExpr::K::Range || (a.k == PExpr::K::Attr && (a.text == "range" || a.text == "reverse_range"))) {
			if (a.k == PExpr::K::Attr) {
				Bounds b = const_range(a);
				std::int64_t lo = b.downto ? b.right : b.left, hi = b.downto ? b.left : b.right;
				sel = DiscreteRange{con_int(lo), con_int(hi), b.downto};
			} else {
				TypeDesc it = int_type();
				EV l = expr(a.args[0], &it, ctx), r = expr(a.args[1], &it, ctx);
				if (!is_scalar(l.t, ScalarKind::Integer) || !is_scalar(r.t, ScalarKind::Integer))
					fail_at(a.at, "slice bounds must be integers");
				bool down = a.text == "downto";
				if (down != head.type.downto)
					fail_at(a.at, "slice direction does not match the direction of " + to_string(head.type));
				sel = down ? DiscreteRange{r.e, l.e, true} : DiscreteRange{l.e, r.e, false};
			}
			auto d = static_diff(sel.hi, sel.lo);
			if (!d)
				fail_at(a.at, "slice length must be static");
			if (*d < 0)
				fail_at(a.at, "null slices are not supported");
			std::int64_t lo = 0;
			if (auto c = const_eval(sel.lo))
				lo = c->as_int();
			result = TypeDesc::vector_of(head.type.scalar, head.type.downto, head.type.downto ? lo + *d : lo,
					head.type.downto ? lo : lo + *d, head.type.name, head.type.numeric);
			if (auto c = const_eval(sel.lo); c && (c->as_int() < head.type.low() || c->as_int() + *d > head.type.high()))
				fail_at(a.at, "slice out of range for " + to_string(head.type));
		} else {
			TypeDesc it = int_type();
			EV i = expr(a, &it, ctx);
			if (!is_scalar(i.t, ScalarKind::Integer))
				fail_at(a.at, "index must be an integer, got " + to_string(i.t));
			if (auto c = const_eval(i.e); c && (c->as_int() < head.type.low() || c->as_int() > head.type.high()))
				fail_at(a.at, "index " + std::to_string(c->as_int()) + " out of range for " + to_string(head.type));
			sel = DiscreteRange{i.e, i.e, head.type.downto};
			index = true;
			result = elem;
		}
		if (head.k == NRef::K::Object && !head.sel) {
			head.base_type = head.type;
			head.sel = std::move(sel);
			head.index = index;
			head.type = result;
			return head;
		}
		EV base = as_value(p.at, head);
		Expression e = index ? exp_nth(base.e, sel.lo) : exp_sl(base.e, sel.lo, slice_len(sel));
		return value_ref(EV{std::move(e), result});
	}

	NRef attribute(const PExpr &p, Ctx *ctx) {
		const std::string &a = p.text;
		if (a == "event") {
			NRef r = name_ref(p.args[0], ctx);
			if (r.k != NRef::K::Object || r.base == Sym::K::Var)
				fail_at(p.at, "'event needs a signal");
			// Cycle-based evaluation: a process only runs when something in its
			// sensitivity list changed.
			return value_ref(EV{exp_con(Val::boolean(true)), bool_type()});
		}
		if (a == "length" || a == "left" || a == "right" || a == "high" || a == "low") {
			NRef r = name_ref(p.args[0], ctx);
			if (r.k == NRef::K::Sub || r.k == NRef::K::Builtin)
				fail_at(p.at, "'" + a + " of a subprogram");
			Bounds b = bounds_of(p.at, r.type);
			std::int64_t lo = b.downto ? b.right : b.left, hi = b.downto ? b.left : b.right;
			std::int64_t v = a == "length" ? std::max<std::int64_t>(0, hi - lo + 1) : a == "left" ? b.left
					: a == "right" ? b.right : a == "high" ? hi : lo;
			return value_ref(EV{con_int(v), int_type()});
		}
		if (a == "range" || a == "reverse_range")
			fail_at(p.at, "'" + a + " is only allowed in a range position");
		fail_at(p.at, "attribute '" + a + " is not supported");
	}

	Numeric numeric_of(const TypeDesc &t) const {
		if (!is_vec(t))
			return Numeric::None;
		if (t.numeric != Numeric::None)
			return t.numeric;
		return t.scalar == ScalarKind::Character ? Numeric::None : default_numeric_;
	}

	std::int64_t const_arg(const PExpr &p) { return const_int(p); }

	EV builtin(const PExpr &p, const std::string &n, Ctx *ctx) {
		std::vector<const PExpr *> args;
		for (const auto &a : p.assocs) {
			if (!a.choices.empty() || a.others)
				fail_at(p.at, "\"" + n + "\" takes positional arguments");
			args.push_back(&a.value);
		}
		auto need = [&](std::size_t k) {
			if (args.size() != k)
				fail_at(p.at, "\"" + n + "\" takes " + std::to_string(k) + " argument" + (k == 1 ? "" : "s"));
		};
		auto vec_arg = [&](const PExpr &a) {
			EV v = expr(a, nullptr, ctx);
			if (!is_vec(v.t) || v.t.scalar == ScalarKind::Character)
				fail_at(a.at, "\"" + n + "\" needs a bit or logic vector, got " + to_string(v.t));
			return v;
		};
		if (n == "to_integer" || n == "conv_integer") {
			need(1);
			EV v = vec_arg(*args[0]);
			Numeric m = numeric_of(v.t);
			if (m == Numeric::None)
				m = n == "conv_integer" ? Numeric::Unsigned : Numeric::None;
			if (m == Numeric::None)
				fail_at(p.at, "to_integer needs an unsigned or signed operand, got " + to_string(v.t));
			return EV{uexp(Op::ToInteger, v.e, m), int_type()};
		}
		if (n == "to_unsigned" || n == "to_signed" || n == "conv_std_logic_vector") {
			need(2);
			TypeDesc it = int_type();
			EV v = expr(*args[0], &it, ctx);
			if (!is_scalar(v.t, ScalarKind::Integer))
				fail_at(args[0]->at, "\"" + n + "\" needs an integer, got " + to_string(v.t));
			std::int64_t w = const_arg(*args[1]);
			if (w <= 0)
				fail_at(args[1]->at, "width must be positive");
			Numeric m = n == "to_unsigned" ? Numeric::Unsigned : Numeric::Signed;
			std::string tn = n == "to_unsigned" ? "unsigned" : n == "to_signed" ? "signed" : "std_logic_vector";
			return EV{uexp(Op::ToVector, v.e, m, w),
					TypeDesc::vector_of(ScalarKind::Logic, true, w - 1, 0, tn, n == "conv_std_logic_vector" ? Numeric::None : m)};
		}
		if (n == "resize") {
			need(2);
			EV v = vec_arg(*args[0]);
			std::int64_t w = const_arg(*args[1]);
			if (w <= 0)
				fail_at(args[1]->at, "width must be positive");
			Numeric m = numeric_of(v.t);
			if (m == Numeric::None)
				fail_at(p.at, "resize needs an unsigned or signed operand");
			return EV{uexp(Op::Resize, v.e, m, w),
					TypeDesc::vector_of(v.t.scalar, true, w - 1, 0, v.t.name, v.t.numeric)};
		}
		if (n == "rising_edge" || n == "falling_edge") {
			need(1);
			NRef r = name_ref(*args[0], ctx);
			if (r.k != NRef::K::Object || r.base == Sym::K::Var || r.type.kind != TypeDesc::Kind::Scalar ||
					(r.type.scalar != ScalarKind::Logic && r.type.scalar != ScalarKind::Bit))
				fail_at(p.at, "\"" + n + "\" needs a bit or std_logic signal");
			bool rise = n == "rising_edge";
			Val lvl = r.type.scalar == ScalarKind::Bit ? Val::bit(rise) : Val::logic(rise ? Logic9::L1 : Logic9::L0);
			return EV{bexpr(object_expr(r), Op::Eq, exp_con(lvl)), bool_type()};
		}
		if (n == "shift_left" || n == "shift_right" || n == "rotate_left" || n == "rotate_right") {
			need(2);
			EV v = vec_arg(*args[0]);
			TypeDesc it = int_type();
			EV k = expr(*args[1], &it, ctx);
			if (!is_scalar(k.t, ScalarKind::Integer))
				fail_at(args[1]->at, "shift amount must be an integer");
			Op op = n == "shift_left" ? Op::Sll : n == "rotate_left" ? Op::Rol : n == "rotate_right" ? Op::Ror
					: numeric_of(v.t) == Numeric::Signed ? Op::Sra : Op::Srl;
			return EV{bexps(v.e, op, k.e), v.t};
		}
		fail_at(p.at, "builtin \"" + n + "\" is not supported");
	}

	// --- expressions ------------------------------------------------------------------

	static bool needs_context(const PExpr &p) {
		return p.k == PExpr::K::Char || p.k == PExpr::K::Str || p.k == PExpr::K::BitStr || p.k == PExpr::K::Aggregate;
	}

	// Literal character typed by a hint (scalar, or vector element).
	EV char_lit(const PExpr &p, const TypeDesc *hint) {
		char c = p.text[0];
		ScalarKind k;
		if (hint && char_kind(hint->scalar) && hint->kind != TypeDesc::Kind::Record)
			k = hint->scalar;
		else
			k = logic9_from_char(c) ? ScalarKind::Logic : ScalarKind::Character;
		TypeDesc t = TypeDesc::scalar_of(k, k == ScalarKind::Logic ? "std_logic" : k == ScalarKind::Bit ? "bit" : "character");
		if (hint && hint->kind == TypeDesc::Kind::Scalar && hint->scalar == k)
			t = *hint;
		switch (k) {
		case ScalarKind::Bit:
			if (c != '0' && c != '1')
				fail_at(p.at, std::string("'") + c + "' is not a bit");
			return EV{exp_con(Val::bit(c == '1')), t};
		case ScalarKind::Logic: {
			auto l = logic9_from_char(c);
			if (!l)
				fail_at(p.at, std::string("'") + c + "' is not a std_logic value");
			return EV{exp_con(Val::logic(*l)), t};
		}
		default: return EV{exp_con(Val::character(c)), t};
		}
	}

	EV str_lit(const PExpr &p, const TypeDesc *hint) {
		const std::string &s = p.text;
		ScalarKind k;
		TypeDesc base;
		if (hint && (is_vec(*hint) || (hint->kind == TypeDesc::Kind::Scalar && char_kind(hint->scalar)))) {
			k = hint->scalar;
			if (is_vec(*hint))
				base = *hint;
		} else {
			bool logic = std::all_of(s.begin(), s.end(), [](char c) { return logic9_from_char(c).has_value(); });
			k = logic ? ScalarKind::Logic : ScalarKind::Character;
		}
		auto n = static_cast<std::int64_t>(s.size());
		if (n == 0)
			fail_at(p.at, "empty string literals are not supported");
		TypeDesc t;
		if (!base.name.empty() && base.length() == n)
			t = base;
		else if (!base.name.empty())
			t = TypeDesc::vector_of(k, base.downto, base.downto ? n - 1 : 0, base.downto ? 0 : n - 1, base.name, base.numeric);
		else if (k == ScalarKind::Character)
			t = TypeDesc::vector_of(k, false, 1, n, "string");
		else
			t = TypeDesc::vector_of(k, true, n - 1, 0, k == ScalarKind::Bit ? "bit_vector" : "std_logic_vector");
		try {
			return EV{exp_con(Val::vector_from_string(t.vec_tag(), t.left, k, s)), t};
		} catch (const SimError &) {
			fail_at(p.at, "\"" + s + "\" is not a valid " + to_string(t) + " literal");
		}
	}

	// Aggregates need the target type. Vector aggregates must be constant
	// unless they are positional (then they become a concatenation).
	Expression aggregate(const PExpr &p, const TypeDesc &t, Ctx *ctx) {
		if (t.kind == TypeDesc::Kind::Record) {
			std::vector<Expression> ms(t.fields.size());
			std::vector<bool> set(t.fields.size(), false);
			std::size_t pos = 0;
			for (const auto &a : p.assocs) {
				std::vector<std::size_t> targets;
				if (a.others) {
					for (std::size_t k = 0; k < t.fields.size(); ++k)
						if (!set[k])
							targets.push_back(k);
				} else if (a.choices.empty()) {
					targets.push_back(pos++);
				} else {
					for (const auto &c : a.choices) {
						if (c.k != PExpr::K::Name)
							fail_at(c.at, "record aggregate choices must be field names");
						auto it = std::find_if(t.fields.begin(), t.fields.end(), [&](const auto &f) { return f.first == c.text; });
						if (it == t.fields.end())
							fail_at(c.at, "record type " + to_string(t) + " has no field \"" + c.text + "\"");
						targets.push_back(static_cast<std::size_t>(it - t.fields.begin()));
					}
				}
				for (auto k : targets) {
					if (k >= t.fields.size() || set[k])
						fail_at(a.value.at, "record aggregate sets a field twice or has too many elements");
					const TypeDesc &ft = t.fields[k].second;
					EV v = a.value.k == PExpr::K::Aggregate ? EV{aggregate(a.value, ft, ctx), ft} : expr(a.value, &ft, ctx);
					check_assignable(a.value.at, ft, v.t, "field " + t.fields[k].first);
					ms[k] = v.e;
					set[k] = true;
				}
			}
			for (std::size_t k = 0; k < set.size(); ++k)
				if (!set[k])
					fail_at(p.at, "record aggregate misses field \"" + t.fields[k].first + "\"");
			std::vector<std::string> names;
			for (const auto &f : t.fields)
				names.push_back(f.first);
			return exp_r(std::move(names), std::move(ms));
		}
		if (!is_vec(t))
			fail_at(p.at, "aggregate for non-composite type " + to_string(t));
		TypeDesc et = TypeDesc::scalar_of(t.scalar);
		std::vector<std::optional<Expression>> slots(static_cast<std::size_t>(t.length()));
		auto slot_of = [&](std::int64_t idx) -> std::size_t {
			if (idx < t.low() || idx > t.high())
				fail_at(p.at, "aggregate index " + std::to_string(idx) + " out of range for " + to_string(t));
			return static_cast<std::size_t>(t.downto ? t.left - idx : idx - t.left);
		};
		std::size_t pos = 0;
		std::optional<Expression> others;
		bool positional = false;
		for (const auto &a : p.assocs) {
			EV v = expr(a.value, &et, ctx);
			check_assignable(a.value.at, et, v.t, "aggregate element");
			if (a.others) {
				others = v.e;
			} else if (a.choices.empty()) {
				positional = true;
				if (pos >= slots.size())
					fail_at(a.value.at, "too many elements in aggregate for " + to_string(t));
				slots[pos++] = v.e;
			} else {
				for (const auto &c : a.choices) {
					if (c.k == PExpr::K::Range) {
						Bounds b = const_range(c);
						std::int64_t lo = std::min(b.left, b.right), hi = std::max(b.left, b.right);
						for (std::int64_t i = lo; i <= hi; ++i)
							slots[slot_of(i)] = v.e;
					} else {
						slots[slot_of(const_int(c))] = v.e;
					}
				}
			}
		}
		for (auto &s : slots) {
			if (!s) {
				if (!others)
					fail_at(p.at, "aggregate does not cover every element of " + to_string(t));
				s = others;
			}
		}
		std::vector<Scalar> elems;
		bool constant = true;
		for (const auto &s : slots) {
			auto c = const_eval(*s);
			if (!c) {
				constant = false;
				break;
			}
			elems.push_back(c->scalar());
		}
		if (constant)
			return exp_con(Val::vector(t.vec_tag(), t.left, t.scalar, std::move(elems)));
		if (!positional && others)
			fail_at(p.at, "non-constant aggregate with named choices is not supported");
		auto wrap = [&](const Expression &x) { return t.downto ? exp_trl(x) : exp_tl(x); };
		Expression e = wrap(*slots[0]);
		for (std::size_t k = 1; k < slots.size(); ++k)
			e = bexpa(std::move(e), Op::Concat, wrap(*slots[k]));
		return e;
	}

	static Val sample(const TypeDesc &t) {
		switch (t.kind) {
		case TypeDesc::Kind::Scalar:
			switch (t.scalar) {
			case ScalarKind::Integer: return Val::integer(1);
			case ScalarKind::Real: return Val::real(1.0);
			case ScalarKind::Bit: return Val::bit(true);
			case ScalarKind::Logic: return Val::logic(Logic9::L1);
			case ScalarKind::Boolean: return Val::boolean(true);
			case ScalarKind::Character: return Val::character('a');
			case ScalarKind::Time: return Val::time(1);
			}
			break;
		case TypeDesc::Kind::Vector: {
			Scalar e = t.scalar == ScalarKind::Bit ? Scalar{Bit{true}} : t.scalar == ScalarKind::Logic ? Scalar{Logic9::L1}
					: Scalar{'a'};
			return Val::vector(t.vec_tag(), t.left, t.scalar, std::vector<Scalar>(static_cast<std::size_t>(t.length()), e));
		}
		case TypeDesc::Kind::Record: return default_value(t);
		}
		return Val();
	}

	static Op binop(const std::string &s) {
		static const std::map<std::string, Op> m = {{"and", Op::And}, {"or", Op::Or}, {"nand", Op::Nand},
			{"nor", Op::Nor}, {"xor", Op::Xor}, {"xnor", Op::Xnor}, {"=", Op::Eq}, {"/=", Op::Ne}, {"<", Op::Lt},
			{"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}, {"sll", Op::Sll}, {"srl", Op::Srl}, {"sla", Op::Sla},
			{"sra", Op::Sra}, {"rol", Op::Rol}, {"ror", Op::Ror}, {"+", Op::Add}, {"-", Op::Sub}, {"*", Op::Mul},
			{"/", Op::Div}, {"mod", Op::Mod}, {"rem", Op::Rem}, {"**", Op::Pow}, {"&", Op::Concat}};
		return m.at(s);
	}

	// Hint for an operand that needs context, derived from the other operand.
	static TypeDesc context_from(const TypeDesc &other, Op op) {
		if (op == Op::Concat && other.kind == TypeDesc::Kind::Scalar)
			return TypeDesc::vector_of(other.scalar, true, 0, 0, "");
		return other;
	}

	EV binary(const PExpr &p, const TypeDesc *hint, Ctx *ctx) {
		Op op = binop(p.text);
		const PExpr &pa = p.args[0], &pb = p.args[1];
		bool rel = class_of(op) == OpClass::Relational;
		const TypeDesc *outer = rel ? nullptr : hint;
		EV a, b;
		if (op == Op::Concat) {
			// Operands of & are typed by the other operand or by the element
			// type of the result.
			TypeDesc eh;
			const TypeDesc *h = nullptr;
			if (hint && is_vec(*hint)) {
				eh = *hint;
				h = &eh;
			}
			auto side = [&](const PExpr &x, const EV *other) {
				if (!needs_context(x))
					return expr(x, h, ctx);
				TypeDesc ctxt = other ? context_from(other->t, op) : (h ? *h : TypeDesc{});
				if (!other && !h)
					return expr(x, nullptr, ctx);
				if (x.k == PExpr::K::Char)
					ctxt = TypeDesc::scalar_of(ctxt.scalar);
				return x.k == PExpr::K::Aggregate ? expr(x, nullptr, ctx) : expr(x, &ctxt, ctx);
			};
			if (needs_context(pa) && !needs_context(pb)) {
				b = side(pb, nullptr);
				a = side(pa, &b);
			} else {
				a = side(pa, nullptr);
				b = side(pb, &a);
			}
		} else if (needs_context(pa) && !needs_context(pb)) {
			b = expr(pb, outer, ctx);
			a = pa.k == PExpr::K::Aggregate ? EV{aggregate(pa, b.t, ctx), b.t} : expr(pa, &b.t, ctx);
		} else {
			a = expr(pa, outer, ctx);
			b = pb.k == PExpr::K::Aggregate ? EV{aggregate(pb, a.t, ctx), a.t} : expr(pb, &a.t, ctx);
		}
		Numeric na = numeric_of(a.t), nb = numeric_of(b.t);
		if (na != Numeric::None && nb != Numeric::None && na != nb)
			fail_at(p.at, "operator \"" + p.text + "\" mixes signed and unsigned operands");
		Numeric n = na != Numeric::None ? na : nb;
		OpClass cls = class_of(op);
		if (cls == OpClass::Logical || cls == OpClass::Shift || op == Op::Concat)
			n = Numeric::None;
		if (cls == OpClass::Relational && (op == Op::Eq || op == Op::Ne) && is_vec(a.t) && is_vec(b.t) &&
				a.t.numeric == Numeric::None && b.t.numeric == Numeric::None)
			n = Numeric::None;
		if (cls == OpClass::Shift && (op == Op::Sla || op == Op::Sra))
			n = Numeric::None;
		if (op == Op::Concat) {
			// Both operands become vectors of the result's direction.
			bool down = is_vec(a.t) ? a.t.downto : is_vec(b.t) ? b.t.downto : !hint || !is_vec(*hint) || hint->downto;
			auto fit = [&](EV &x) {
				if (is_vec(x.t) && x.t.downto == down)
					return;
				if (x.t.kind == TypeDesc::Kind::Record)
					fail_at(p.at, "\"&\" on a record");
				std::int64_t len = is_vec(x.t) ? x.t.length() : 1;
				x.e = down ? exp_trl(x.e) : exp_tl(x.e);
				x.t = TypeDesc::vector_of(x.t.scalar, down, down ? len - 1 : 0, down ? 0 : len - 1,
						is_vec(x.t) ? x.t.name : x.t.scalar == ScalarKind::Bit ? "bit_vector"
						: x.t.scalar == ScalarKind::Character ? "string" : "std_logic_vector", x.t.numeric);
			};
			fit(a);
			fit(b);
		}
		Expression e = bexp(a.e, op, b.e, n);
		// Result type: evaluate the operator on sample values of the operand
		// types, so that widths agree with the evaluator.
		Val r;
		try {
			r = eval_binop(e.op, sample(a.t), sample(b.t));
		} catch (const SimError &err) {
			if (err.kind() != ErrorKind::DivByZero && err.kind() != ErrorKind::Overflow)
				fail_at(p.at, std::string(err.what()) + " (operand types " + to_string(a.t) + ", " + to_string(b.t) + ")");
			r = sample(a.t);
		}
		return EV{std::move(e), type_of_result(r, a.t, b.t, cls)};
	}

	static TypeDesc type_of_result(const Val &r, const TypeDesc &a, const TypeDesc &b, OpClass cls) {
		if (r.is_scalar()) {
			if (cls == OpClass::Relational)
				return bool_type();
			const TypeDesc &src = a.kind == TypeDesc::Kind::Scalar && a.scalar == r.scalar_kind() ? a : b;
			if (src.kind == TypeDesc::Kind::Scalar && src.scalar == r.scalar_kind()) {
				TypeDesc t = src;
				if (t.scalar == ScalarKind::Integer) {
					t.range_lo.reset();
					t.range_hi.reset();
					t.name = "integer";
				}
				return t;
			}
			return TypeDesc::scalar_of(r.scalar_kind());
		}
		const TypeDesc &src = is_vec(a) ? a : b;
		std::int64_t right = r.tag() == ValTag::VecDownto ? r.left() - (r.length() - 1) : r.left() + (r.length() - 1);
		return TypeDesc::vector_of(r.elem_kind(), r.tag() == ValTag::VecDownto, r.left(), right,
				is_vec(src) ? src.name : "std_logic_vector", is_vec(src) ? src.numeric : Numeric::None);
	}

	EV unary(const PExpr &p, const TypeDesc *hint, Ctx *ctx) {
		const PExpr &pa = p.args[0];
		if (p.text == "-" && (pa.k == PExpr::K::Int || pa.k == PExpr::K::Real)) {
			if (pa.k == PExpr::K::Int)
				return EV{con_int(-pa.ival), int_type()};
			return EV{exp_con(Val::real(-pa.rval)), TypeDesc::scalar_of(ScalarKind::Real, "real")};
		}
		EV a = expr(pa, hint, ctx);
		Op op = p.text == "-" ? Op::Neg : p.text == "abs" ? Op::Abs : Op::Not;
		Numeric n = op == Op::Not ? Numeric::None : numeric_of(a.t);
		Expression e = uexp(op, a.e, n);
		try {
			eval_unop(e.op, sample(a.t));
		} catch (const SimError &err) {
			if (err.kind() != ErrorKind::Overflow)
				fail_at(p.at, std::string(err.what()) + " (operand type " + to_string(a.t) + ")");
		}
		TypeDesc t = a.t;
		if (t.kind == TypeDesc::Kind::Scalar && t.scalar == ScalarKind::Integer) {
			t.range_lo.reset();
			t.range_hi.reset();
			t.name = "integer";
		}
		return EV{std::move(e), t};
	}

	EV expr(const PExpr &p, const TypeDesc *hint, Ctx *ctx) {
		switch (p.k) {
		case PExpr::K::Int: return EV{con_int(p.ival), int_type()};
		case PExpr::K::Real: return EV{exp_con(Val::real(p.rval)), TypeDesc::scalar_of(ScalarKind::Real, "real")};
		case PExpr::K::Char: return char_lit(p, hint);
		case PExpr::K::Str:
		case PExpr::K::BitStr: return str_lit(p, hint);
		case PExpr::K::Unary: return unary(p, hint, ctx);
		case PExpr::K::Binary: return binary(p, hint, ctx);
		case PExpr::K::Aggregate:
			if (!hint || (hint->kind != TypeDesc::Kind::Record && !is_vec(*hint)))
				fail_at(p.at, "aggregate needs a composite type from its context");
			return EV{aggregate(p, *hint, ctx), *hint};
		case PExpr::K::Range: fail_at(p.at, "range used as a value");
		case PExpr::K::Open: fail_at(p.at, "'open' used as a value");
		default: break;
		}
		NRef r = name_ref(p, ctx);
		return as_value(p.at, r);
	}

	std::string path_;
	std::vector<Diagnostic> &diags_;
	Numeric default_numeric_ = Numeric::None;
	std::map<std::string, std::vector<std::string>> entity_ports_;
	std::vector<std::map<std::string, Sym>> scopes_;
	std::vector<SubSig> subs_;
	std::map<std::string, int> temp_counter_;
	int auto_names_ = 0;
	ComplexDesign *cd_ = nullptr;
};

} // namespace

ParseResult parse_design(const SourceUnit &src) {
	ParseResult r;
	syntax::PFile f = syntax::parse_file(src.path, src.text, r.diags);
	Elab el(src.path, r.diags);
	r.designs = el.run(f);
	return r;
}

} // namespace vhdlkern
