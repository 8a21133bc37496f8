#pragma once

// Core abstract syntax: expressions, sequential statements, processes,
// subprograms and the design description (environment, resolution
// functions, processes, subprograms). Constructor helpers carry the
// constructor names of the formal model (sst_sa, exp_nth, cst_ps, ...).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vhdlkern/diagnostic.hpp"
#include "vhdlkern/types.hpp"
#include "vhdlkern/value.hpp"

namespace vhdlkern {

enum class ExprKind : std::uint8_t {
	Unary,      // uexp
	Logical,    // bexpl
	Relational, // bexpr
	Shift,      // bexps
	Arith,      // bexpa
	Sig,        // exp_sig
	Prt,        // exp_prt
	Var,        // exp_var
	Con,        // exp_con
	Nth,        // exp_nth
	Slice,      // exp_sl
	ToList,     // exp_tl
	ToRevList,  // exp_trl
	Record,     // exp_r
};

struct Expression {
	ExprKind kind = ExprKind::Con;
	OpKind op;
	std::string name;
	Val value;
	std::vector<Expression> args;
	/// Field names of a record aggregate, aligned with args.
	std::vector<std::string> fields;

	// Resolved by link(): leaf slot, or record group slot. Not part of the
	// structure and ignored by ==.
	std::int32_t slot = -1;
	std::int32_t group = -1;

	bool operator==(const Expression &o) const {
		return kind == o.kind && op == o.op && name == o.name && value == o.value && args == o.args &&
				fields == o.fields;
	}
};

Expression uexp(Op op, Expression e, Numeric n = Numeric::None, std::int64_t width = 0);
Expression bexp(Expression a, Op op, Expression b, Numeric n = Numeric::None);
inline Expression bexpl(Expression a, Op op, Expression b) { return bexp(std::move(a), op, std::move(b)); }
inline Expression bexpr(Expression a, Op op, Expression b, Numeric n = Numeric::None) {
	return bexp(std::move(a), op, std::move(b), n);
}
inline Expression bexps(Expression a, Op op, Expression b) { return bexp(std::move(a), op, std::move(b)); }
inline Expression bexpa(Expression a, Op op, Expression b, Numeric n = Numeric::None) {
	return bexp(std::move(a), op, std::move(b), n);
}
Expression exp_sig(std::string name);
Expression exp_prt(std::string name);
Expression exp_var(std::string name);
Expression exp_con(Val v);
Expression exp_nth(Expression v, Expression i);
Expression exp_sl(Expression v, Expression start, Expression len);
Expression exp_tl(Expression e);
Expression exp_trl(Expression e);
Expression exp_r(std::vector<std::string> fields, std::vector<Expression> members);

enum class SpKind : std::uint8_t { Signal, Port };
enum class Mode : std::uint8_t { In, Out, Inout, Internal };

std::string_view mode_name(Mode m);

struct SigPrt {
	SpKind kind = SpKind::Signal;
	/// Fully qualified leaf name, e.g. "r.state".
	std::string name;
	Mode mode = Mode::Internal;
	TypeDesc type;
	Val init;
	/// An in port with an explicit default may be left open in a port map.
	bool has_default = false;

	bool operator==(const SigPrt &) const = default;
};

struct VarDecl {
	std::string name;
	TypeDesc type;
	Val init;

	bool operator==(const VarDecl &) const = default;
};

/// Record-shaped declaration tree: a leaf or a named group of members.
/// Members carry fully qualified names; a member's field name is the
/// component after the last '.'.
template <class Leaf>
struct NameTree {
	std::string name;
	std::optional<Leaf> leaf;
	std::vector<NameTree> members;

	bool is_leaf() const { return leaf.has_value(); }
	bool operator==(const NameTree &) const = default;
};

using Spl = NameTree<SigPrt>;
using VarTree = NameTree<VarDecl>;

Spl spl_leaf(SigPrt sp);
Spl spnl(std::string name, std::vector<Spl> members);

/// Left-to-right leaves of a record tree.
std::vector<SigPrt> flatten_spl(const Spl &s);
std::vector<VarDecl> flatten_vars(const VarTree &t);

/// Follows field names from s; throws SimError(Config) on an unknown field.
const Spl &record_field(const Spl &s, const std::vector<std::string> &path);

std::string_view field_of(std::string_view qualified);

struct DiscreteRange {
	Expression lo;
	Expression hi;
	bool downto = false;

	bool operator==(const DiscreteRange &) const = default;
};

/// sp_lhs / v_lhs / v_clhs: a (possibly record) name with an optional range.
struct Target {
	std::string name;
	std::optional<DiscreteRange> range;

	std::int32_t slot = -1;
	std::int32_t group = -1;

	bool operator==(const Target &o) const { return name == o.name && range == o.range; }
};

/// rhs_e / rhs_o.
struct AsmtRhs {
	bool others = false;
	Expression expr;

	bool operator==(const AsmtRhs &) const = default;
};

inline AsmtRhs rhs_e(Expression e) { return AsmtRhs{false, std::move(e)}; }
inline AsmtRhs rhs_o(Expression e) { return AsmtRhs{true, std::move(e)}; }

struct SubProgCall {
	std::string callee;
	std::vector<Target> args;
	std::optional<TypeDesc> ret_type;

	bool operator==(const SubProgCall &) const = default;
};

enum class StmtKind : std::uint8_t {
	SignalAssign, // sst_sa
	VarAssign,    // sst_va
	If,           // sst_if
	Loop,         // sst_l
	FnCall,       // sst_fn
	Return,       // sst_rt
	ProcCall,     // sst_pc
	Next,         // sst_n
	Exit,         // sst_e
	Null,         // sst_nl
};

struct SeqStmt {
	StmtKind kind = StmtKind::Null;
	std::string name;
	Target target;        // sa, va, fn
	AsmtRhs rhs;          // sa, va, rt
	Expression cond;      // if, l, n, e
	std::vector<SeqStmt> body;      // then-part, loop body
	std::vector<SeqStmt> else_body; // else-part
	SubProgCall call;     // fn, pc
	std::string loop;     // n, e: loop to continue / leave

	bool operator==(const SeqStmt &) const = default;
};

SeqStmt sst_sa(std::string name, Target lhs, AsmtRhs rhs);
SeqStmt sst_va(std::string name, Target lhs, AsmtRhs rhs);
SeqStmt sst_if(std::string name, Expression cond, std::vector<SeqStmt> then_ss, std::vector<SeqStmt> else_ss);
SeqStmt sst_l(std::string name, Expression cond, std::vector<SeqStmt> body);
SeqStmt sst_fn(std::string name, Target lhs, SubProgCall call);
SeqStmt sst_rt(std::string name, AsmtRhs rhs);
SeqStmt sst_pc(std::string name, SubProgCall call);
SeqStmt sst_n(std::string name, std::string loop, Expression cond);
SeqStmt sst_e(std::string name, std::string loop, Expression cond);
SeqStmt sst_nl();

Target lhs(std::string name);
Target lhs_range(std::string name, Expression lo, Expression hi, bool downto);

/// cst_ps: the only core concurrent statement.
struct ConcStmt {
	std::string name;
	/// Leaf names of signals/ports.
	std::vector<std::string> sensitivity;
	std::vector<SeqStmt> body;

	bool operator==(const ConcStmt &) const = default;
};

enum class SubKind : std::uint8_t { Function, Procedure };

struct Formal {
	/// Qualified variable name, "subprogram.formal".
	std::string var;
	Mode mode = Mode::In;

	bool operator==(const Formal &) const = default;
};

struct Subprogram {
	std::string name;
	SubKind kind = SubKind::Function;
	std::vector<Formal> formals;
	/// Qualified names of the other variables owned by the subprogram.
	std::vector<std::string> locals;
	std::optional<TypeDesc> ret_type;
	std::vector<SeqStmt> body;

	bool operator==(const Subprogram &) const = default;
};

/// Named component instance; port map pairs are (component port leaf,
/// outer signal/port leaf).
struct ComponentInst {
	std::string label;
	std::string design;
	std::vector<std::pair<std::string, std::string>> port_map;

	bool operator==(const ComponentInst &) const = default;
};

struct Environment {
	std::vector<Spl> sigprts;
	std::vector<VarTree> variables;
	std::vector<std::pair<std::string, TypeDesc>> types;

	bool operator==(const Environment &) const = default;
};

struct DesignIndex;

/// Lookup tables built by link(). Shared, immutable, and invisible to ==.
struct IndexRef {
	std::shared_ptr<const DesignIndex> ptr;
	bool operator==(const IndexRef &) const { return true; }
};

struct Design {
	std::string name;
	Environment env;
	/// Leaf name -> resolution function name ("resolved").
	std::map<std::string, std::string> res_fn;
	std::vector<ConcStmt> processes;
	std::vector<Subprogram> subprograms;
	std::vector<ComponentInst> components;

	IndexRef index;

	const DesignIndex &idx() const;
	bool operator==(const Design &) const = default;
};

struct DesignIndex {
	struct Member {
		bool is_leaf = true;
		std::int32_t id = -1;
	};
	struct Group {
		std::string name;
		std::vector<std::string> field_names;
		std::vector<Member> members;
	};

	std::vector<SigPrt> leaves;
	std::unordered_map<std::string, std::int32_t> leaf_by_name;
	std::vector<Group> sig_groups;
	std::unordered_map<std::string, std::int32_t> sig_group_by_name;

	std::vector<VarDecl> vars;
	std::unordered_map<std::string, std::int32_t> var_by_name;
	std::vector<Group> var_groups;
	std::unordered_map<std::string, std::int32_t> var_group_by_name;

	std::unordered_map<std::string, std::int32_t> process_by_name;
	std::unordered_map<std::string, std::int32_t> subprogram_by_name;

	/// Per process: sensitivity leaf ids.
	std::vector<std::vector<std::int32_t>> sensitivity;
	/// Per leaf: processes that syntactically assign it, in declaration order.
	std::vector<std::vector<std::int32_t>> drivers;
	/// Per leaf: true when a resolution function is attached.
	std::vector<bool> resolved;
	/// Per subprogram: variable ids to snapshot around a call.
	std::vector<std::vector<std::int32_t>> owned_vars;
	/// Per subprogram: variable ids of locals that are re-initialised on entry.
	std::vector<std::vector<std::int32_t>> local_vars;

	std::int32_t leaf(const std::string &name) const;
	std::int32_t var(const std::string &name) const;
};

/// Resolves names to slots and computes static drivers. Unresolvable names
/// keep slot -1; check_design reports them.
void link(Design &d);

/// Leaves of all signals/ports in declaration order.
std::vector<SigPrt> all_sigprts(const Design &d);

/// Well-formedness diagnostics; empty iff the design is well formed.
std::vector<Diagnostic> check_design(const Design &d);

/// Signal/port and variable names read by an expression, in order.
void collect_reads(const Expression &e, std::vector<std::string> &sigs, std::vector<std::string> &vars);

} // namespace vhdlkern
