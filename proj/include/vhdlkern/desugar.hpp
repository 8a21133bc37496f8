#pragma once

// Surface ("complex") syntax and its lowering to the core AST: elsif chains,
// case, for loops, conditional signal assignments, if/for generate.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vhdlkern/ast.hpp"
#include "vhdlkern/diagnostic.hpp"

namespace vhdlkern {

enum class CStmtKind : std::uint8_t {
	SignalAssign,
	VarAssign,
	If,   // ssc_if (core if when elsifs is empty)
	Loop, // while loop, or plain loop with a true condition
	FnCall,
	Return,
	ProcCall,
	Next,
	Exit,
	Null,
	Case, // ssc_case
	For,  // ssc_for
};

/// One case alternative; a range choice `lo to hi` sets hi.
struct CaseChoice {
	Expression value;
	std::optional<Expression> hi;

	bool operator==(const CaseChoice &) const = default;
};

struct CSeqStmt;

struct CaseWhen {
	std::vector<CaseChoice> choices;
	std::vector<CSeqStmt> body;

	bool operator==(const CaseWhen &) const;
};

struct CElsif {
	Expression cond;
	std::vector<CSeqStmt> body;

	bool operator==(const CElsif &) const;
};

struct CSeqStmt {
	CStmtKind kind = CStmtKind::Null;
	std::string name;
	Target target;
	AsmtRhs rhs;
	Expression cond;
	std::vector<CSeqStmt> body;
	std::vector<CElsif> elsifs;
	std::vector<CSeqStmt> else_body;
	SubProgCall call;
	std::string loop;

	// case
	Expression selector;
	std::vector<CaseWhen> whens;
	bool has_others = false;
	std::vector<CSeqStmt> others;

	// for: qualified name of the loop variable and the discrete range
	std::string var;
	DiscreteRange range;

	bool operator==(const CSeqStmt &) const = default;
};

inline bool CaseWhen::operator==(const CaseWhen &o) const { return choices == o.choices && body == o.body; }
inline bool CElsif::operator==(const CElsif &o) const { return cond == o.cond && body == o.body; }

/// Core statement without nested complex statements.
CSeqStmt from_core(const SeqStmt &s);
CSeqStmt ssc_if(std::string name, Expression cond, std::vector<CSeqStmt> then_ss, std::vector<CElsif> elsifs,
		std::vector<CSeqStmt> else_ss);
CSeqStmt ssc_case(std::string name, Expression selector, std::vector<CaseWhen> whens,
		std::optional<std::vector<CSeqStmt>> others);
CSeqStmt ssc_for(std::string name, std::string var, DiscreteRange range, std::vector<CSeqStmt> body);
CSeqStmt ssc_while(std::string name, Expression cond, std::vector<CSeqStmt> body);

enum class CConcKind : std::uint8_t { Process, CondAssign, Generate };

/// as_when: assign rhs when cond holds.
struct AsWhen {
	AsmtRhs rhs;
	Expression cond;

	bool operator==(const AsWhen &) const = default;
};

struct CConcStmt {
	CConcKind kind = CConcKind::Process;
	std::string name;

	// process
	std::vector<std::string> sensitivity;
	std::vector<CSeqStmt> body;

	// csc_ca: target <= w1.rhs when w1.cond else ... else else_rhs
	Target target;
	std::vector<AsWhen> whens;
	std::optional<AsmtRhs> else_rhs;

	// csc_gen
	bool for_gen = false;
	std::string var;
	DiscreteRange range;
	Expression cond;
	std::vector<CConcStmt> gen_body;

	bool operator==(const CConcStmt &) const = default;
};

CConcStmt csc_ps(std::string name, std::vector<std::string> sensitivity, std::vector<CSeqStmt> body);
CConcStmt csc_ca(std::string name, Target target, std::vector<AsWhen> whens, std::optional<AsmtRhs> else_rhs);
CConcStmt csc_for_gen(std::string name, std::string var, DiscreteRange range, std::vector<CConcStmt> body);
CConcStmt csc_if_gen(std::string name, Expression cond, std::vector<CConcStmt> body);

struct CSubprogram {
	std::string name;
	SubKind kind = SubKind::Function;
	std::vector<Formal> formals;
	std::vector<std::string> locals;
	std::optional<TypeDesc> ret_type;
	std::vector<CSeqStmt> body;

	bool operator==(const CSubprogram &) const = default;
};

struct ComplexDesign {
	std::string name;
	Environment env;
	std::map<std::string, std::string> res_fn;
	std::vector<CConcStmt> processes;
	std::vector<CSubprogram> subprograms;
	std::vector<ComponentInst> components;

	bool operator==(const ComplexDesign &) const = default;
};

struct LowerOptions {
	/// Conditional assignments are sensitive only to the signals read in
	/// their conditions (all reads when there is no condition).
	bool paper_sensitivity = false;
};

/// Lowering state: fresh names and variables introduced along the way.
class Lowering {
public:
	explicit Lowering(LowerOptions opt = {}) : opt_(opt) {}

	std::vector<SeqStmt> lower_seq(const CSeqStmt &s);
	std::vector<SeqStmt> lower_seq_list(const std::vector<CSeqStmt> &ss);
	ConcStmt lower_conc_assign(const CConcStmt &c);
	/// Lowered processes of a generate statement (recursively).
	std::vector<ConcStmt> lower_generate(const CConcStmt &c, const Environment &env);
	std::vector<ConcStmt> lower_conc(const CConcStmt &c, const Environment &env);

	/// Integer variables introduced by for loops (counters, end bounds) and
	/// per-copy process variables introduced by for generate.
	const std::vector<VarTree> &new_variables() const { return vars_; }
	const std::vector<Diagnostic> &diagnostics() const { return diags_; }
	/// Process variables of generate templates, superseded by their copies.
	const std::set<std::string> &retired() const { return retired_; }

private:
	void declare_int(const std::string &name);
	void error(std::string msg);

	LowerOptions opt_;
	std::vector<VarTree> vars_;
	std::vector<std::string> declared_;
	std::vector<Diagnostic> diags_;
	std::set<std::string> retired_;
};

/// Lowers a whole design. Errors are reported as diagnostics; the returned
/// design is linked only when there are none.
Design lower_design(const ComplexDesign &cd, std::vector<Diagnostic> &diags, LowerOptions opt = {});

/// [lit/var]: every exp_var(var) replaced by exp_con(lit).
Expression subst(const Expression &e, const std::string &var, const Val &lit);
SeqStmt subst(const SeqStmt &s, const std::string &var, const Val &lit);
ConcStmt subst(const ConcStmt &c, const std::string &var, const Val &lit);
CSeqStmt subst(const CSeqStmt &s, const std::string &var, const Val &lit);
CConcStmt subst(const CConcStmt &c, const std::string &var, const Val &lit);

/// Value of an expression built from constants only; nullopt otherwise.
std::optional<Val> const_eval(const Expression &e);

} // namespace vhdlkern
