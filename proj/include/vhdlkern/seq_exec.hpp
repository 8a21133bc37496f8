#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "vhdlkern/ast.hpp"
#include "vhdlkern/state.hpp"

namespace vhdlkern {

constexpr std::int64_t kDefaultLoopBudget = 100000;
constexpr std::int32_t kMaxCallDepth = 2000;

/// Per-activation interpreter context. A fresh context (or reset_budget)
/// is used for every process run.
struct ExecCtx {
	const Design &d;
	std::int32_t proc = -1;
	std::int64_t loop_budget = kDefaultLoopBudget;
	std::int64_t budget_left = kDefaultLoopBudget;
	/// Per-statement trace (statement name and the value written).
	std::ostream *trace = nullptr;

	// Return unwinding inside function bodies.
	std::int32_t call_depth = 0;
	bool returning = false;
	std::optional<Val> ret;

	ExecCtx(const Design &design, std::int32_t p, std::int64_t budget = kDefaultLoopBudget)
		: d(design), proc(p), loop_budget(budget), budget_left(budget) {}

	void reset_budget() { budget_left = loop_budget; }
};

/// Evaluates against current signal values and the variable store.
Val eval_expr(const ExecCtx &ctx, const Expression &e, const SimState &st);

void exec_stmt_list(ExecCtx &ctx, const std::vector<SeqStmt> &ss, SimState &st);
void exec_stmt(ExecCtx &ctx, const SeqStmt &s, SimState &st);

void exec_signal_assign(ExecCtx &ctx, const Target &t, const AsmtRhs &rhs, SimState &st);
void exec_var_assign(ExecCtx &ctx, const Target &t, const AsmtRhs &rhs, SimState &st);
void exec_if(ExecCtx &ctx, const SeqStmt &s, SimState &st);
/// The five-way flag dispatch around rec_loop, iterated rather than recursed.
void exec_loop_stmt(ExecCtx &ctx, const SeqStmt &s, SimState &st);
void exec_next(ExecCtx &ctx, const SeqStmt &s, SimState &st);
void exec_exit(ExecCtx &ctx, const SeqStmt &s, SimState &st);
void exec_fn_call(ExecCtx &ctx, const Target &t, const SubProgCall &call, SimState &st);
void exec_proc_call(ExecCtx &ctx, const SubProgCall &call, SimState &st);

/// Runs a process body once with a fresh loop budget.
void exec_process(const Design &d, std::int32_t proc, SimState &st, std::int64_t loop_budget = kDefaultLoopBudget,
		std::ostream *trace = nullptr);

} // namespace vhdlkern
