#pragma once

#include <stdexcept>
#include <string>

namespace vhdlkern {

/// Category of a runtime simulation failure. The CLI maps every category to
/// exit code 2; tests use the category to tell failures apart.
enum class ErrorKind {
	Eval,        // type mismatch, bad operand, out-of-range index
	Overflow,    // checked integer arithmetic
	DivByZero,
	Unresolved,  // read of a signal whose effective value is absent
	DeltaLimit,
	LoopBudget,
	Config,      // bad clock, unknown design, missing port map entry
};

class SimError : public std::runtime_error {
public:
	SimError(ErrorKind kind, const std::string &msg)
		: std::runtime_error(msg), kind_(kind) {}

	ErrorKind kind() const { return kind_; }

private:
	ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &msg) {
	throw SimError(kind, msg);
}

} // namespace vhdlkern
