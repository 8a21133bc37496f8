#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vhdlkern {

struct SourceSpan {
	std::string file;
	std::uint32_t line = 0;
	std::uint32_t col = 0;
	std::uint32_t offset = 0;
};

struct Diagnostic {
	enum class Severity { Error, Warning };

	Severity severity = Severity::Error;
	std::string message;
	SourceSpan span;

	bool operator==(const Diagnostic &o) const {
		return severity == o.severity && message == o.message && span.file == o.span.file &&
				span.line == o.span.line && span.col == o.span.col;
	}
};

/// "file:line:col: error: message"; files without position print the
/// message alone.
std::string format(const Diagnostic &d, bool color = false);

bool has_errors(const std::vector<Diagnostic> &ds);

} // namespace vhdlkern
