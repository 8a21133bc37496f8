#pragma once

// Textual front end: parses the synthesizable subset described in
// docs/grammar.md into surface designs, and assembles registries from
// source and JSON files.

#include <string>
#include <vector>

#include "vhdlkern/desugar.hpp"
#include "vhdlkern/diagnostic.hpp"
#include "vhdlkern/hierarchy.hpp"

namespace vhdlkern {

struct SourceUnit {
	std::string path;
	std::string text;
};

struct ParseResult {
	std::vector<ComplexDesign> designs;
	std::vector<Diagnostic> diags;
};

/// One design per entity/architecture pair. Designs with errors are left out.
ParseResult parse_design(const SourceUnit &src);

struct LoadOptions {
	LowerOptions lower;
};

struct LoadResult {
	DesignRegistry registry;
	/// Surface form of every design read from source (empty for core JSON).
	std::vector<ComplexDesign> complex;
	std::vector<Diagnostic> diags;

	bool ok() const { return !has_errors(diags); }
};

/// Reads .vhd/.vhdl sources and .json design files (core or surface form),
/// lowers, checks and registers every design. A design with diagnostics is
/// not registered.
LoadResult load_registry(const std::vector<std::string> &paths, const LoadOptions &opt = {});

/// Reads a whole file; throws SimError(Config) when it cannot be read.
SourceUnit read_source(const std::string &path);

} // namespace vhdlkern
