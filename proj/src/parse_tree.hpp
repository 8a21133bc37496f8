#pragma once

// Untyped syntax tree produced by the parser. Names are lower-cased; nothing
// is resolved yet. Elaboration (elaborate.cpp) turns it into surface
// designs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vhdlkern/diagnostic.hpp"

namespace vhdlkern::syntax {

struct Assoc;

struct PExpr {
	enum class K {
		Name,      // text
		Select,    // args[0].text
		Apply,     // args[0](assocs) : call, index, slice or conversion
		Attr,      // args[0]'text
		Int,       // ival
		Real,      // rval
		Char,      // text (one character)
		Str,       // text
		BitStr,    // text already expanded to bits
		Unary,     // text op, args[0]
		Binary,    // args[0] text args[1]
		Aggregate, // assocs
		Range,     // args[0] to|downto args[1]; text = "to" / "downto"
		Open,
	};
	K k = K::Name;
	SourceSpan at;
	std::string text;
	std::int64_t ival = 0;
	double rval = 0;
	std::vector<PExpr> args;
	std::vector<Assoc> assocs;
};

/// `choices => value`, `others => value` or a positional value.
struct Assoc {
	std::vector<PExpr> choices;
	bool others = false;
	PExpr value;
};

/// Subtype indication: a type mark with an optional index or range
/// constraint.
struct PType {
	SourceSpan at;
	std::string mark;
	std::optional<PExpr> constraint; // Range, or Attr('range)
};

struct PStmt;

struct PArm {
	PExpr cond;
	std::vector<PStmt> body;
};

struct PCaseArm {
	std::vector<PExpr> choices; // plain expressions or Range
	bool others = false;
	std::vector<PStmt> body;
};

struct PStmt {
	enum class K { SigAssign, VarAssign, If, Case, For, While, Loop, Next, Exit, Return, Null, Call };
	K k = K::Null;
	SourceSpan at;
	std::string label;
	PExpr target, value;            // assignments; value of Return
	bool has_value = false;          // Return
	std::vector<PArm> arms;         // if / elsif
	std::vector<PStmt> else_body;
	PExpr selector;
	std::vector<PCaseArm> cases;
	std::string var;                // For
	PExpr range;                    // For
	PExpr cond;                     // While, Next/Exit when
	bool has_cond = false;
	std::vector<PStmt> body;
	std::string loop;               // Next/Exit target label
	PExpr call;                     // Call
};

struct PInterface {
	SourceSpan at;
	std::vector<std::string> names;
	std::string cls;  // "signal", "variable", "constant" or empty
	std::string mode; // in, out, inout or empty
	PType type;
	std::optional<PExpr> init;
};

struct PDecl;

struct PSub {
	SourceSpan at;
	bool is_function = true;
	std::string name;
	std::vector<PInterface> params;
	std::optional<PType> ret;
	bool has_body = false;
	std::vector<PDecl> decls;
	std::vector<PStmt> body;
};

struct PDecl {
	enum class K { Signal, Constant, Variable, TypeEnum, TypeRecord, TypeArray, TypeRange, Subtype, Component, Sub };
	K k = K::Signal;
	SourceSpan at;
	std::vector<std::string> names;
	PType type;
	std::optional<PExpr> init;
	std::vector<std::string> literals;                               // TypeEnum
	std::vector<std::pair<std::vector<std::string>, PType>> fields;  // TypeRecord
	PExpr range;                                                      // TypeArray index, TypeRange
	std::vector<PInterface> ports;                                    // Component
	PSub sub;
};

struct PWave {
	PExpr value;
	std::optional<PExpr> cond;
};

struct PSelArm {
	PExpr value;
	std::vector<PExpr> choices;
	bool others = false;
};

struct PConc {
	enum class K { Process, CondAssign, SelAssign, ForGen, IfGen, Instance };
	K k = K::Process;
	SourceSpan at;
	std::string label;
	std::vector<PExpr> sensitivity;
	std::vector<PDecl> decls;
	std::vector<PStmt> body;
	PExpr target;
	std::vector<PWave> waves;
	PExpr selector;
	std::vector<PSelArm> sel;
	std::string var;
	PExpr range;
	PExpr cond;
	std::vector<PConc> gen_body;
	std::string unit;
	bool entity_inst = false;
	std::vector<Assoc> port_map;
};

struct PEntity {
	SourceSpan at;
	std::string name;
	std::vector<PInterface> generics;
	std::vector<PInterface> ports;
};

struct PArch {
	SourceSpan at;
	std::string name;
	std::string entity;
	std::vector<PDecl> decls;
	std::vector<PConc> stmts;
};

struct PFile {
	std::vector<std::string> uses; // "ieee.numeric_std"
	std::vector<PEntity> entities;
	std::vector<PArch> archs;
};

PFile parse_file(const std::string &path, const std::string &text, std::vector<Diagnostic> &diags);

} // namespace vhdlkern::syntax
