#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "harness.hpp"

using namespace vk_test;

namespace {

ParseResult parse(const std::string &text) { return parse_design(SourceUnit{"mem.vhd", text}); }

std::string first_error(const ParseResult &r) {
	for (const auto &d : r.diags)
		if (d.severity == Diagnostic::Severity::Error)
			return format(d, false);
	return "";
}

const char *kEntity = "entity e is port (a, i, j : in integer := 0; x, y, z : in bit := '0'; s : out bit := '0'); end;\n";

} // namespace

TEST_CASE("empty architecture") {
	auto r = parse(std::string(kEntity) + "architecture rtl of e is begin end;");
	REQUIRE(r.diags.empty());
	REQUIRE(r.designs.size() == 1);
	CHECK(r.designs[0].processes.empty());
	CHECK(r.designs[0].name == "e");
}

TEST_CASE("conditional assignment parses to one statement with two arms") {
	auto r = parse(std::string(kEntity) +
			"architecture rtl of e is begin\n  s <= x when i > 0 else y when j = 5 else z;\nend;");
	REQUIRE(r.diags.empty());
	REQUIRE(r.designs[0].processes.size() == 1);
	const auto &c = r.designs[0].processes[0];
	CHECK(c.kind == CConcKind::CondAssign);
	CHECK(c.whens.size() == 2);
	CHECK(c.else_rhs.has_value());
	CHECK(c.target.name == "s");
}

TEST_CASE("identifiers are case-insensitive") {
	auto a = parse(std::string(kEntity) + "architecture rtl of e is begin\n  P1 : PROCESS (X) BEGIN S <= NOT X; END PROCESS;\nend;");
	auto b = parse(std::string(kEntity) + "architecture rtl of e is begin\n  p1 : process (x) begin s <= not x; end process;\nend;");
	REQUIRE(a.diags.empty());
	CHECK(a.designs == b.designs);
	CHECK(a.designs[0].processes[0].name == "p1");
}

TEST_CASE("syntax errors and unsupported constructs are diagnosed with positions") {
	auto s = parse("entity e is port (a : in bit) end;\n");
	CHECK(first_error(s) == "mem.vhd:1:31: error: expected ';', found \"end\"");
	struct {
		const char *body, *word;
	} bad[] = {
			{"p : process (x) begin wait; end process;", "wait"},
			{"s <= x after 1 ns;", "after"},
			{"p : process (x) begin assert x = '1'; end process;", "assert"},
			{"p : process (x) begin report \"hi\"; end process;", "report"},
			{"p : process (all) begin s <= x; end process;", "all"},
	};
	for (auto b : bad) {
		std::string body = b.body;
		CAPTURE(body);
		auto r = parse(std::string(kEntity) + "architecture rtl of e is begin\n  " + b.body + "\nend;");
		auto msg = first_error(r);
		CHECK(msg.find("mem.vhd:3:") == 0);
		CHECK(msg.find(b.word) != std::string::npos);
		CHECK(msg.find("not in synthesizable subset") != std::string::npos);
	}
	auto undeclared = load_text(std::string(kEntity) + "architecture rtl of e is begin\n  s <= q;\nend;");
	CHECK(!undeclared.ok());
}

TEST_CASE("parsing is deterministic") {
	for (const auto &n : corpus_names()) {
		for (const auto &f : load_case(n).spec.files) {
			auto src = read_source(f);
			auto a = parse_design(src), b = parse_design(src);
			CHECK(a.designs == b.designs);
			CHECK(a.diags == b.diags);
		}
	}
}

TEST_CASE("missing files are diagnostics") {
	auto lr = load_registry({"/nonexistent/x.vhd"});
	CHECK(!lr.ok());
	CHECK(lr.diags[0].message.find("cannot read") != std::string::npos);
}

TEST_CASE("every grammar construct appears in the corpus") {
	std::string all;
	for (const auto &e : std::filesystem::recursive_directory_iterator(corpus_dir()))
		if (e.path().extension() == ".vhd") {
			std::ifstream in(e.path());
			std::stringstream ss;
			ss << in.rdbuf();
			all += ss.str() + "\n";
		}
	const char *constructs[] = {
			R"(\bentity\s+\w+\s+is)", R"(\bgeneric\s*\()", R"(\barchitecture\s+\w+\s+of)", R"(\bsignal\s+\w+)",
			R"(\bconstant\s+\w+)", R"(\bvariable\s+\w+)", R"(\btype\s+\w+\s+is\s*\()", R"(\bis\s+record\b)",
			R"(\bis\s+array\s*\()", R"(\bis\s+range\b)", R"(\bsubtype\s+\w+\s+is)", R"(\bcomponent\s+\w+)",
			R"(\bfunction\s+\w+)", R"(\bprocedure\s+\w+)", R"(\bprocess\s*\()", R"(\bwhen\b[^;]*\belse\b)",
			R"(\bwith\b[^;]*\bselect\b)", R"(\bfor\s+\w+\s+in\b[^;]*\bgenerate\b)", R"(\bif\b[^;]*\bgenerate\b)",
			R"(\bport\s+map\b)", R"(:\s*entity\s+work\.)", R"(\bopen\b)", R"(\belsif\b)", R"(\bcase\b[^;]*\bis\b)",
			R"(\bwhen\s+others\b)", R"(\bfor\s+\w+\s+in\b[^;]*\bloop\b)", R"(\bwhile\b[^;]*\bloop\b)",
			R"(\bnext\b)", R"(\bexit\b)", R"(\breturn\b)", R"(\bnull\s*;)", R"(\bothers\s*=>)",
			R"(\bdownto\b)", R"(\bto\b)", R"(x"[0-9a-fA-F]+")", R"('range\b)", R"('length\b)",
			R"(\brising_edge\s*\()", R"(\bfalling_edge\s*\()", R"(\bto_integer\s*\()", R"(\bto_unsigned\s*\()",
			R"(\bresize\s*\()", R"(\bsll\b|\bsrl\b|\brol\b|\bror\b)", R"(\bmod\b)", R"(\brem\b)", R"(\*\*)",
			R"(\babs\b)", R"(\bxor\b)", R"(\bnand\b|\bnor\b|\bxnor\b)", R"(&)", R"(\breal\b)", R"(\bstring\b)",
			R"(\bcharacter\b|'[a-z]')", R"(\bstd_logic_unsigned\b)", R"(\bnumeric_std\b)", R"(\bsigned\s*\()",
	};
	for (std::string c : constructs) {
		CAPTURE(c);
		CHECK(std::regex_search(all, std::regex(c, std::regex::icase)));
	}
}
