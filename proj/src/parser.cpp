// Lexer and recursive-descent parser for the synthesizable subset. Produces
// the untyped tree of parse_tree.hpp; errors are collected and the parser
// resynchronises at the next ';'.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

#include "parse_tree.hpp"

namespace vhdlkern::syntax {

namespace {

const std::set<std::string> kReserved = {"abs", "access", "after", "alias", "all", "and", "architecture", "array",
	"assert", "attribute", "begin", "block", "body", "buffer", "bus", "case", "component", "configuration",
	"constant", "disconnect", "downto", "else", "elsif", "end", "entity", "exit", "file", "for", "function",
	"generate", "generic", "group", "guarded", "if", "impure", "in", "inertial", "inout", "is", "label", "library",
	"linkage", "literal", "loop", "map", "mod", "nand", "new", "next", "nor", "not", "null", "of", "on", "open", "or",
	"others", "out", "package", "port", "postponed", "procedure", "process", "pure", "range", "record", "register",
	"reject", "rem", "report", "return", "rol", "ror", "select", "severity", "signal", "shared", "sla", "sll", "sra",
	"srl", "subtype", "then", "to", "transport", "type", "unaffected", "units", "until", "use", "variable", "wait",
	"when", "while", "with", "xnor", "xor"};

// Reserved words that introduce constructs outside the subset.
const std::set<std::string> kUnsupported = {"wait", "after", "assert", "report", "access", "file", "shared",
	"transport", "inertial", "block", "alias", "attribute", "package", "configuration", "buffer", "linkage",
	"postponed", "guarded", "disconnect", "group", "units", "new", "register", "bus", "reject", "unaffected",
	"severity"};

enum class T { Id, Int, Real, Char, Str, BitStr, Sym, Eof };

struct Tok {
	T t = T::Eof;
	std::string s;
	std::int64_t ival = 0;
	double rval = 0;
	SourceSpan at;
};

struct LexError {
	SourceSpan at;
	std::string msg;
};

class Lexer {
public:
	Lexer(const std::string &path, const std::string &text) : path_(path), src_(text) {}

	std::vector<Tok> run(std::vector<Diagnostic> &diags) {
		std::vector<Tok> out;
		while (true) {
			skip_space();
			Tok t;
			t.at = here();
			if (i_ >= src_.size()) {
				t.t = T::Eof;
				out.push_back(t);
				return out;
			}
			try {
				lex_one(t, out.empty() ? nullptr : &out.back());
				out.push_back(std::move(t));
			} catch (const LexError &e) {
				diags.push_back(Diagnostic{Diagnostic::Severity::Error, e.msg, e.at});
				advance();
			}
		}
	}

private:
	SourceSpan here() const { return SourceSpan{path_, line_, col_, static_cast<std::uint32_t>(i_)}; }
	char at(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }
	void advance() {
		if (src_[i_] == '\n') {
			++line_;
			col_ = 1;
		} else {
			++col_;
		}
		++i_;
	}

	void skip_space() {
		while (i_ < src_.size()) {
			if (std::isspace(static_cast<unsigned char>(at()))) {
				advance();
			} else if (at() == '-' && at(1) == '-') {
				while (i_ < src_.size() && at() != '\n')
					advance();
			} else {
				break;
			}
		}
	}

	static bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

	void lex_one(Tok &t, const Tok *prev) {
		char c = at();
		char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
		if ((lc == 'x' || lc == 'b' || lc == 'o') && at(1) == '"') {
			advance();
			t.t = T::BitStr;
			t.s = bit_string(lc, string_body());
			return;
		}
		if (std::isalpha(static_cast<unsigned char>(c))) {
			t.t = T::Id;
			while (id_char(at())) {
				t.s += static_cast<char>(std::tolower(static_cast<unsigned char>(at())));
				advance();
			}
			if (t.s.back() == '_' || t.s.find("__") != std::string::npos)
				throw LexError{t.at, "malformed identifier \"" + t.s + "\""};
			return;
		}
		if (c == '\\')
			throw LexError{t.at, "extended identifiers are not supported"};
		if (std::isdigit(static_cast<unsigned char>(c))) {
			number(t);
			return;
		}
		if (c == '"') {
			t.t = T::Str;
			t.s = string_body();
			return;
		}
		if (c == '\'') {
			bool tick = prev && ((prev->t == T::Id && !kReserved.count(prev->s)) || (prev->t == T::Sym && prev->s == ")"));
			if (!tick && at(2) == '\'') {
				advance();
				t.t = T::Char;
				t.s = std::string(1, at());
				advance();
				advance();
				return;
			}
			advance();
			t.t = T::Sym;
			t.s = "'";
			return;
		}
		static const char *two[] = {"<=", ":=", "=>", "/=", ">=", "**", "<>"};
		for (const char *s : two) {
			if (c == s[0] && at(1) == s[1]) {
				advance();
				advance();
				t.t = T::Sym;
				t.s = s;
				return;
			}
		}
		if (std::string("()[],;:.+-*/&=<>|").find(c) != std::string::npos) {
			advance();
			t.t = T::Sym;
			t.s = std::string(1, c);
			return;
		}
		throw LexError{t.at, std::string("unexpected character '") + c + "'"};
	}

	std::string string_body() {
		SourceSpan start = here();
		advance(); // opening quote
		std::string s;
		while (true) {
			if (i_ >= src_.size() || at() == '\n')
				throw LexError{start, "unterminated string literal"};
			if (at() == '"') {
				if (at(1) == '"') {
					s += '"';
					advance();
					advance();
					continue;
				}
				advance();
				return s;
			}
			s += at();
			advance();
		}
	}

	std::string bit_string(char base, const std::string &body) {
		std::string out;
		int bits = base == 'x' ? 4 : base == 'o' ? 3 : 1;
		for (char c : body) {
			if (c == '_')
				continue;
			char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
			int v;
			if (lc >= '0' && lc <= '9')
				v = lc - '0';
			else if (lc >= 'a' && lc <= 'f')
				v = lc - 'a' + 10;
			else
				throw LexError{here(), std::string("bad digit '") + c + "' in bit string literal"};
			if (v >= (1 << bits))
				throw LexError{here(), std::string("bad digit '") + c + "' in bit string literal"};
			for (int b = bits - 1; b >= 0; --b)
				out += (v >> b) & 1 ? '1' : '0';
		}
		return out;
	}

	std::string digits(bool allow_hex) {
		std::string s;
		while (std::isdigit(static_cast<unsigned char>(at())) || at() == '_' ||
				(allow_hex && std::isxdigit(static_cast<unsigned char>(at())))) {
			if (at() != '_')
				s += static_cast<char>(std::tolower(static_cast<unsigned char>(at())));
			advance();
		}
		return s;
	}

	void number(Tok &t) {
		std::string whole = digits(false);
		if (at() == '#') {
			advance();
			int base = std::stoi(whole);
			std::string d = digits(true);
			if (at() != '#' || base < 2 || base > 16 || d.empty())
				throw LexError{t.at, "malformed based literal"};
			advance();
			std::int64_t v = 0;
			for (char c : d) {
				int x = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : c - 'a' + 10;
				if (x >= base || __builtin_mul_overflow(v, base, &v) || __builtin_add_overflow(v, x, &v))
					throw LexError{t.at, "bad based literal"};
			}
			t.t = T::Int;
			t.ival = v;
			return;
		}
		bool real = false;
		std::string text = whole;
		if (at() == '.' && std::isdigit(static_cast<unsigned char>(at(1)))) {
			advance();
			real = true;
			text += "." + digits(false);
		}
		if ((at() == 'e' || at() == 'E') &&
				(std::isdigit(static_cast<unsigned char>(at(1))) || ((at(1) == '+' || at(1) == '-') && std::isdigit(static_cast<unsigned char>(at(2)))))) {
			text += 'e';
			advance();
			if (at() == '+' || at() == '-') {
				text += at();
				advance();
			}
			text += digits(false);
		}
		if (real) {
			t.t = T::Real;
			t.rval = std::stod(text);
			return;
		}
		// Integer, possibly with a positive exponent.
		t.t = T::Int;
		auto e = text.find('e');
		try {
			t.ival = std::stoll(text.substr(0, e));
			if (e != std::string::npos) {
				int exp = std::stoi(text.substr(e + 1));
				if (exp < 0)
					throw LexError{t.at, "negative exponent in integer literal"};
				for (int k = 0; k < exp; ++k)
					if (__builtin_mul_overflow(t.ival, 10, &t.ival))
						throw LexError{t.at, "integer literal out of range"};
			}
		} catch (const std::out_of_range &) {
			throw LexError{t.at, "integer literal out of range"};
		}
	}

	std::string path_;
	const std::string &src_;
	std::size_t i_ = 0;
	std::uint32_t line_ = 1, col_ = 1;
};

struct ParseError {};

class Parser {
public:
	Parser(std::vector<Tok> toks, std::vector<Diagnostic> &diags) : toks_(std::move(toks)), diags_(diags) {}

	PFile file() {
		PFile f;
		while (!at_eof()) {
			std::size_t start = pos_;
			try {
				if (kw("library")) {
					next();
					ident();
					while (accept(","))
						ident();
					expect(";");
				} else if (kw("use")) {
					next();
					do {
						std::string n = ident();
						while (accept(".")) {
							if (kw("all")) {
								next();
								break;
							}
							n += "." + ident();
						}
						f.uses.push_back(n);
					} while (accept(","));
					expect(";");
				} else if (kw("entity")) {
					f.entities.push_back(entity());
				} else if (kw("architecture")) {
					f.archs.push_back(architecture());
				} else {
					unsupported_or("expected a library clause, use clause, entity or architecture");
				}
			} catch (const ParseError &) {
				skip_unit(start);
			}
		}
		return f;
	}

private:
	// --- token helpers ----------------------------------------------------------

	const Tok &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
	bool at_eof() const { return peek().t == T::Eof; }
	const Tok &next() {
		const Tok &t = toks_[pos_];
		if (pos_ + 1 < toks_.size())
			++pos_;
		return t;
	}
	bool is(const char *sym, std::size_t k = 0) const { return peek(k).t == T::Sym && peek(k).s == sym; }
	bool kw(const char *w, std::size_t k = 0) const { return peek(k).t == T::Id && peek(k).s == w; }
	bool accept(const char *sym) {
		if (!is(sym))
			return false;
		next();
		return true;
	}
	bool accept_kw(const char *w) {
		if (!kw(w))
			return false;
		next();
		return true;
	}

	std::string describe(const Tok &t) const {
		switch (t.t) {
		case T::Eof: return "end of file";
		case T::Id: return "\"" + t.s + "\"";
		case T::Sym: return "'" + t.s + "'";
		case T::Str: return "string literal";
		case T::BitStr: return "bit string literal";
		case T::Char: return "character literal";
		default: return "number";
		}
	}

	[[noreturn]] void error(const SourceSpan &at, const std::string &msg) {
		diags_.push_back(Diagnostic{Diagnostic::Severity::Error, msg, at});
		throw ParseError{};
	}

	// Reports the current token as outside the subset when it is one of the
	// excluded reserved words, or with msg otherwise.
	[[noreturn]] void unsupported_or(const std::string &msg) {
		const Tok &t = peek();
		if (t.t == T::Id && kUnsupported.count(t.s))
			error(t.at, "'" + t.s + "' is not in synthesizable subset");
		error(t.at, msg + ", found " + describe(t));
	}

	void expect(const char *sym) {
		if (!accept(sym))
			unsupported_or(std::string("expected '") + sym + "'");
	}
	void expect_kw(const char *w) {
		if (!accept_kw(w))
			unsupported_or(std::string("expected \"") + w + "\"");
	}
	std::string ident() {
		const Tok &t = peek();
		if (t.t != T::Id || kReserved.count(t.s))
			unsupported_or("expected an identifier");
		return next().s;
	}
	bool is_ident(std::size_t k = 0) const { return peek(k).t == T::Id && !kReserved.count(peek(k).s); }

	// Skips past the next ';' (statement-level recovery).
	void sync(std::size_t start) {
		if (pos_ == start)
			next();
		while (!at_eof() && !is(";")) {
			if (kw("end") || kw("begin")) {
				if (pos_ == start)
					next();
				return;
			}
			next();
		}
		accept(";");
	}

	// Skips to the next design unit.
	void skip_unit(std::size_t start) {
		if (pos_ == start)
			next();
		while (!at_eof()) {
			if (is(";", 0) && (kw("entity", 1) || kw("architecture", 1) || kw("library", 1) || kw("use", 1))) {
				next();
				return;
			}
			next();
		}
	}

	void end_of(const char *what, const std::string &name) {
		expect_kw("end");
		accept_kw(what);
		if (is_ident()) {
			const Tok &t = next();
			if (!name.empty() && t.s != name)
				error(t.at, "\"end " + t.s + "\" does not match \"" + name + "\"");
		}
		expect(";");
	}

	// --- design units -------------------------------------------------------------

	PEntity entity() {
		PEntity e;
		e.at = next().at;
		e.name = ident();
		expect_kw("is");
		if (accept_kw("generic")) {
			e.generics = interface_list();
			expect(";");
		}
		if (accept_kw("port")) {
			e.ports = interface_list();
			expect(";");
		}
		if (!kw("end"))
			unsupported_or("entity declarative items are not supported; expected \"end\"");
		end_of("entity", e.name);
		return e;
	}

	PArch architecture() {
		PArch a;
		a.at = next().at;
		a.name = ident();
		expect_kw("of");
		a.entity = ident();
		expect_kw("is");
		a.decls = declarations();
		expect_kw("begin");
		a.stmts = conc_list({"end"});
		end_of("architecture", a.name);
		return a;
	}

	std::vector<PInterface> interface_list() {
		std::vector<PInterface> out;
		expect("(");
		do {
			PInterface p;
			p.at = peek().at;
			if (kw("signal") || kw("variable") || kw("constant"))
				p.cls = next().s;
			p.names.push_back(ident());
			while (accept(","))
				p.names.push_back(ident());
			expect(":");
			if (kw("in") || kw("out") || kw("inout"))
				p.mode = next().s;
			else if (kw("buffer") || kw("linkage"))
				unsupported_or("");
			p.type = subtype();
			if (accept(":="))
				p.init = expr();
			out.push_back(std::move(p));
		} while (accept(";"));
		expect(")");
		return out;
	}

	PType subtype() {
		PType t;
		t.at = peek().at;
		t.mark = ident();
		while (accept("."))
			t.mark = kw("all") ? next().s : ident();
		if (is("(")) {
			next();
			t.constraint = range_or_attr();
			expect(")");
		} else if (accept_kw("range")) {
			t.constraint = range_or_attr();
		}
		return t;
	}

	// `a to b`, `a downto b`, or a name ending in 'range / 'reverse_range.
	PExpr range_or_attr() {
		PExpr a = expr();
		if (kw("to") || kw("downto")) {
			PExpr r;
			r.k = PExpr::K::Range;
			r.at = a.at;
			r.text = next().s;
			r.args.push_back(std::move(a));
			r.args.push_back(expr());
			return r;
		}
		if (a.k == PExpr::K::Attr && (a.text == "range" || a.text == "reverse_range"))
			return a;
		error(a.at, "expected a range");
	}

	// --- declarations ---------------------------------------------------------------

	std::vector<PDecl> declarations() {
		std::vector<PDecl> out;
		while (!at_eof() && !kw("begin") && !kw("end")) {
			std::size_t start = pos_;
			try {
				out.push_back(declaration());
			} catch (const ParseError &) {
				sync(start);
			}
		}
		return out;
	}

	PDecl declaration() {
		PDecl d;
		d.at = peek().at;
		if (kw("signal") || kw("constant") || kw("variable")) {
			std::string w = next().s;
			d.k = w == "signal" ? PDecl::K::Signal : w == "constant" ? PDecl::K::Constant : PDecl::K::Variable;
			d.names.push_back(ident());
			while (accept(","))
				d.names.push_back(ident());
			expect(":");
			d.type = subtype();
			if (accept(":="))
				d.init = expr();
			expect(";");
			return d;
		}
		if (accept_kw("type")) {
			d.names.push_back(ident());
			expect_kw("is");
			if (accept("(")) {
				d.k = PDecl::K::TypeEnum;
				do {
					if (peek().t == T::Char)
						error(peek().at, "character enumeration literals are not supported");
					d.literals.push_back(ident());
				} while (accept(","));
				expect(")");
			} else if (accept_kw("record")) {
				d.k = PDecl::K::TypeRecord;
				while (!kw("end")) {
					std::vector<std::string> names{ident()};
					while (accept(","))
						names.push_back(ident());
					expect(":");
					PType t = subtype();
					expect(";");
					d.fields.emplace_back(std::move(names), std::move(t));
				}
				expect_kw("end");
				expect_kw("record");
				if (is_ident())
					next();
			} else if (accept_kw("array")) {
				d.k = PDecl::K::TypeArray;
				expect("(");
				if (is_ident() && kw("range", 1) && is("<>", 2))
					error(peek().at, "unconstrained array types are not supported");
				d.range = range_or_attr();
				expect(")");
				expect_kw("of");
				d.type = subtype();
			} else if (accept_kw("range")) {
				d.k = PDecl::K::TypeRange;
				d.range = range_or_attr();
			} else {
				unsupported_or("expected a type definition");
			}
			expect(";");
			return d;
		}
		if (accept_kw("subtype")) {
			d.k = PDecl::K::Subtype;
			d.names.push_back(ident());
			expect_kw("is");
			d.type = subtype();
			expect(";");
			return d;
		}
		if (accept_kw("component")) {
			d.k = PDecl::K::Component;
			d.names.push_back(ident());
			accept_kw("is");
			if (accept_kw("generic")) {
				interface_list();
				expect(";");
			}
			if (accept_kw("port")) {
				d.ports = interface_list();
				expect(";");
			}
			end_of("component", d.names[0]);
			return d;
		}
		if (kw("function") || kw("procedure") || kw("pure") || kw("impure")) {
			d.k = PDecl::K::Sub;
			d.sub = subprogram();
			d.names.push_back(d.sub.name);
			return d;
		}
		unsupported_or("expected a declaration");
	}

	PSub subprogram() {
		PSub s;
		s.at = peek().at;
		if (kw("pure") || kw("impure"))
			next();
		s.is_function = next().s == "function";
		if (peek().t == T::Str)
			error(peek().at, "operator overloading is not supported");
		s.name = ident();
		if (is("("))
			s.params = interface_list();
		if (s.is_function) {
			expect_kw("return");
			s.ret = subtype();
		}
		if (accept(";"))
			return s;
		expect_kw("is");
		s.has_body = true;
		s.decls = declarations();
		expect_kw("begin");
		s.body = seq_list({"end"});
		end_of(s.is_function ? "function" : "procedure", s.name);
		return s;
	}

	// --- concurrent statements ------------------------------------------------------

	std::vector<PConc> conc_list(std::initializer_list<const char *> enders) {
		std::vector<PConc> out;
		auto ended = [&] {
			for (const char *e : enders)
				if (kw(e))
					return true;
			return at_eof();
		};
		while (!ended()) {
			std::size_t start = pos_;
			try {
				out.push_back(conc());
			} catch (const ParseError &) {
				sync(start);
			}
		}
		return out;
	}

	PConc conc() {
		PConc c;
		c.at = peek().at;
		if (is_ident() && is(":", 1)) {
			c.label = next().s;
			next();
		}
		if (kw("process")) {
			next();
			c.k = PConc::K::Process;
			if (accept("(")) {
				if (kw("all")) {
					// Reported without unwinding so the body still parses.
					diags_.push_back(Diagnostic{Diagnostic::Severity::Error,
							"process (all) is not in synthesizable subset; list the signals", peek().at});
					next();
				} else {
					c.sensitivity.push_back(name());
					while (accept(","))
						c.sensitivity.push_back(name());
				}
				expect(")");
			}
			accept_kw("is");
			c.decls = declarations();
			expect_kw("begin");
			c.body = seq_list({"end"});
			end_of("process", c.label);
			return c;
		}
		if (kw("for") && !c.label.empty()) {
			next();
			c.k = PConc::K::ForGen;
			c.var = ident();
			expect_kw("in");
			c.range = range_or_attr();
			expect_kw("generate");
			accept_kw("begin");
			c.gen_body = conc_list({"end"});
			end_of("generate", c.label);
			return c;
		}
		if (kw("if") && !c.label.empty()) {
			next();
			c.k = PConc::K::IfGen;
			c.cond = expr();
			expect_kw("generate");
			accept_kw("begin");
			c.gen_body = conc_list({"end"});
			end_of("generate", c.label);
			return c;
		}
		if (!c.label.empty() && (kw("component") || kw("entity") ||
				(is_ident() && (kw("port", 1) || kw("generic", 1))))) {
			c.k = PConc::K::Instance;
			if (accept_kw("entity")) {
				c.entity_inst = true;
				c.unit = ident();
				while (accept("."))
					c.unit = ident();
				if (accept("(")) {
					ident();
					expect(")");
				}
			} else {
				accept_kw("component");
				c.unit = ident();
			}
			if (kw("generic"))
				error(peek().at, "generic maps are not supported");
			expect_kw("port");
			expect_kw("map");
			expect("(");
			c.port_map = assoc_list();
			expect(")");
			expect(";");
			return c;
		}
		if (accept_kw("with")) {
			c.k = PConc::K::SelAssign;
			c.selector = expr();
			expect_kw("select");
			c.target = name();
			expect("<=");
			do {
				PSelArm arm;
				arm.value = expr();
				expect_kw("when");
				choices(arm.choices, arm.others);
				c.sel.push_back(std::move(arm));
			} while (accept(","));
			expect(";");
			return c;
		}
		if (is_ident() || is("(")) {
			c.k = PConc::K::CondAssign;
			c.target = name();
			expect("<=");
			while (true) {
				PWave w;
				w.value = expr();
				if (kw("after"))
					unsupported_or("");
				if (accept_kw("when")) {
					w.cond = expr();
					c.waves.push_back(std::move(w));
					if (accept_kw("else"))
						continue;
					break;
				}
				c.waves.push_back(std::move(w));
				break;
			}
			expect(";");
			return c;
		}
		unsupported_or("expected a concurrent statement");
	}

	// --- sequential statements ------------------------------------------------------

	std::vector<PStmt> seq_list(std::initializer_list<const char *> enders) {
		std::vector<PStmt> out;
		auto ended = [&] {
			for (const char *e : enders)
				if (kw(e))
					return true;
			return at_eof();
		};
		while (!ended()) {
			std::size_t start = pos_;
			try {
				out.push_back(seq());
			} catch (const ParseError &) {
				sync(start);
			}
		}
		return out;
	}

	PStmt seq() {
		PStmt s;
		s.at = peek().at;
		if (is_ident() && is(":", 1)) {
			s.label = next().s;
			next();
		}
		if (accept_kw("if")) {
			s.k = PStmt::K::If;
			PArm arm;
			arm.cond = expr();
			expect_kw("then");
			arm.body = seq_list({"elsif", "else", "end"});
			s.arms.push_back(std::move(arm));
			while (accept_kw("elsif")) {
				PArm a;
				a.cond = expr();
				expect_kw("then");
				a.body = seq_list({"elsif", "else", "end"});
				s.arms.push_back(std::move(a));
			}
			if (accept_kw("else"))
				s.else_body = seq_list({"end"});
			expect_kw("end");
			expect_kw("if");
			end_label(s.label);
			return s;
		}
		if (accept_kw("case")) {
			s.k = PStmt::K::Case;
			s.selector = expr();
			expect_kw("is");
			while (accept_kw("when")) {
				PCaseArm arm;
				choices(arm.choices, arm.others);
				expect("=>");
				arm.body = seq_list({"when", "end"});
				s.cases.push_back(std::move(arm));
			}
			expect_kw("end");
			expect_kw("case");
			end_label(s.label);
			return s;
		}
		if (kw("for") || kw("while") || kw("loop")) {
			if (accept_kw("for")) {
				s.k = PStmt::K::For;
				s.var = ident();
				expect_kw("in");
				s.range = range_or_attr();
			} else if (accept_kw("while")) {
				s.k = PStmt::K::While;
				s.cond = expr();
			} else {
				s.k = PStmt::K::Loop;
			}
			expect_kw("loop");
			s.body = seq_list({"end"});
			expect_kw("end");
			expect_kw("loop");
			end_label(s.label);
			return s;
		}
		if (kw("next") || kw("exit")) {
			s.k = next().s == "next" ? PStmt::K::Next : PStmt::K::Exit;
			if (is_ident())
				s.loop = next().s;
			if (accept_kw("when")) {
				s.cond = expr();
				s.has_cond = true;
			}
			expect(";");
			return s;
		}
		if (accept_kw("return")) {
			s.k = PStmt::K::Return;
			if (!is(";")) {
				s.value = expr();
				s.has_value = true;
			}
			expect(";");
			return s;
		}
		if (accept_kw("null")) {
			s.k = PStmt::K::Null;
			expect(";");
			return s;
		}
		if (is_ident() || is("(")) {
			PExpr target = name();
			if (accept("<=")) {
				s.k = PStmt::K::SigAssign;
				s.target = std::move(target);
				s.value = expr();
				if (kw("after") || kw("when") || is(","))
					unsupported_or("waveforms and conditional assignments in processes are not supported");
				expect(";");
				return s;
			}
			if (accept(":=")) {
				s.k = PStmt::K::VarAssign;
				s.target = std::move(target);
				s.value = expr();
				expect(";");
				return s;
			}
			if (is(";")) {
				next();
				s.k = PStmt::K::Call;
				s.call = std::move(target);
				return s;
			}
			unsupported_or("expected '<=', ':=' or ';'");
		}
		unsupported_or("expected a sequential statement");
	}

	void end_label(const std::string &label) {
		if (is_ident()) {
			const Tok &t = next();
			if (t.s != label)
				error(t.at, "\"end " + t.s + "\" does not match label \"" + label + "\"");
		}
		expect(";");
	}

	void choices(std::vector<PExpr> &out, bool &others) {
		do {
			if (accept_kw("others")) {
				others = true;
				continue;
			}
			PExpr a = expr();
			if (kw("to") || kw("downto")) {
				PExpr r;
				r.k = PExpr::K::Range;
				r.at = a.at;
				r.text = next().s;
				r.args.push_back(std::move(a));
				r.args.push_back(expr());
				out.push_back(std::move(r));
			} else {
				out.push_back(std::move(a));
			}
		} while (accept("|"));
	}

	// --- expressions ------------------------------------------------------------------

	static bool logical_op(const Tok &t) {
		return t.t == T::Id && (t.s == "and" || t.s == "or" || t.s == "xor" || t.s == "nand" || t.s == "nor" ||
				t.s == "xnor");
	}

	PExpr binary(PExpr a, std::string op, PExpr b, const SourceSpan &at) {
		PExpr e;
		e.k = PExpr::K::Binary;
		e.at = at;
		e.text = std::move(op);
		e.args.push_back(std::move(a));
		e.args.push_back(std::move(b));
		return e;
	}

	PExpr unary(std::string op, PExpr a, const SourceSpan &at) {
		PExpr e;
		e.k = PExpr::K::Unary;
		e.at = at;
		e.text = std::move(op);
		e.args.push_back(std::move(a));
		return e;
	}

public:
	PExpr expr() {
		PExpr a = relation();
		if (!logical_op(peek()))
			return a;
		std::string op = peek().s;
		while (logical_op(peek())) {
			const Tok &t = next();
			if (t.s != op)
				error(t.at, "mixed logical operators \"" + op + "\" and \"" + t.s + "\" need parentheses");
			if ((op == "nand" || op == "nor") && a.k == PExpr::K::Binary && a.text == op)
				error(t.at, "\"" + op + "\" is not associative; use parentheses");
			a = binary(std::move(a), op, relation(), t.at);
		}
		return a;
	}

private:
	PExpr relation() {
		PExpr a = shift_expr();
		for (const char *op : {"=", "/=", "<", "<=", ">", ">="}) {
			if (is(op)) {
				SourceSpan at = next().at;
				return binary(std::move(a), op, shift_expr(), at);
			}
		}
		return a;
	}

	PExpr shift_expr() {
		PExpr a = simple_expr();
		for (const char *op : {"sll", "srl", "sla", "sra", "rol", "ror"}) {
			if (kw(op)) {
				SourceSpan at = next().at;
				return binary(std::move(a), op, simple_expr(), at);
			}
		}
		return a;
	}

	PExpr simple_expr() {
		PExpr a;
		if (is("+") || is("-")) {
			const Tok &t = next();
			std::string op = t.s;
			SourceSpan at = t.at;
			a = term();
			if (op == "-")
				a = unary("-", std::move(a), at);
		} else {
			a = term();
		}
		while (is("+") || is("-") || is("&")) {
			const Tok &t = next();
			std::string op = t.s;
			SourceSpan at = t.at;
			a = binary(std::move(a), op, term(), at);
		}
		return a;
	}

	PExpr term() {
		PExpr a = factor();
		while (is("*") || is("/") || kw("mod") || kw("rem")) {
			const Tok &t = next();
			std::string op = t.s;
			SourceSpan at = t.at;
			a = binary(std::move(a), op, factor(), at);
		}
		return a;
	}

	PExpr factor() {
		if (kw("abs") || kw("not")) {
			const Tok &t = next();
			std::string op = t.s;
			SourceSpan at = t.at;
			return unary(op, primary(), at);
		}
		PExpr a = primary();
		if (is("**")) {
			SourceSpan at = next().at;
			return binary(std::move(a), "**", primary(), at);
		}
		return a;
	}

	PExpr primary() {
		const Tok &t = peek();
		PExpr e;
		e.at = t.at;
		switch (t.t) {
		case T::Int:
			e.k = PExpr::K::Int;
			e.ival = next().ival;
			return e;
		case T::Real:
			e.k = PExpr::K::Real;
			e.rval = next().rval;
			return e;
		case T::Char:
			e.k = PExpr::K::Char;
			e.text = next().s;
			return e;
		case T::Str:
			e.k = PExpr::K::Str;
			e.text = next().s;
			return e;
		case T::BitStr:
			e.k = PExpr::K::BitStr;
			e.text = next().s;
			return e;
		case T::Id:
			if (kw("null"))
				error(t.at, "null literals are not supported");
			return name();
		case T::Sym:
			if (is("("))
				return name();
			break;
		default: break;
		}
		unsupported_or("expected an expression");
	}

	// Name with selections, applications and attributes; also the
	// parenthesised expression / aggregate primary.
	PExpr name() {
		PExpr e;
		e.at = peek().at;
		if (accept("(")) {
			auto as = assoc_list();
			expect(")");
			if (as.size() == 1 && as[0].choices.empty() && !as[0].others && as[0].value.k != PExpr::K::Range) {
				e = std::move(as[0].value);
			} else {
				e.k = PExpr::K::Aggregate;
				e.assocs = std::move(as);
			}
			return e;
		}
		e.k = PExpr::K::Name;
		e.text = ident();
		while (true) {
			if (is(".")) {
				SourceSpan at = next().at;
				PExpr s;
				s.k = PExpr::K::Select;
				s.at = at;
				s.text = ident();
				s.args.push_back(std::move(e));
				e = std::move(s);
			} else if (is("(")) {
				SourceSpan at = next().at;
				PExpr s;
				s.k = PExpr::K::Apply;
				s.at = at;
				s.assocs = assoc_list();
				expect(")");
				s.args.push_back(std::move(e));
				e = std::move(s);
			} else if (is("'")) {
				SourceSpan at = next().at;
				if (is("("))
					error(at, "qualified expressions are not supported");
				PExpr s;
				s.k = PExpr::K::Attr;
				s.at = at;
				if (peek().t != T::Id)
					unsupported_or("expected an attribute name");
				s.text = next().s;
				s.args.push_back(std::move(e));
				e = std::move(s);
			} else {
				return e;
			}
		}
	}

	std::vector<Assoc> assoc_list() {
		std::vector<Assoc> out;
		do {
			Assoc a;
			if (accept_kw("others")) {
				a.others = true;
				expect("=>");
				a.value = expr();
				out.push_back(std::move(a));
				continue;
			}
			if (kw("open")) {
				a.value.k = PExpr::K::Open;
				a.value.at = next().at;
				out.push_back(std::move(a));
				continue;
			}
			PExpr first = expr();
			if (kw("to") || kw("downto")) {
				PExpr r;
				r.k = PExpr::K::Range;
				r.at = first.at;
				r.text = next().s;
				r.args.push_back(std::move(first));
				r.args.push_back(expr());
				first = std::move(r);
			}
			if (is("|") || is("=>")) {
				a.choices.push_back(std::move(first));
				while (accept("|"))
					a.choices.push_back(expr());
				expect("=>");
				if (kw("open")) {
					a.value.k = PExpr::K::Open;
					a.value.at = next().at;
				} else {
					a.value = expr();
				}
			} else {
				a.value = std::move(first);
			}
			out.push_back(std::move(a));
		} while (accept(","));
		return out;
	}

	std::vector<Tok> toks_;
	std::size_t pos_ = 0;
	std::vector<Diagnostic> &diags_;
};

} // namespace

PFile parse_file(const std::string &path, const std::string &text, std::vector<Diagnostic> &diags) {
	Lexer lx(path, text);
	auto toks = lx.run(diags);
	Parser p(std::move(toks), diags);
	return p.file();
}

} // namespace vhdlkern::syntax
