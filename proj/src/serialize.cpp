#include "vhdlkern/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "json.hpp"
#include "vhdlkern/error.hpp"

namespace vhdlkern {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string &msg) { fail(ErrorKind::Config, "malformed design file: " + msg); }

const json &at(const json &j, const char *key) {
	if (!j.is_object() || !j.contains(key))
		bad(std::string("missing \"") + key + "\" in " + j.dump().substr(0, 80));
	return j.at(key);
}

template <class T>
T get(const json &j, const char *key) {
	try {
		return at(j, key).get<T>();
	} catch (const json::exception &e) {
		bad(std::string("field \"") + key + "\": " + e.what());
	}
}

ScalarKind kind_from(const std::string &s) {
	for (auto k : {ScalarKind::Bit, ScalarKind::Boolean, ScalarKind::Character, ScalarKind::Integer, ScalarKind::Real,
				 ScalarKind::Time, ScalarKind::Logic})
		if (kind_name(k) == s)
			return k;
	bad("unknown scalar kind \"" + s + "\"");
}

std::string numeric_name(Numeric n) {
	switch (n) {
	case Numeric::None: return "none";
	case Numeric::Unsigned: return "unsigned";
	case Numeric::Signed: return "signed";
	}
	return "none";
}

Numeric numeric_from(const std::string &s) {
	if (s == "unsigned")
		return Numeric::Unsigned;
	if (s == "signed")
		return Numeric::Signed;
	if (s == "none")
		return Numeric::None;
	bad("unknown numeric mode \"" + s + "\"");
}

// --- values -------------------------------------------------------------------

json scalar_json(const Scalar &s) {
	switch (kind_of(s)) {
	case ScalarKind::Bit: return std::string(std::get<Bit>(s).v ? "1" : "0");
	case ScalarKind::Boolean: return std::get<bool>(s);
	case ScalarKind::Character: return std::string(1, std::get<char>(s));
	case ScalarKind::Integer: return std::get<std::int64_t>(s);
	case ScalarKind::Real: return std::get<double>(s);
	case ScalarKind::Time: return std::get<Time>(s).fs;
	case ScalarKind::Logic: return std::string(1, logic9_char(std::get<Logic9>(s)));
	}
	return nullptr;
}

Scalar scalar_from(ScalarKind k, const json &j) {
	try {
		switch (k) {
		case ScalarKind::Bit: {
			auto s = j.get<std::string>();
			if (s != "0" && s != "1")
				bad("bad bit \"" + s + "\"");
			return Bit{s == "1"};
		}
		case ScalarKind::Boolean: return j.get<bool>();
		case ScalarKind::Character: {
			auto s = j.get<std::string>();
			if (s.size() != 1)
				bad("bad character \"" + s + "\"");
			return s[0];
		}
		case ScalarKind::Integer: return j.get<std::int64_t>();
		case ScalarKind::Real: return j.get<double>();
		case ScalarKind::Time: return Time{j.get<std::int64_t>()};
		case ScalarKind::Logic: {
			auto s = j.get<std::string>();
			auto l = s.size() == 1 ? logic9_from_char(s[0]) : std::nullopt;
			if (!l)
				bad("bad std_ulogic \"" + s + "\"");
			return *l;
		}
		}
	} catch (const json::exception &e) {
		bad(std::string("scalar: ") + e.what());
	}
	bad("bad scalar");
}

bool char_like(ScalarKind k) { return k == ScalarKind::Bit || k == ScalarKind::Logic || k == ScalarKind::Character; }

json val_json(const Val &v) {
	json j;
	switch (v.tag()) {
	case ValTag::Scalar:
		j["kind"] = kind_name(v.scalar_kind());
		j["v"] = scalar_json(v.scalar());
		break;
	case ValTag::VecTo:
	case ValTag::VecDownto: {
		j["kind"] = "vector";
		j["dir"] = v.tag() == ValTag::VecTo ? "to" : "downto";
		j["left"] = v.left();
		j["elem"] = kind_name(v.elem_kind());
		if (char_like(v.elem_kind())) {
			std::string s;
			for (const auto &e : v.elems())
				s += scalar_json(e).get<std::string>();
			j["v"] = s;
		} else {
			json a = json::array();
			for (const auto &e : v.elems())
				a.push_back(scalar_json(e));
			j["v"] = a;
		}
		break;
	}
	case ValTag::Record: {
		j["kind"] = "record";
		json a = json::array();
		for (std::size_t k = 0; k < v.members().size(); ++k)
			a.push_back(json{{"field", v.field_names()[k]}, {"v", val_json(v.members()[k])}});
		j["v"] = a;
		break;
	}
	}
	return j;
}

Val val_from(const json &j) {
	auto kind = get<std::string>(j, "kind");
	if (kind == "vector") {
		auto dir = get<std::string>(j, "dir");
		ScalarKind ek = kind_from(get<std::string>(j, "elem"));
		const json &v = at(j, "v");
		std::vector<Scalar> elems;
		if (v.is_string()) {
			for (char c : v.get<std::string>())
				elems.push_back(scalar_from(ek, std::string(1, c)));
		} else {
			for (const auto &e : v)
				elems.push_back(scalar_from(ek, e));
		}
		return Val::vector(dir == "to" ? ValTag::VecTo : ValTag::VecDownto, get<std::int64_t>(j, "left"), ek,
				std::move(elems));
	}
	if (kind == "record") {
		std::vector<std::string> names;
		std::vector<Val> members;
		for (const auto &m : at(j, "v")) {
			names.push_back(get<std::string>(m, "field"));
			members.push_back(val_from(at(m, "v")));
		}
		return Val::record(std::move(names), std::move(members));
	}
	return Val(scalar_from(kind_from(kind), at(j, "v")));
}

// --- types ----------------------------------------------------------------------

json type_json(const TypeDesc &t) {
	json j;
	switch (t.kind) {
	case TypeDesc::Kind::Scalar:
		j["kind"] = "scalar";
		j["scalar"] = kind_name(t.scalar);
		if (t.range_lo) {
			j["lo"] = *t.range_lo;
			j["hi"] = *t.range_hi;
		}
		break;
	case TypeDesc::Kind::Vector:
		j["kind"] = "vector";
		j["elem"] = kind_name(t.scalar);
		j["dir"] = t.downto ? "downto" : "to";
		j["left"] = t.left;
		j["right"] = t.right;
		if (t.numeric != Numeric::None)
			j["numeric"] = numeric_name(t.numeric);
		break;
	case TypeDesc::Kind::Record: {
		j["kind"] = "record";
		json a = json::array();
		for (const auto &[n, ft] : t.fields)
			a.push_back(json{{"field", n}, {"type", type_json(ft)}});
		j["fields"] = a;
		break;
	}
	}
	if (!t.name.empty())
		j["name"] = t.name;
	return j;
}

TypeDesc type_from(const json &j) {
	TypeDesc t;
	auto kind = get<std::string>(j, "kind");
	if (kind == "scalar") {
		t.kind = TypeDesc::Kind::Scalar;
		t.scalar = kind_from(get<std::string>(j, "scalar"));
		if (j.contains("lo")) {
			t.range_lo = get<std::int64_t>(j, "lo");
			t.range_hi = get<std::int64_t>(j, "hi");
		}
	} else if (kind == "vector") {
		t.kind = TypeDesc::Kind::Vector;
		t.scalar = kind_from(get<std::string>(j, "elem"));
		t.downto = get<std::string>(j, "dir") == "downto";
		t.left = get<std::int64_t>(j, "left");
		t.right = get<std::int64_t>(j, "right");
		if (j.contains("numeric"))
			t.numeric = numeric_from(get<std::string>(j, "numeric"));
	} else if (kind == "record") {
		t.kind = TypeDesc::Kind::Record;
		for (const auto &f : at(j, "fields"))
			t.fields.emplace_back(get<std::string>(f, "field"), type_from(at(f, "type")));
	} else {
		bad("unknown type kind \"" + kind + "\"");
	}
	if (j.contains("name"))
		t.name = get<std::string>(j, "name");
	return t;
}

// --- expressions --------------------------------------------------------------

constexpr std::pair<ExprKind, const char *> kExprNames[] = {
	{ExprKind::Unary, "uexp"}, {ExprKind::Logical, "bexpl"}, {ExprKind::Relational, "bexpr"},
	{ExprKind::Shift, "bexps"}, {ExprKind::Arith, "bexpa"}, {ExprKind::Sig, "exp_sig"}, {ExprKind::Prt, "exp_prt"},
	{ExprKind::Var, "exp_var"}, {ExprKind::Con, "exp_con"}, {ExprKind::Nth, "exp_nth"}, {ExprKind::Slice, "exp_sl"},
	{ExprKind::ToList, "exp_tl"}, {ExprKind::ToRevList, "exp_trl"}, {ExprKind::Record, "exp_r"},
};

json expr_json(const Expression &e) {
	json j;
	for (const auto &[k, n] : kExprNames)
		if (k == e.kind)
			j["k"] = n;
	switch (e.kind) {
	case ExprKind::Sig:
	case ExprKind::Prt:
	case ExprKind::Var: j["name"] = e.name; return j;
	case ExprKind::Con: j["value"] = val_json(e.value); return j;
	case ExprKind::Unary:
	case ExprKind::Logical:
	case ExprKind::Relational:
	case ExprKind::Shift:
	case ExprKind::Arith:
		j["op"] = op_name(e.op.op);
		if (e.op.numeric != Numeric::None)
			j["numeric"] = numeric_name(e.op.numeric);
		if (e.op.width != 0)
			j["width"] = e.op.width;
		break;
	case ExprKind::Record: j["fields"] = e.fields; break;
	default: break;
	}
	json a = json::array();
	for (const auto &x : e.args)
		a.push_back(expr_json(x));
	j["args"] = a;
	return j;
}

Expression expr_from(const json &j) {
	auto k = get<std::string>(j, "k");
	Expression e;
	bool found = false;
	for (const auto &[kind, n] : kExprNames) {
		if (k == n) {
			e.kind = kind;
			found = true;
		}
	}
	if (!found)
		bad("unknown expression constructor \"" + k + "\"");
	switch (e.kind) {
	case ExprKind::Sig:
	case ExprKind::Prt:
	case ExprKind::Var: e.name = get<std::string>(j, "name"); return e;
	case ExprKind::Con: e.value = val_from(at(j, "value")); return e;
	case ExprKind::Unary:
	case ExprKind::Logical:
	case ExprKind::Relational:
	case ExprKind::Shift:
	case ExprKind::Arith: {
		Op op;
		if (!op_from_name(get<std::string>(j, "op"), op))
			bad("unknown operator \"" + get<std::string>(j, "op") + "\"");
		Numeric n = j.contains("numeric") ? numeric_from(get<std::string>(j, "numeric")) : Numeric::None;
		std::int64_t w = j.contains("width") ? get<std::int64_t>(j, "width") : 0;
		e.op = make_op(op, n, w);
		break;
	}
	case ExprKind::Record: e.fields = get<std::vector<std::string>>(j, "fields"); break;
	default: break;
	}
	for (const auto &a : at(j, "args"))
		e.args.push_back(expr_from(a));
	std::size_t want = 0;
	switch (e.kind) {
	case ExprKind::Unary:
	case ExprKind::ToList:
	case ExprKind::ToRevList: want = 1; break;
	case ExprKind::Logical:
	case ExprKind::Relational:
	case ExprKind::Shift:
	case ExprKind::Arith:
	case ExprKind::Nth: want = 2; break;
	case ExprKind::Slice: want = 3; break;
	case ExprKind::Record: want = e.fields.size(); break;
	default: break;
	}
	if (e.args.size() != want)
		bad(k + " takes " + std::to_string(want) + " arguments");
	return e;
}

json target_json(const Target &t) {
	json j;
	j["name"] = t.name;
	if (t.range)
		j["range"] = json{{"lo", expr_json(t.range->lo)}, {"hi", expr_json(t.range->hi)}, {"downto", t.range->downto}};
	return j;
}

DiscreteRange range_from(const json &r) {
	return DiscreteRange{expr_from(at(r, "lo")), expr_from(at(r, "hi")), get<bool>(r, "downto")};
}

json range_json(const DiscreteRange &r) {
	return json{{"lo", expr_json(r.lo)}, {"hi", expr_json(r.hi)}, {"downto", r.downto}};
}

Target target_from(const json &j) {
	Target t = lhs(get<std::string>(j, "name"));
	if (j.contains("range"))
		t.range = range_from(j.at("range"));
	return t;
}

json rhs_json(const AsmtRhs &r) { return json{{"others", r.others}, {"expr", expr_json(r.expr)}}; }
AsmtRhs rhs_from(const json &j) { return AsmtRhs{get<bool>(j, "others"), expr_from(at(j, "expr"))}; }

json call_json(const SubProgCall &c) {
	json j;
	j["callee"] = c.callee;
	json a = json::array();
	for (const auto &t : c.args)
		a.push_back(target_json(t));
	j["args"] = a;
	if (c.ret_type)
		j["ret_type"] = type_json(*c.ret_type);
	return j;
}

SubProgCall call_from(const json &j) {
	SubProgCall c;
	c.callee = get<std::string>(j, "callee");
	for (const auto &a : at(j, "args"))
		c.args.push_back(target_from(a));
	if (j.contains("ret_type"))
		c.ret_type = type_from(j.at("ret_type"));
	return c;
}

// --- statements -----------------------------------------------------------------

constexpr std::pair<StmtKind, const char *> kStmtNames[] = {
	{StmtKind::SignalAssign, "sst_sa"}, {StmtKind::VarAssign, "sst_va"}, {StmtKind::If, "sst_if"},
	{StmtKind::Loop, "sst_l"}, {StmtKind::FnCall, "sst_fn"}, {StmtKind::Return, "sst_rt"},
	{StmtKind::ProcCall, "sst_pc"}, {StmtKind::Next, "sst_n"}, {StmtKind::Exit, "sst_e"}, {StmtKind::Null, "sst_nl"},
};

// Shared between core and surface statements: both carry the same fields
// for the core constructors.
template <class S, class BodyFn>
void common_json(json &j, StmtKind k, const S &s, BodyFn body) {
	for (const auto &[kk, n] : kStmtNames)
		if (kk == k)
			j["k"] = n;
	if (!s.name.empty())
		j["name"] = s.name;
	switch (k) {
	case StmtKind::SignalAssign:
	case StmtKind::VarAssign:
		j["target"] = target_json(s.target);
		j["rhs"] = rhs_json(s.rhs);
		break;
	case StmtKind::If:
		j["cond"] = expr_json(s.cond);
		j["then"] = body(s.body);
		j["else"] = body(s.else_body);
		break;
	case StmtKind::Loop:
		j["cond"] = expr_json(s.cond);
		j["body"] = body(s.body);
		break;
	case StmtKind::FnCall:
		j["target"] = target_json(s.target);
		j["call"] = call_json(s.call);
		break;
	case StmtKind::Return: j["rhs"] = rhs_json(s.rhs); break;
	case StmtKind::ProcCall: j["call"] = call_json(s.call); break;
	case StmtKind::Next:
	case StmtKind::Exit:
		j["loop"] = s.loop;
		j["cond"] = expr_json(s.cond);
		break;
	case StmtKind::Null: break;
	}
}

template <class S, class BodyFn>
bool common_from(const json &j, const std::string &k, S &s, StmtKind &kind, BodyFn body) {
	bool found = false;
	for (const auto &[kk, n] : kStmtNames) {
		if (k == n) {
			kind = kk;
			found = true;
		}
	}
	if (!found)
		return false;
	if (j.contains("name"))
		s.name = get<std::string>(j, "name");
	switch (kind) {
	case StmtKind::SignalAssign:
	case StmtKind::VarAssign:
		s.target = target_from(at(j, "target"));
		s.rhs = rhs_from(at(j, "rhs"));
		break;
	case StmtKind::If:
		s.cond = expr_from(at(j, "cond"));
		s.body = body(at(j, "then"));
		s.else_body = body(at(j, "else"));
		break;
	case StmtKind::Loop:
		s.cond = expr_from(at(j, "cond"));
		s.body = body(at(j, "body"));
		break;
	case StmtKind::FnCall:
		s.target = target_from(at(j, "target"));
		s.call = call_from(at(j, "call"));
		break;
	case StmtKind::Return: s.rhs = rhs_from(at(j, "rhs")); break;
	case StmtKind::ProcCall: s.call = call_from(at(j, "call")); break;
	case StmtKind::Next:
	case StmtKind::Exit:
		s.loop = get<std::string>(j, "loop");
		s.cond = expr_from(at(j, "cond"));
		break;
	case StmtKind::Null: break;
	}
	return true;
}

json stmts_json(const std::vector<SeqStmt> &ss);

json stmt_json(const SeqStmt &s) {
	json j;
	common_json(j, s.kind, s, stmts_json);
	return j;
}

json stmts_json(const std::vector<SeqStmt> &ss) {
	json a = json::array();
	for (const auto &s : ss)
		a.push_back(stmt_json(s));
	return a;
}

std::vector<SeqStmt> stmts_from(const json &j);

SeqStmt stmt_from(const json &j) {
	SeqStmt s;
	auto k = get<std::string>(j, "k");
	if (!common_from(j, k, s, s.kind, stmts_from))
		bad("unknown statement constructor \"" + k + "\"");
	return s;
}

std::vector<SeqStmt> stmts_from(const json &j) {
	std::vector<SeqStmt> out;
	for (const auto &x : j)
		out.push_back(stmt_from(x));
	return out;
}

StmtKind core_kind(CStmtKind k) {
	switch (k) {
	case CStmtKind::SignalAssign: return StmtKind::SignalAssign;
	case CStmtKind::VarAssign: return StmtKind::VarAssign;
	case CStmtKind::If: return StmtKind::If;
	case CStmtKind::Loop: return StmtKind::Loop;
	case CStmtKind::FnCall: return StmtKind::FnCall;
	case CStmtKind::Return: return StmtKind::Return;
	case CStmtKind::ProcCall: return StmtKind::ProcCall;
	case CStmtKind::Next: return StmtKind::Next;
	case CStmtKind::Exit: return StmtKind::Exit;
	default: return StmtKind::Null;
	}
}

CStmtKind complex_kind(StmtKind k) {
	switch (k) {
	case StmtKind::SignalAssign: return CStmtKind::SignalAssign;
	case StmtKind::VarAssign: return CStmtKind::VarAssign;
	case StmtKind::If: return CStmtKind::If;
	case StmtKind::Loop: return CStmtKind::Loop;
	case StmtKind::FnCall: return CStmtKind::FnCall;
	case StmtKind::Return: return CStmtKind::Return;
	case StmtKind::ProcCall: return CStmtKind::ProcCall;
	case StmtKind::Next: return CStmtKind::Next;
	case StmtKind::Exit: return CStmtKind::Exit;
	case StmtKind::Null: return CStmtKind::Null;
	}
	return CStmtKind::Null;
}

json cstmts_json(const std::vector<CSeqStmt> &ss);

json cstmt_json(const CSeqStmt &s) {
	json j;
	if (s.kind == CStmtKind::If && !s.elsifs.empty()) {
		j["k"] = "ssc_if";
		if (!s.name.empty())
			j["name"] = s.name;
		j["cond"] = expr_json(s.cond);
		j["then"] = cstmts_json(s.body);
		json e = json::array();
		for (const auto &x : s.elsifs)
			e.push_back(json{{"cond", expr_json(x.cond)}, {"body", cstmts_json(x.body)}});
		j["elsifs"] = e;
		j["else"] = cstmts_json(s.else_body);
		return j;
	}
	if (s.kind == CStmtKind::Case) {
		j["k"] = "ssc_case";
		if (!s.name.empty())
			j["name"] = s.name;
		j["selector"] = expr_json(s.selector);
		json ws = json::array();
		for (const auto &w : s.whens) {
			json cs = json::array();
			for (const auto &c : w.choices) {
				json cj{{"value", expr_json(c.value)}};
				if (c.hi)
					cj["hi"] = expr_json(*c.hi);
				cs.push_back(cj);
			}
			ws.push_back(json{{"choices", cs}, {"body", cstmts_json(w.body)}});
		}
		j["whens"] = ws;
		if (s.has_others)
			j["others"] = cstmts_json(s.others);
		return j;
	}
	if (s.kind == CStmtKind::For) {
		j["k"] = "ssc_for";
		if (!s.name.empty())
			j["name"] = s.name;
		j["var"] = s.var;
		j["range"] = range_json(s.range);
		j["body"] = cstmts_json(s.body);
		return j;
	}
	common_json(j, core_kind(s.kind), s, cstmts_json);
	return j;
}

json cstmts_json(const std::vector<CSeqStmt> &ss) {
	json a = json::array();
	for (const auto &s : ss)
		a.push_back(cstmt_json(s));
	return a;
}

std::vector<CSeqStmt> cstmts_from(const json &j);

CSeqStmt cstmt_from(const json &j) {
	CSeqStmt s;
	auto k = get<std::string>(j, "k");
	if (j.contains("name"))
		s.name = get<std::string>(j, "name");
	if (k == "ssc_if") {
		s.kind = CStmtKind::If;
		s.cond = expr_from(at(j, "cond"));
		s.body = cstmts_from(at(j, "then"));
		for (const auto &e : at(j, "elsifs"))
			s.elsifs.push_back(CElsif{expr_from(at(e, "cond")), cstmts_from(at(e, "body"))});
		s.else_body = cstmts_from(at(j, "else"));
		return s;
	}
	if (k == "ssc_case") {
		s.kind = CStmtKind::Case;
		s.selector = expr_from(at(j, "selector"));
		for (const auto &w : at(j, "whens")) {
			CaseWhen cw;
			for (const auto &c : at(w, "choices")) {
				CaseChoice ch{expr_from(at(c, "value")), std::nullopt};
				if (c.contains("hi"))
					ch.hi = expr_from(c.at("hi"));
				cw.choices.push_back(std::move(ch));
			}
			cw.body = cstmts_from(at(w, "body"));
			s.whens.push_back(std::move(cw));
		}
		if (j.contains("others")) {
			s.has_others = true;
			s.others = cstmts_from(j.at("others"));
		}
		return s;
	}
	if (k == "ssc_for") {
		s.kind = CStmtKind::For;
		s.var = get<std::string>(j, "var");
		s.range = range_from(at(j, "range"));
		s.body = cstmts_from(at(j, "body"));
		return s;
	}
	StmtKind ck = StmtKind::Null;
	if (!common_from(j, k, s, ck, cstmts_from))
		bad("unknown statement constructor \"" + k + "\"");
	s.kind = complex_kind(ck);
	return s;
}

std::vector<CSeqStmt> cstmts_from(const json &j) {
	std::vector<CSeqStmt> out;
	for (const auto &x : j)
		out.push_back(cstmt_from(x));
	return out;
}

// --- declarations -------------------------------------------------------------

std::string mode_str(Mode m) { return std::string(mode_name(m)); }

Mode mode_from(const std::string &s) {
	for (auto m : {Mode::In, Mode::Out, Mode::Inout, Mode::Internal})
		if (mode_name(m) == s)
			return m;
	bad("unknown mode \"" + s + "\"");
}

json spl_json(const Spl &s) {
	if (s.is_leaf()) {
		const SigPrt &l = *s.leaf;
		json j;
		j["k"] = l.kind == SpKind::Port ? "port" : "signal";
		j["name"] = l.name;
		if (l.kind == SpKind::Port)
			j["mode"] = mode_str(l.mode);
		j["type"] = type_json(l.type);
		j["init"] = val_json(l.init);
		if (l.has_default)
			j["has_default"] = true;
		return j;
	}
	json m = json::array();
	for (const auto &x : s.members)
		m.push_back(spl_json(x));
	return json{{"k", "spnl"}, {"name", s.name}, {"members", m}};
}

Spl spl_from(const json &j) {
	auto k = get<std::string>(j, "k");
	if (k == "spnl") {
		std::vector<Spl> ms;
		for (const auto &m : at(j, "members"))
			ms.push_back(spl_from(m));
		return spnl(get<std::string>(j, "name"), std::move(ms));
	}
	SigPrt l;
	l.kind = k == "port" ? SpKind::Port : SpKind::Signal;
	if (k != "port" && k != "signal")
		bad("unknown signal constructor \"" + k + "\"");
	l.name = get<std::string>(j, "name");
	l.mode = j.contains("mode") ? mode_from(get<std::string>(j, "mode")) : Mode::Internal;
	l.type = type_from(at(j, "type"));
	l.init = val_from(at(j, "init"));
	l.has_default = j.contains("has_default") && get<bool>(j, "has_default");
	return spl_leaf(std::move(l));
}

json var_json(const VarTree &t) {
	if (t.is_leaf())
		return json{{"k", "var"}, {"name", t.name}, {"type", type_json(t.leaf->type)}, {"init", val_json(t.leaf->init)}};
	json m = json::array();
	for (const auto &x : t.members)
		m.push_back(var_json(x));
	return json{{"k", "vnl"}, {"name", t.name}, {"members", m}};
}

VarTree var_from(const json &j) {
	VarTree t;
	t.name = get<std::string>(j, "name");
	if (get<std::string>(j, "k") == "vnl") {
		for (const auto &m : at(j, "members"))
			t.members.push_back(var_from(m));
	} else {
		t.leaf = VarDecl{t.name, type_from(at(j, "type")), val_from(at(j, "init"))};
	}
	return t;
}

json env_json(const Environment &e) {
	json sp = json::array(), vs = json::array(), ts = json::array();
	for (const auto &s : e.sigprts)
		sp.push_back(spl_json(s));
	for (const auto &v : e.variables)
		vs.push_back(var_json(v));
	for (const auto &[n, t] : e.types)
		ts.push_back(json{{"name", n}, {"type", type_json(t)}});
	return json{{"sigprts", sp}, {"variables", vs}, {"types", ts}};
}

Environment env_from(const json &j) {
	Environment e;
	for (const auto &s : at(j, "sigprts"))
		e.sigprts.push_back(spl_from(s));
	for (const auto &v : at(j, "variables"))
		e.variables.push_back(var_from(v));
	if (j.contains("types"))
		for (const auto &t : j.at("types"))
			e.types.emplace_back(get<std::string>(t, "name"), type_from(at(t, "type")));
	return e;
}

json formals_json(const std::vector<Formal> &fs) {
	json a = json::array();
	for (const auto &f : fs)
		a.push_back(json{{"var", f.var}, {"mode", mode_str(f.mode)}});
	return a;
}

std::vector<Formal> formals_from(const json &j) {
	std::vector<Formal> out;
	for (const auto &f : j)
		out.push_back(Formal{get<std::string>(f, "var"), mode_from(get<std::string>(f, "mode"))});
	return out;
}

template <class Sub, class BodyFn>
json sub_json(const Sub &s, BodyFn body) {
	json j{{"k", s.kind == SubKind::Function ? "function" : "procedure"}, {"name", s.name},
			{"formals", formals_json(s.formals)}, {"locals", s.locals}};
	if (s.ret_type)
		j["ret_type"] = type_json(*s.ret_type);
	j["body"] = body(s.body);
	return j;
}

template <class Sub, class BodyFn>
Sub sub_from(const json &j, BodyFn body) {
	Sub s;
	s.name = get<std::string>(j, "name");
	s.kind = get<std::string>(j, "k") == "procedure" ? SubKind::Procedure : SubKind::Function;
	s.formals = formals_from(at(j, "formals"));
	s.locals = get<std::vector<std::string>>(j, "locals");
	if (j.contains("ret_type"))
		s.ret_type = type_from(j.at("ret_type"));
	s.body = body(at(j, "body"));
	return s;
}

json comps_json(const std::vector<ComponentInst> &cs) {
	json a = json::array();
	for (const auto &c : cs) {
		json pm = json::array();
		for (const auto &[f, t] : c.port_map)
			pm.push_back(json::array({f, t}));
		a.push_back(json{{"label", c.label}, {"design", c.design}, {"port_map", pm}});
	}
	return a;
}

std::vector<ComponentInst> comps_from(const json &j) {
	std::vector<ComponentInst> out;
	for (const auto &c : j) {
		ComponentInst ci{get<std::string>(c, "label"), get<std::string>(c, "design"), {}};
		for (const auto &p : at(c, "port_map"))
			ci.port_map.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
		out.push_back(std::move(ci));
	}
	return out;
}

json res_json(const std::map<std::string, std::string> &r) {
	json j = json::object();
	for (const auto &[k, v] : r)
		j[k] = v;
	return j;
}

std::map<std::string, std::string> res_from(const json &j) {
	std::map<std::string, std::string> out;
	for (const auto &[k, v] : j.items())
		out[k] = v.get<std::string>();
	return out;
}

json parse_registry(const std::string &text) {
	json j;
	try {
		j = json::parse(text);
	} catch (const json::parse_error &e) {
		bad(e.what());
	}
	if (!j.is_object() || !j.contains("designs") || !j.at("designs").is_array())
		bad("expected an object with a \"designs\" array");
	return j;
}

} // namespace

std::string dump_core(const std::vector<Design> &designs) {
	json a = json::array();
	for (const auto &d : designs) {
		json ps = json::array(), ss = json::array();
		for (const auto &p : d.processes)
			ps.push_back(json{{"k", "cst_ps"}, {"name", p.name}, {"sensitivity", p.sensitivity}, {"body", stmts_json(p.body)}});
		for (const auto &s : d.subprograms)
			ss.push_back(sub_json(s, stmts_json));
		a.push_back(json{{"name", d.name}, {"env", env_json(d.env)}, {"res_fn", res_json(d.res_fn)}, {"processes", ps},
				{"subprograms", ss}, {"components", comps_json(d.components)}});
	}
	return json{{"form", "core"}, {"designs", a}}.dump(1, '\t') + "\n";
}

std::vector<Design> load_core(const std::string &text) {
	json j = parse_registry(text);
	if (j.contains("form") && j.at("form") != "core")
		bad("expected a core-form design file");
	std::vector<Design> out;
	for (const auto &dj : j.at("designs")) {
		Design d;
		d.name = get<std::string>(dj, "name");
		d.env = env_from(at(dj, "env"));
		if (dj.contains("res_fn"))
			d.res_fn = res_from(dj.at("res_fn"));
		for (const auto &p : at(dj, "processes"))
			d.processes.push_back(ConcStmt{get<std::string>(p, "name"), get<std::vector<std::string>>(p, "sensitivity"),
					stmts_from(at(p, "body"))});
		if (dj.contains("subprograms"))
			for (const auto &s : dj.at("subprograms"))
				d.subprograms.push_back(sub_from<Subprogram>(s, stmts_from));
		if (dj.contains("components"))
			d.components = comps_from(dj.at("components"));
		out.push_back(std::move(d));
	}
	return out;
}

namespace {

json cconc_json(const CConcStmt &c) {
	json j;
	j["name"] = c.name;
	switch (c.kind) {
	case CConcKind::Process:
		j["k"] = "cst_ps";
		j["sensitivity"] = c.sensitivity;
		j["body"] = cstmts_json(c.body);
		break;
	case CConcKind::CondAssign: {
		j["k"] = "csc_ca";
		j["target"] = target_json(c.target);
		json ws = json::array();
		for (const auto &w : c.whens)
			ws.push_back(json{{"rhs", rhs_json(w.rhs)}, {"cond", expr_json(w.cond)}});
		j["whens"] = ws;
		if (c.else_rhs)
			j["else"] = rhs_json(*c.else_rhs);
		break;
	}
	case CConcKind::Generate: {
		j["k"] = "csc_gen";
		if (c.for_gen) {
			j["gen"] = "for_gen";
			j["var"] = c.var;
			j["range"] = range_json(c.range);
		} else {
			j["gen"] = "if_gen";
			j["cond"] = expr_json(c.cond);
		}
		json b = json::array();
		for (const auto &x : c.gen_body)
			b.push_back(cconc_json(x));
		j["body"] = b;
		break;
	}
	}
	return j;
}

CConcStmt cconc_from(const json &j) {
	CConcStmt c;
	c.name = get<std::string>(j, "name");
	auto k = get<std::string>(j, "k");
	if (k == "cst_ps") {
		c.kind = CConcKind::Process;
		c.sensitivity = get<std::vector<std::string>>(j, "sensitivity");
		c.body = cstmts_from(at(j, "body"));
	} else if (k == "csc_ca") {
		c.kind = CConcKind::CondAssign;
		c.target = target_from(at(j, "target"));
		for (const auto &w : at(j, "whens"))
			c.whens.push_back(AsWhen{rhs_from(at(w, "rhs")), expr_from(at(w, "cond"))});
		if (j.contains("else"))
			c.else_rhs = rhs_from(j.at("else"));
	} else if (k == "csc_gen") {
		c.kind = CConcKind::Generate;
		c.for_gen = get<std::string>(j, "gen") == "for_gen";
		if (c.for_gen) {
			c.var = get<std::string>(j, "var");
			c.range = range_from(at(j, "range"));
		} else {
			c.cond = expr_from(at(j, "cond"));
		}
		for (const auto &x : at(j, "body"))
			c.gen_body.push_back(cconc_from(x));
	} else {
		bad("unknown concurrent statement constructor \"" + k + "\"");
	}
	return c;
}

} // namespace

std::string dump_complex(const std::vector<ComplexDesign> &designs) {
	json a = json::array();
	for (const auto &d : designs) {
		json ps = json::array(), ss = json::array();
		for (const auto &p : d.processes)
			ps.push_back(cconc_json(p));
		for (const auto &s : d.subprograms)
			ss.push_back(sub_json(s, cstmts_json));
		a.push_back(json{{"name", d.name}, {"env", env_json(d.env)}, {"res_fn", res_json(d.res_fn)}, {"processes", ps},
				{"subprograms", ss}, {"components", comps_json(d.components)}});
	}
	return json{{"form", "complex"}, {"designs", a}}.dump(1, '\t') + "\n";
}

std::vector<ComplexDesign> load_complex(const std::string &text) {
	json j = parse_registry(text);
	if (j.contains("form") && j.at("form") != "complex")
		bad("expected a complex-form design file");
	std::vector<ComplexDesign> out;
	for (const auto &dj : j.at("designs")) {
		ComplexDesign d;
		d.name = get<std::string>(dj, "name");
		d.env = env_from(at(dj, "env"));
		if (dj.contains("res_fn"))
			d.res_fn = res_from(dj.at("res_fn"));
		for (const auto &p : at(dj, "processes"))
			d.processes.push_back(cconc_from(p));
		if (dj.contains("subprograms"))
			for (const auto &s : dj.at("subprograms"))
				d.subprograms.push_back(sub_from<CSubprogram>(s, cstmts_from));
		if (dj.contains("components"))
			d.components = comps_from(dj.at("components"));
		out.push_back(std::move(d));
	}
	return out;
}

std::string dump_value(const Val &v) { return val_json(v).dump(); }

Val load_value(const std::string &text) {
	try {
		return val_from(json::parse(text));
	} catch (const json::parse_error &e) {
		bad(e.what());
	}
}

// --- state text -----------------------------------------------------------------

std::vector<std::string> state_lines(const SimState &st, const Design &d, const std::string &prefix) {
	const auto &ix = d.idx();
	std::vector<std::string> out;
	for (std::size_t k = 0; k < ix.leaves.size(); ++k)
		out.push_back(prefix + ix.leaves[k].name + " = " + to_string(st.sp[k]));
	for (std::size_t k = 0; k < ix.vars.size(); ++k)
		out.push_back(prefix + ix.vars[k].name + " = " + to_string(st.var[k]));
	return out;
}

namespace {
std::string join_sorted(std::vector<std::string> lines) {
	std::sort(lines.begin(), lines.end());
	std::string out;
	for (const auto &l : lines)
		out += l + "\n";
	return out;
}

void arch_lines(const DesignRegistry &reg, const ArchState &s, const std::string &prefix, std::vector<std::string> &out) {
	if (const Design *d = reg.find(s.name)) {
		auto l = state_lines(s.local, *d, prefix);
		out.insert(out.end(), l.begin(), l.end());
	}
	for (const auto &[pm, c] : s.children)
		arch_lines(reg, c, prefix + c.instance + ".", out);
}
} // namespace

std::string dump_state(const SimState &st, const Design &d) { return join_sorted(state_lines(st, d)); }

std::string dump_arch_state(const DesignRegistry &reg, const ArchState &s) {
	std::vector<std::string> lines;
	arch_lines(reg, s, "", lines);
	return join_sorted(std::move(lines));
}

// --- literals -------------------------------------------------------------------

namespace {

std::string lower(std::string s) {
	for (auto &c : s)
		c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	return s;
}

[[noreturn]] void bad_literal(const std::string &text, const TypeDesc &t) {
	fail(ErrorKind::Config, "cannot read \"" + text + "\" as a value of type " + to_string(t));
}

std::optional<std::int64_t> parse_int(const std::string &s) {
	if (s.empty())
		return std::nullopt;
	char *end = nullptr;
	errno = 0;
	long long v = std::strtoll(s.c_str(), &end, 10);
	if (errno || *end)
		return std::nullopt;
	return v;
}

std::string hex_to_bits(const std::string &h) {
	std::string out;
	for (char c : h) {
		if (c == '_')
			continue;
		int v;
		if (c >= '0' && c <= '9')
			v = c - '0';
		else if (c >= 'a' && c <= 'f')
			v = c - 'a' + 10;
		else
			return {};
		for (int b = 3; b >= 0; --b)
			out += (v >> b) & 1 ? '1' : '0';
	}
	return out;
}

} // namespace

Val parse_value(const std::string &raw, const TypeDesc &t) {
	std::string text = raw;
	while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
		text.pop_back();
	while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
		text.erase(text.begin());
	std::string lt = lower(text);
	switch (t.kind) {
	case TypeDesc::Kind::Scalar:
		switch (t.scalar) {
		case ScalarKind::Integer:
			if (auto v = parse_int(text))
				return conform(Val::integer(*v), t, "stimulus");
			break;
		case ScalarKind::Boolean:
			if (lt == "true" || lt == "false")
				return Val::boolean(lt == "true");
			break;
		case ScalarKind::Bit:
		case ScalarKind::Logic:
		case ScalarKind::Character: {
			std::string c = text;
			if (c.size() == 3 && c.front() == '\'' && c.back() == '\'')
				c = c.substr(1, 1);
			if (c.size() != 1)
				break;
			if (t.scalar == ScalarKind::Character)
				return Val::character(c[0]);
			if (t.scalar == ScalarKind::Bit && (c[0] == '0' || c[0] == '1'))
				return Val::bit(c[0] == '1');
			if (t.scalar == ScalarKind::Logic)
				if (auto l = logic9_from_char(c[0]))
					return Val::logic(*l);
			break;
		}
		case ScalarKind::Real: {
			char *end = nullptr;
			double v = std::strtod(text.c_str(), &end);
			if (!text.empty() && !*end)
				return Val::real(v);
			break;
		}
		case ScalarKind::Time:
			if (auto v = parse_int(text))
				return Val::time(*v);
			break;
		}
		bad_literal(raw, t);
	case TypeDesc::Kind::Vector: {
		std::string body;
		if (lt.size() >= 3 && lt[0] == 'x' && lt[1] == '"' && lt.back() == '"') {
			body = hex_to_bits(lt.substr(2, lt.size() - 3));
			if (body.empty())
				bad_literal(raw, t);
		} else if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
			body = text.substr(1, text.size() - 2);
		} else if (auto v = parse_int(text); v && t.scalar != ScalarKind::Character) {
			// Integer for a bit/logic vector: two's complement at the vector width.
			auto n = t.length();
			for (std::int64_t k = n - 1; k >= 0; --k)
				body += k < 64 && ((static_cast<std::uint64_t>(*v) >> k) & 1) ? '1' : (k >= 64 && *v < 0 ? '1' : '0');
		} else {
			body = text;
		}
		try {
			return conform(Val::vector_from_string(t.vec_tag(), t.left, t.scalar, body), t, "stimulus");
		} catch (const SimError &) {
			bad_literal(raw, t);
		}
	}
	case TypeDesc::Kind::Record: break;
	}
	bad_literal(raw, t);
}

} // namespace vhdlkern
