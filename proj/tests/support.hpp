#pragma once

// Helpers for building core designs by hand in tests.

#include "vhdlkern/ast.hpp"
#include "vhdlkern/state.hpp"

namespace vt {

using namespace vhdlkern;

inline TypeDesc int_t() { return TypeDesc::scalar_of(ScalarKind::Integer); }
inline TypeDesc bit_t() { return TypeDesc::scalar_of(ScalarKind::Bit); }
inline TypeDesc bool_t() { return TypeDesc::scalar_of(ScalarKind::Boolean); }
inline TypeDesc logic_t() { return TypeDesc::scalar_of(ScalarKind::Logic, "std_logic"); }
inline TypeDesc slv_t(std::int64_t hi, std::int64_t lo = 0) {
	return TypeDesc::vector_of(ScalarKind::Logic, true, hi, lo, "std_logic_vector");
}
inline TypeDesc bv_t(std::int64_t hi, std::int64_t lo = 0) {
	return TypeDesc::vector_of(ScalarKind::Bit, true, hi, lo, "bit_vector");
}

inline Spl signal(const std::string &name, TypeDesc t, Val init) {
	SigPrt s;
	s.kind = SpKind::Signal;
	s.name = name;
	s.type = std::move(t);
	s.init = std::move(init);
	return spl_leaf(std::move(s));
}

inline Spl signal(const std::string &name, TypeDesc t) {
	Val init = default_value(t);
	return signal(name, std::move(t), std::move(init));
}

inline Spl port(const std::string &name, Mode m, TypeDesc t) {
	Spl s = signal(name, std::move(t));
	s.leaf->kind = SpKind::Port;
	s.leaf->mode = m;
	return s;
}

inline VarTree variable(const std::string &name, TypeDesc t, std::optional<Val> init = std::nullopt) {
	VarTree v;
	v.name = name;
	Val iv = init ? *init : default_value(t);
	v.leaf = VarDecl{name, std::move(t), std::move(iv)};
	return v;
}

inline Expression ci(std::int64_t v) { return exp_con(Val::integer(v)); }
inline Expression cb(bool v) { return exp_con(Val::boolean(v)); }
inline Expression cl(char c) { return exp_con(Val::logic(*logic9_from_char(c))); }

inline ConcStmt process(const std::string &name, std::vector<std::string> sens, std::vector<SeqStmt> body) {
	return ConcStmt{name, std::move(sens), std::move(body)};
}

inline Design linked(Design d) {
	link(d);
	return d;
}

inline std::int64_t sig_int(const SimState &st, const Design &d, const std::string &n) {
	return signal_value(st, d, n).as_int();
}

/// The four-signal example: process (M, N) with M <= 1; N <= 2; X <= M + N;
/// M <= 3; Y <= M + N.
inline Design mnxy() {
	Design d;
	d.name = "mnxy";
	for (const char *n : {"m", "n", "x", "y"})
		d.env.sigprts.push_back(signal(n, int_t(), Val::integer(0)));
	auto sum = [] { return bexpa(exp_sig("m"), Op::Add, exp_sig("n")); };
	d.processes.push_back(process("p", {"m", "n"},
			{sst_sa("s1", lhs("m"), rhs_e(ci(1))), sst_sa("s2", lhs("n"), rhs_e(ci(2))),
					sst_sa("s3", lhs("x"), rhs_e(sum())), sst_sa("s4", lhs("m"), rhs_e(ci(3))),
					sst_sa("s5", lhs("y"), rhs_e(sum()))}));
	return linked(std::move(d));
}

} // namespace vt
