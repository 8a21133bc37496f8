#include "vhdlkern/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vhdlkern/error.hpp"

namespace vhdlkern {

namespace {

[[noreturn]] void type_error(std::string_view op, const Val &v) {
	fail(ErrorKind::Eval, "operator \"" + std::string(op) + "\" not defined for operand " + to_string(v));
}

[[noreturn]] void type_error(std::string_view op, const Val &a, const Val &b) {
	fail(ErrorKind::Eval, "operator \"" + std::string(op) + "\" not defined for operands " +
			to_string(a) + " and " + to_string(b));
}

[[noreturn]] void overflow(std::string_view op) {
	fail(ErrorKind::Overflow, "integer overflow in \"" + std::string(op) + "\"");
}

std::int64_t add_checked(std::int64_t x, std::int64_t y, std::string_view op) {
	std::int64_t r;
	if (__builtin_add_overflow(x, y, &r))
		overflow(op);
	return r;
}

std::int64_t sub_checked(std::int64_t x, std::int64_t y, std::string_view op) {
	std::int64_t r;
	if (__builtin_sub_overflow(x, y, &r))
		overflow(op);
	return r;
}

std::int64_t mul_checked(std::int64_t x, std::int64_t y, std::string_view op) {
	std::int64_t r;
	if (__builtin_mul_overflow(x, y, &r))
		overflow(op);
	return r;
}

// ---------------------------------------------------------------------------
// Arbitrary-width two's complement arithmetic on bit/logic vectors. Bits are
// kept LSB first.

struct Bits {
	std::vector<std::uint8_t> b;
	bool unknown = false;
	std::size_t width() const { return b.size(); }
	bool msb() const { return !b.empty() && b.back(); }
};

Bits to_bits(const Val &v, std::string_view op) {
	Bits out;
	out.b.resize(v.elems().size());
	const auto &e = v.elems();
	for (std::size_t k = 0; k < e.size(); ++k) {
		const Scalar &s = e[e.size() - 1 - k];
		switch (kind_of(s)) {
		case ScalarKind::Bit: out.b[k] = std::get<Bit>(s).v; break;
		case ScalarKind::Boolean: out.b[k] = std::get<bool>(s); break;
		case ScalarKind::Logic: {
			auto bv = logic9_to_bool(std::get<Logic9>(s));
			if (!bv)
				out.unknown = true;
			out.b[k] = bv.value_or(false);
			break;
		}
		default: type_error(op, v);
		}
	}
	return out;
}

Bits extend(const Bits &x, std::size_t w, bool is_signed) {
	Bits r = x;
	std::uint8_t fill = (is_signed && x.msb()) ? 1 : 0;
	r.b.resize(w, fill);
	return r;
}

Bits bits_of_int(std::int64_t value, std::size_t w) {
	Bits r;
	r.b.resize(w);
	auto u = static_cast<std::uint64_t>(value);
	for (std::size_t k = 0; k < w; ++k)
		r.b[k] = k < 64 ? (u >> k) & 1u : (value < 0 ? 1 : 0);
	return r;
}

Bits add_bits(const Bits &a, const Bits &b, bool carry_in) {
	Bits r;
	r.b.resize(a.width());
	unsigned carry = carry_in;
	for (std::size_t k = 0; k < a.width(); ++k) {
		unsigned s = a.b[k] + b.b[k] + carry;
		r.b[k] = s & 1u;
		carry = s >> 1;
	}
	return r;
}

Bits invert(const Bits &a) {
	Bits r = a;
	for (auto &x : r.b)
		x ^= 1u;
	return r;
}

Bits negate(const Bits &a) {
	Bits zero;
	zero.b.assign(a.width(), 0);
	return add_bits(invert(a), zero, true);
}

Bits mul_bits(const Bits &a, const Bits &b) {
	Bits acc;
	acc.b.assign(a.width(), 0);
	for (std::size_t k = 0; k < b.width(); ++k) {
		if (!b.b[k])
			continue;
		Bits shifted;
		shifted.b.assign(a.width(), 0);
		for (std::size_t j = 0; j + k < a.width(); ++j)
			shifted.b[j + k] = a.b[j];
		acc = add_bits(acc, shifted, false);
	}
	return acc;
}

bool is_zero(const Bits &a) {
	return std::all_of(a.b.begin(), a.b.end(), [](std::uint8_t x) { return x == 0; });
}

// Unsigned compare of equal-width values: -1, 0, 1.
int ucompare(const Bits &a, const Bits &b) {
	for (std::size_t k = a.width(); k-- > 0;) {
		if (a.b[k] != b.b[k])
			return a.b[k] < b.b[k] ? -1 : 1;
	}
	return 0;
}

// Unsigned long division, both operands of the same width.
void udivmod(const Bits &n, const Bits &d, Bits &q, Bits &r) {
	std::size_t w = n.width();
	q.b.assign(w, 0);
	r.b.assign(w, 0);
	for (std::size_t k = w; k-- > 0;) {
		for (std::size_t j = w; j-- > 1;)
			r.b[j] = r.b[j - 1];
		r.b[0] = n.b[k];
		if (ucompare(r, d) >= 0) {
			r = add_bits(r, invert(d), true);
			q.b[k] = 1;
		}
	}
}

int numeric_compare(const Bits &a, const Bits &b, bool is_signed) {
	std::size_t w = std::max(a.width(), b.width()) + 1;
	Bits x = extend(a, w, is_signed);
	Bits y = extend(b, w, is_signed);
	if (is_signed && x.msb() != y.msb())
		return x.msb() ? -1 : 1;
	return ucompare(x, y);
}

Val from_bits(const Bits &x, ScalarKind elem) {
	std::vector<Scalar> out(x.width());
	for (std::size_t k = 0; k < x.width(); ++k) {
		Scalar s;
		std::uint8_t bit = x.b[x.width() - 1 - k];
		if (elem == ScalarKind::Logic)
			s = x.unknown ? Logic9::X : (bit ? Logic9::L1 : Logic9::L0);
		else if (elem == ScalarKind::Boolean)
			s = static_cast<bool>(bit);
		else
			s = Bit{bit != 0};
		out[k] = s;
	}
	auto w = static_cast<std::int64_t>(x.width());
	return Val::vector(ValTag::VecDownto, w - 1, elem, std::move(out));
}

std::int64_t bits_to_int(const Bits &x, bool is_signed) {
	if (x.unknown)
		return 0;
	std::size_t w = x.width();
	if (w == 0)
		return 0;
	bool neg = is_signed && x.msb();
	// Every bit above 62 must equal the sign for the value to fit.
	for (std::size_t k = 63; k < w; ++k) {
		if (x.b[k] != (neg ? 1 : 0))
			fail(ErrorKind::Overflow, "vector value does not fit in an integer");
	}
	std::size_t low = std::min<std::size_t>(w, 63);
	std::uint64_t u = 0;
	for (std::size_t k = 0; k < low; ++k)
		u |= static_cast<std::uint64_t>(x.b[k]) << k;
	if (neg)
		for (std::size_t k = low; k < 64; ++k)
			u |= std::uint64_t{1} << k;
	return static_cast<std::int64_t>(u);
}

bool is_bitlike(ScalarKind k) {
	return k == ScalarKind::Bit || k == ScalarKind::Logic || k == ScalarKind::Boolean;
}

// ---------------------------------------------------------------------------
// Scalar helpers.

Scalar logical_scalar(Op op, const Scalar &a, const Scalar &b, const Val &va, const Val &vb) {
	if (a.index() != b.index())
		type_error(op_name(op), va, vb);
	auto apply_bool = [op](bool x, bool y) {
		switch (op) {
		case Op::And: return x && y;
		case Op::Or: return x || y;
		case Op::Nand: return !(x && y);
		case Op::Nor: return !(x || y);
		case Op::Xor: return x != y;
		default: return x == y; // xnor
		}
	};
	switch (kind_of(a)) {
	case ScalarKind::Bit: return Bit{apply_bool(std::get<Bit>(a).v, std::get<Bit>(b).v)};
	case ScalarKind::Boolean: return apply_bool(std::get<bool>(a), std::get<bool>(b));
	case ScalarKind::Logic: {
		Logic9 x = std::get<Logic9>(a), y = std::get<Logic9>(b);
		switch (op) {
		case Op::And: return logic9_and(x, y);
		case Op::Or: return logic9_or(x, y);
		case Op::Nand: return logic9_not(logic9_and(x, y));
		case Op::Nor: return logic9_not(logic9_or(x, y));
		case Op::Xor: return logic9_xor(x, y);
		default: return logic9_not(logic9_xor(x, y));
		}
	}
	default: type_error(op_name(op), va, vb);
	}
}

Scalar not_scalar(const Scalar &a, const Val &v) {
	switch (kind_of(a)) {
	case ScalarKind::Bit: return Bit{!std::get<Bit>(a).v};
	case ScalarKind::Boolean: return !std::get<bool>(a);
	case ScalarKind::Logic: return logic9_not(std::get<Logic9>(a));
	default: type_error("not", v);
	}
}

// Ordering of two scalars of the same kind.
int compare_scalar(const Scalar &a, const Scalar &b, const Val &va, const Val &vb) {
	if (a.index() != b.index())
		type_error("=", va, vb);
	auto cmp = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
	switch (kind_of(a)) {
	case ScalarKind::Bit: return cmp(std::get<Bit>(a).v, std::get<Bit>(b).v);
	case ScalarKind::Boolean: return cmp(std::get<bool>(a), std::get<bool>(b));
	case ScalarKind::Character:
		return cmp(static_cast<unsigned char>(std::get<char>(a)), static_cast<unsigned char>(std::get<char>(b)));
	case ScalarKind::Integer: return cmp(std::get<std::int64_t>(a), std::get<std::int64_t>(b));
	case ScalarKind::Real: return cmp(std::get<double>(a), std::get<double>(b));
	case ScalarKind::Time: return cmp(std::get<Time>(a).fs, std::get<Time>(b).fs);
	case ScalarKind::Logic: return cmp(static_cast<int>(std::get<Logic9>(a)), static_cast<int>(std::get<Logic9>(b)));
	}
	return 0;
}

// Equality (structural) of any two values; types must agree.
bool values_equal(const Val &a, const Val &b) {
	if (a.is_scalar() && b.is_scalar())
		return compare_scalar(a.scalar(), b.scalar(), a, b) == 0;
	if (a.is_vector() && b.is_vector()) {
		if (a.elem_kind() != b.elem_kind())
			type_error("=", a, b);
		return a.elems() == b.elems();
	}
	if (a.is_record() && b.is_record()) {
		if (a.field_names() != b.field_names())
			type_error("=", a, b);
		for (std::size_t k = 0; k < a.members().size(); ++k)
			if (!values_equal(a.members()[k], b.members()[k]))
				return false;
		return true;
	}
	type_error("=", a, b);
}

// Dictionary order over elements, left to right.
int compare_values(const Val &a, const Val &b) {
	if (a.is_scalar() && b.is_scalar())
		return compare_scalar(a.scalar(), b.scalar(), a, b);
	if (a.is_vector() && b.is_vector()) {
		if (a.elem_kind() != b.elem_kind())
			type_error("<", a, b);
		const auto &x = a.elems();
		const auto &y = b.elems();
		std::size_t n = std::min(x.size(), y.size());
		for (std::size_t k = 0; k < n; ++k) {
			int c = compare_scalar(x[k], y[k], a, b);
			if (c != 0)
				return c;
		}
		return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
	}
	type_error("<", a, b);
}

std::int64_t int_pow(std::int64_t base, std::int64_t exp) {
	if (exp < 0)
		fail(ErrorKind::Eval, "\"**\" requires a non-negative exponent");
	if (base == 0)
		return exp == 0 ? 1 : 0;
	if (base == 1)
		return 1;
	if (base == -1)
		return exp % 2 == 0 ? 1 : -1;
	// |base| >= 2, so overflow ends the loop within 63 steps.
	std::int64_t r = 1;
	for (std::int64_t k = 0; k < exp; ++k)
		r = mul_checked(r, base, "**");
	return r;
}

Scalar arith_scalar(Op op, const Val &va, const Val &vb) {
	const Scalar &a = va.scalar();
	const Scalar &b = vb.scalar();
	std::string_view name = op_name(op);
	if (kind_of(a) == ScalarKind::Integer && kind_of(b) == ScalarKind::Integer) {
		std::int64_t x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
		switch (op) {
		case Op::Add: return add_checked(x, y, name);
		case Op::Sub: return sub_checked(x, y, name);
		case Op::Mul: return mul_checked(x, y, name);
		case Op::Div:
		case Op::Rem:
		case Op::Mod: {
			if (y == 0)
				fail(ErrorKind::DivByZero, "division by zero");
			if (x == INT64_MIN && y == -1) {
				if (op == Op::Div)
					fail(ErrorKind::Overflow, "integer overflow in \"/\"");
				return std::int64_t{0};
			}
			if (op == Op::Div)
				return x / y;
			std::int64_t rem = x % y;
			if (op == Op::Mod && rem != 0 && ((rem < 0) != (y < 0)))
				rem += y;
			return rem;
		}
		case Op::Pow: return int_pow(x, y);
		default: break;
		}
	}
	if (kind_of(a) == ScalarKind::Real && kind_of(b) == ScalarKind::Real) {
		double x = std::get<double>(a), y = std::get<double>(b);
		switch (op) {
		case Op::Add: return x + y;
		case Op::Sub: return x - y;
		case Op::Mul: return x * y;
		case Op::Div:
			if (y == 0.0)
				fail(ErrorKind::DivByZero, "division by zero");
			return x / y;
		default: break;
		}
	}
	if (kind_of(a) == ScalarKind::Time && kind_of(b) == ScalarKind::Time) {
		std::int64_t x = std::get<Time>(a).fs, y = std::get<Time>(b).fs;
		if (op == Op::Add)
			return Time{add_checked(x, y, name)};
		if (op == Op::Sub)
			return Time{sub_checked(x, y, name)};
	}
	if (kind_of(a) == ScalarKind::Time && kind_of(b) == ScalarKind::Integer && op == Op::Mul)
		return Time{mul_checked(std::get<Time>(a).fs, std::get<std::int64_t>(b), name)};
	type_error(name, va, vb);
}

Val vector_arith(const OpKind &op, const Val &a, const Val &b) {
	std::string_view name = op_name(op.op);
	bool is_signed = op.numeric == Numeric::Signed;
	if (op.numeric == Numeric::None)
		fail(ErrorKind::Eval, "operator \"" + std::string(name) +
				"\" on vectors needs a signed or unsigned interpretation");

	// Integer operands take the width of the vector operand.
	Bits x, y;
	ScalarKind elem = ScalarKind::Logic;
	if (a.is_vector() && b.is_vector()) {
		x = to_bits(a, name);
		y = to_bits(b, name);
		elem = a.elem_kind();
	} else if (a.is_vector() && b.is_scalar() && b.scalar_kind() == ScalarKind::Integer) {
		x = to_bits(a, name);
		if (!is_signed && b.as_int() < 0)
			fail(ErrorKind::Eval, "negative integer operand for unsigned \"" + std::string(name) + "\"");
		y = bits_of_int(b.as_int(), x.width());
		elem = a.elem_kind();
	} else if (b.is_vector() && a.is_scalar() && a.scalar_kind() == ScalarKind::Integer) {
		y = to_bits(b, name);
		if (!is_signed && a.as_int() < 0)
			fail(ErrorKind::Eval, "negative integer operand for unsigned \"" + std::string(name) + "\"");
		x = bits_of_int(a.as_int(), y.width());
		elem = b.elem_kind();
	} else {
		type_error(name, a, b);
	}

	bool unknown = x.unknown || y.unknown;
	std::size_t w = 0;
	switch (op.op) {
	case Op::Add:
	case Op::Sub: w = std::max(x.width(), y.width()); break;
	case Op::Mul: w = x.width() + y.width(); break;
	case Op::Div: w = x.width(); break;
	default: w = y.width(); break; // mod, rem
	}
	Bits r;
	if (unknown) {
		r.b.assign(w, 0);
		r.unknown = true;
		return from_bits(r, elem);
	}
	switch (op.op) {
	case Op::Add: r = add_bits(extend(x, w, is_signed), extend(y, w, is_signed), false); break;
	case Op::Sub: r = add_bits(extend(x, w, is_signed), invert(extend(y, w, is_signed)), true); break;
	case Op::Mul: r = mul_bits(extend(x, w, is_signed), extend(y, w, is_signed)); break;
	case Op::Div:
	case Op::Mod:
	case Op::Rem: {
		if (is_zero(y))
			fail(ErrorKind::DivByZero, "division by zero");
		std::size_t ww = std::max(x.width(), y.width()) + 1;
		Bits n = extend(x, ww, is_signed), d = extend(y, ww, is_signed);
		bool nneg = is_signed && n.msb(), dneg = is_signed && d.msb();
		Bits q, rem;
		udivmod(nneg ? negate(n) : n, dneg ? negate(d) : d, q, rem);
		if (op.op == Op::Div) {
			r = (nneg != dneg) ? negate(q) : q;
		} else {
			r = nneg ? negate(rem) : rem;
			if (op.op == Op::Mod && !is_zero(rem) && nneg != dneg)
				r = add_bits(r, d, false);
		}
		r.b.resize(w);
		break;
	}
	default: type_error(name, a, b);
	}
	return from_bits(r, elem);
}

Val shift(const OpKind &op, const Val &v, std::int64_t n) {
	if (!v.is_vector() || !is_bitlike(v.elem_kind()))
		type_error(op_name(op.op), v);
	if (n < 0) {
		Op rev = op.op;
		switch (op.op) {
		case Op::Sll: rev = Op::Srl; break;
		case Op::Srl: rev = Op::Sll; break;
		case Op::Sla: rev = Op::Sra; break;
		case Op::Sra: rev = Op::Sla; break;
		case Op::Rol: rev = Op::Ror; break;
		default: rev = Op::Rol; break;
		}
		if (n == INT64_MIN)
			fail(ErrorKind::Overflow, "shift amount out of range");
		return shift(make_op(rev), v, -n);
	}
	const auto &e = v.elems();
	auto len = static_cast<std::int64_t>(e.size());
	std::vector<Scalar> out(e.size());
	if (len == 0)
		return v;
	Scalar zero = default_scalar(v.elem_kind());
	if (v.elem_kind() == ScalarKind::Logic)
		zero = Logic9::L0;
	for (std::int64_t k = 0; k < len; ++k) {
		// Position k of the result takes position src of the operand.
		std::int64_t src = 0;
		bool left = op.op == Op::Sll || op.op == Op::Sla || op.op == Op::Rol;
		src = left ? k + n : k - n;
		if (op.op == Op::Rol || op.op == Op::Ror) {
			src %= len;
			if (src < 0)
				src += len;
			out[k] = e[src];
		} else if (src >= 0 && src < len) {
			out[k] = e[src];
		} else if (op.op == Op::Sla) {
			out[k] = e.back();
		} else if (op.op == Op::Sra) {
			out[k] = e.front();
		} else {
			out[k] = zero;
		}
	}
	Val r = v;
	r.elems() = std::move(out);
	return r;
}

std::int64_t pos_of(const Val &v, std::int64_t i) {
	return v.tag() == ValTag::VecTo ? i - v.left() : v.left() - i;
}

void require_vector(const Val &v, std::string_view what) {
	if (!v.is_vector())
		fail(ErrorKind::Eval, std::string(what) + " applied to non-vector value " + to_string(v));
}

} // namespace

// ---------------------------------------------------------------------------

std::string_view kind_name(ScalarKind k) {
	switch (k) {
	case ScalarKind::Bit: return "bit";
	case ScalarKind::Boolean: return "boolean";
	case ScalarKind::Character: return "character";
	case ScalarKind::Integer: return "integer";
	case ScalarKind::Real: return "real";
	case ScalarKind::Time: return "time";
	case ScalarKind::Logic: return "std_ulogic";
	}
	return "?";
}

Scalar default_scalar(ScalarKind k) {
	switch (k) {
	case ScalarKind::Bit: return Bit{false};
	case ScalarKind::Boolean: return false;
	case ScalarKind::Character: return '\0';
	case ScalarKind::Integer: return std::int64_t{0};
	case ScalarKind::Real: return 0.0;
	case ScalarKind::Time: return Time{0};
	case ScalarKind::Logic: return Logic9::U;
	}
	return std::int64_t{0};
}

Val Val::vector(ValTag dir, std::int64_t left, ScalarKind elem, std::vector<Scalar> elems) {
	Val v;
	v.tag_ = dir;
	v.left_ = left;
	v.elem_kind_ = elem;
	v.elems_ = std::move(elems);
	return v;
}

Val Val::vector_from_string(ValTag dir, std::int64_t left, ScalarKind elem, std::string_view s) {
	std::vector<Scalar> out;
	out.reserve(s.size());
	for (char c : s) {
		switch (elem) {
		case ScalarKind::Bit:
			if (c != '0' && c != '1')
				fail(ErrorKind::Eval, std::string("invalid bit literal character '") + c + "'");
			out.emplace_back(Bit{c == '1'});
			break;
		case ScalarKind::Logic: {
			auto l = logic9_from_char(c);
			if (!l)
				fail(ErrorKind::Eval, std::string("invalid std_logic literal character '") + c + "'");
			out.emplace_back(*l);
			break;
		}
		case ScalarKind::Character: out.emplace_back(c); break;
		default: fail(ErrorKind::Eval, "string literal cannot form a vector of " + std::string(kind_name(elem)));
		}
	}
	return vector(dir, left, elem, std::move(out));
}

Val Val::record(std::vector<std::string> names, std::vector<Val> members) {
	Val v;
	v.tag_ = ValTag::Record;
	v.names_ = std::move(names);
	v.members_ = std::move(members);
	return v;
}

std::int64_t Val::low() const {
	return tag_ == ValTag::VecTo ? left_ : left_ - length() + 1;
}

std::int64_t Val::high() const {
	return tag_ == ValTag::VecTo ? left_ + length() - 1 : left_;
}

Val Val::rebased(ValTag dir, std::int64_t left) const {
	Val r = *this;
	r.tag_ = dir;
	r.left_ = left;
	return r;
}

std::int64_t Val::as_int() const {
	if (!is_scalar() || scalar_kind() != ScalarKind::Integer)
		fail(ErrorKind::Eval, "expected an integer, got " + to_string(*this));
	return std::get<std::int64_t>(scalar_);
}

bool Val::as_bool() const {
	if (!is_scalar() || scalar_kind() != ScalarKind::Boolean)
		fail(ErrorKind::Eval, "expected a boolean, got " + to_string(*this));
	return std::get<bool>(scalar_);
}

std::string to_string(const Scalar &s) {
	switch (kind_of(s)) {
	case ScalarKind::Bit: return std::get<Bit>(s).v ? "'1'" : "'0'";
	case ScalarKind::Boolean: return std::get<bool>(s) ? "true" : "false";
	case ScalarKind::Character: return std::string("'") + std::get<char>(s) + "'";
	case ScalarKind::Integer: return std::to_string(std::get<std::int64_t>(s));
	case ScalarKind::Real: {
		char buf[64];
		std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(s));
		std::string r = buf;
		if (r.find_first_of(".eEn") == std::string::npos)
			r += ".0";
		return r;
	}
	case ScalarKind::Time: return std::to_string(std::get<Time>(s).fs) + " fs";
	case ScalarKind::Logic: return std::string("'") + logic9_char(std::get<Logic9>(s)) + "'";
	}
	return "?";
}

std::string to_string(const Val &v) {
	switch (v.tag()) {
	case ValTag::Scalar: return to_string(v.scalar());
	case ValTag::VecTo:
	case ValTag::VecDownto: {
		ScalarKind k = v.elem_kind();
		if (k == ScalarKind::Bit || k == ScalarKind::Logic || k == ScalarKind::Character) {
			std::string out = "\"";
			for (const auto &s : v.elems()) {
				if (k == ScalarKind::Bit)
					out += std::get<Bit>(s).v ? '1' : '0';
				else if (k == ScalarKind::Logic)
					out += logic9_char(std::get<Logic9>(s));
				else
					out += std::get<char>(s);
			}
			return out + "\"";
		}
		std::string out = "(";
		for (std::size_t i = 0; i < v.elems().size(); ++i) {
			if (i)
				out += ", ";
			out += to_string(v.elems()[i]);
		}
		return out + ")";
	}
	case ValTag::Record: {
		std::string out = "(";
		for (std::size_t i = 0; i < v.members().size(); ++i) {
			if (i)
				out += ", ";
			out += v.field_names()[i] + " => " + to_string(v.members()[i]);
		}
		return out + ")";
	}
	}
	return "?";
}

OpClass class_of(Op op) {
	switch (op) {
	case Op::Not: case Op::Abs: case Op::Neg: case Op::ToInteger: case Op::ToVector: case Op::Resize:
		return OpClass::Unary;
	case Op::And: case Op::Or: case Op::Nand: case Op::Nor: case Op::Xor: case Op::Xnor:
		return OpClass::Logical;
	case Op::Eq: case Op::Ne: case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
		return OpClass::Relational;
	case Op::Sll: case Op::Srl: case Op::Sla: case Op::Sra: case Op::Rol: case Op::Ror:
		return OpClass::Shift;
	default:
		return OpClass::Arith;
	}
}

namespace {
constexpr std::pair<Op, std::string_view> kOpNames[] = {
	{Op::Not, "not"}, {Op::Abs, "abs"}, {Op::Neg, "neg"}, {Op::ToInteger, "to_integer"},
	{Op::ToVector, "to_vector"}, {Op::Resize, "resize"},
	{Op::And, "and"}, {Op::Or, "or"}, {Op::Nand, "nand"}, {Op::Nor, "nor"}, {Op::Xor, "xor"}, {Op::Xnor, "xnor"},
	{Op::Eq, "="}, {Op::Ne, "/="}, {Op::Lt, "<"}, {Op::Le, "<="}, {Op::Gt, ">"}, {Op::Ge, ">="},
	{Op::Sll, "sll"}, {Op::Srl, "srl"}, {Op::Sla, "sla"}, {Op::Sra, "sra"}, {Op::Rol, "rol"}, {Op::Ror, "ror"},
	{Op::Add, "+"}, {Op::Sub, "-"}, {Op::Mul, "*"}, {Op::Div, "/"}, {Op::Mod, "mod"}, {Op::Rem, "rem"},
	{Op::Pow, "**"}, {Op::Concat, "&"},
};
} // namespace

std::string_view op_name(Op op) {
	for (const auto &[o, n] : kOpNames)
		if (o == op)
			return n;
	return "?";
}

bool op_from_name(std::string_view name, Op &out) {
	for (const auto &[o, n] : kOpNames) {
		if (n == name) {
			out = o;
			return true;
		}
	}
	return false;
}

Val eval_unop(const OpKind &op, const Val &v) {
	switch (op.op) {
	case Op::Not: {
		if (v.is_scalar())
			return Val(not_scalar(v.scalar(), v));
		if (v.is_vector() && is_bitlike(v.elem_kind())) {
			Val r = v;
			for (auto &s : r.elems())
				s = not_scalar(s, v);
			return r;
		}
		type_error("not", v);
	}
	case Op::Abs:
	case Op::Neg: {
		if (v.is_scalar()) {
			switch (v.scalar_kind()) {
			case ScalarKind::Integer: {
				std::int64_t x = v.as_int();
				if (op.op == Op::Abs && x >= 0)
					return v;
				if (x == INT64_MIN)
					fail(ErrorKind::Overflow, "integer overflow in \"" + std::string(op_name(op.op)) + "\"");
				return Val::integer(-x);
			}
			case ScalarKind::Real: {
				double x = std::get<double>(v.scalar());
				return Val::real(op.op == Op::Abs ? std::fabs(x) : -x);
			}
			case ScalarKind::Time: {
				std::int64_t x = std::get<Time>(v.scalar()).fs;
				if (x == INT64_MIN)
					fail(ErrorKind::Overflow, "time overflow");
				return Val::time(op.op == Op::Abs ? std::llabs(x) : -x);
			}
			default: type_error(op_name(op.op), v);
			}
		}
		if (v.is_vector() && op.numeric == Numeric::Signed) {
			Bits x = to_bits(v, op_name(op.op));
			if (x.unknown || (op.op == Op::Abs && !x.msb()))
				return x.unknown ? from_bits(x, v.elem_kind()) : v;
			return from_bits(negate(x), v.elem_kind());
		}
		type_error(op_name(op.op), v);
	}
	case Op::ToInteger: {
		require_vector(v, "to_integer");
		return Val::integer(bits_to_int(to_bits(v, "to_integer"), op.numeric == Numeric::Signed));
	}
	case Op::ToVector: {
		std::int64_t x = v.as_int();
		if (op.numeric == Numeric::Unsigned && x < 0)
			fail(ErrorKind::Eval, "to_unsigned of negative value " + std::to_string(x));
		if (op.width < 0)
			fail(ErrorKind::Eval, "negative vector width");
		return from_bits(bits_of_int(x, static_cast<std::size_t>(op.width)), ScalarKind::Logic);
	}
	case Op::Resize: {
		require_vector(v, "resize");
		Bits x = to_bits(v, "resize");
		auto w = static_cast<std::size_t>(op.width);
		if (op.numeric == Numeric::Signed && w > 0 && w < x.width()) {
			bool sign = x.msb();
			x.b.resize(w);
			x.b[w - 1] = sign;
		} else {
			x = extend(x, std::max(w, x.width()), op.numeric == Numeric::Signed);
			x.b.resize(w);
		}
		return from_bits(x, v.elem_kind());
	}
	default: break;
	}
	type_error(op_name(op.op), v);
}

Val eval_binop(const OpKind &op, const Val &a, const Val &b) {
	switch (op.cls) {
	case OpClass::Logical: {
		if (a.is_scalar() && b.is_scalar())
			return Val(logical_scalar(op.op, a.scalar(), b.scalar(), a, b));
		if (a.is_vector() && b.is_vector()) {
			if (a.length() != b.length())
				fail(ErrorKind::Eval, "length mismatch in \"" + std::string(op_name(op.op)) + "\": " +
						std::to_string(a.length()) + " vs " + std::to_string(b.length()));
			Val r = a;
			for (std::size_t k = 0; k < a.elems().size(); ++k)
				r.elems()[k] = logical_scalar(op.op, a.elems()[k], b.elems()[k], a, b);
			return r;
		}
		type_error(op_name(op.op), a, b);
	}
	case OpClass::Relational: {
		int c = 0;
		bool eq = false;
		if (op.numeric != Numeric::None && (a.is_vector() || b.is_vector())) {
			bool is_signed = op.numeric == Numeric::Signed;
			Bits x, y;
			if (a.is_vector() && b.is_vector()) {
				x = to_bits(a, op_name(op.op));
				y = to_bits(b, op_name(op.op));
			} else if (a.is_vector()) {
				x = to_bits(a, op_name(op.op));
				y = bits_of_int(b.as_int(), std::max<std::size_t>(x.width(), 64));
				x = extend(x, std::max<std::size_t>(x.width(), 64), is_signed);
				if (!is_signed && b.as_int() < 0)
					return Val::boolean(op.op == Op::Ne || op.op == Op::Gt || op.op == Op::Ge);
			} else {
				y = to_bits(b, op_name(op.op));
				x = bits_of_int(a.as_int(), std::max<std::size_t>(y.width(), 64));
				y = extend(y, std::max<std::size_t>(y.width(), 64), is_signed);
				if (!is_signed && a.as_int() < 0)
					return Val::boolean(op.op == Op::Ne || op.op == Op::Lt || op.op == Op::Le);
			}
			if (x.unknown || y.unknown)
				return Val::boolean(op.op == Op::Ne);
			c = numeric_compare(x, y, is_signed);
			eq = c == 0;
		} else if (op.op == Op::Eq || op.op == Op::Ne) {
			eq = values_equal(a, b);
		} else {
			c = compare_values(a, b);
		}
		switch (op.op) {
		case Op::Eq: return Val::boolean(eq);
		case Op::Ne: return Val::boolean(!eq);
		case Op::Lt: return Val::boolean(c < 0);
		case Op::Le: return Val::boolean(c <= 0);
		case Op::Gt: return Val::boolean(c > 0);
		default: return Val::boolean(c >= 0);
		}
	}
	case OpClass::Shift:
		if (!b.is_scalar() || b.scalar_kind() != ScalarKind::Integer)
			type_error(op_name(op.op), a, b);
		return shift(op, a, b.as_int());
	case OpClass::Arith: {
		if (op.op == Op::Concat) {
			if (!a.is_vector() || !b.is_vector())
				type_error("&", a, b);
			if (a.tag() != b.tag())
				fail(ErrorKind::Eval, "endianness mismatch in \"&\": " + to_string(a) + " & " + to_string(b));
			if (a.elem_kind() != b.elem_kind() && a.length() > 0 && b.length() > 0)
				type_error("&", a, b);
			std::vector<Scalar> out = a.elems();
			out.insert(out.end(), b.elems().begin(), b.elems().end());
			auto n = static_cast<std::int64_t>(out.size());
			ScalarKind k = a.length() > 0 ? a.elem_kind() : b.elem_kind();
			if (a.tag() == ValTag::VecTo)
				return Val::vector(ValTag::VecTo, a.left(), k, std::move(out));
			return Val::vector(ValTag::VecDownto, n - 1, k, std::move(out));
		}
		if (a.is_vector() || b.is_vector())
			return vector_arith(op, a, b);
		if (a.is_scalar() && b.is_scalar())
			return Val(arith_scalar(op.op, a, b));
		type_error(op_name(op.op), a, b);
	}
	case OpClass::Unary: break;
	}
	type_error(op_name(op.op), a, b);
}

Val vec_nth(const Val &v, std::int64_t i) {
	require_vector(v, "indexing");
	std::int64_t p = pos_of(v, i);
	if (p < 0 || p >= v.length())
		fail(ErrorKind::Eval, "index " + std::to_string(i) + " out of range " +
				std::to_string(v.left()) + (v.tag() == ValTag::VecTo ? " to " : " downto ") +
				std::to_string(v.tag() == ValTag::VecTo ? v.high() : v.low()));
	return Val(v.elems()[static_cast<std::size_t>(p)]);
}

Val vec_slice(const Val &v, std::int64_t start, std::int64_t len) {
	require_vector(v, "slicing");
	if (len < 0 || start < v.low() || (len > 0 && start + len - 1 > v.high()))
		fail(ErrorKind::Eval, "slice of " + std::to_string(len) + " elements from index " +
				std::to_string(start) + " escapes vector bounds " + std::to_string(v.low()) + ".." +
				std::to_string(v.high()));
	std::vector<Scalar> out;
	out.reserve(static_cast<std::size_t>(len));
	if (v.tag() == ValTag::VecTo) {
		for (std::int64_t i = start; i < start + len; ++i)
			out.push_back(v.elems()[static_cast<std::size_t>(pos_of(v, i))]);
		return Val::vector(ValTag::VecTo, start, v.elem_kind(), std::move(out));
	}
	for (std::int64_t i = start + len - 1; i >= start; --i)
		out.push_back(v.elems()[static_cast<std::size_t>(pos_of(v, i))]);
	return Val::vector(ValTag::VecDownto, start + len - 1, v.elem_kind(), std::move(out));
}

Val to_vector(const Val &v, bool reversed) {
	ValTag dir = reversed ? ValTag::VecDownto : ValTag::VecTo;
	if (v.is_scalar())
		return Val::vector(dir, 0, v.scalar_kind(), {v.scalar()});
	if (v.is_vector()) {
		if (v.tag() == dir)
			return v;
		return v.rebased(dir, reversed ? v.length() - 1 : 0);
	}
	fail(ErrorKind::Eval, "record value cannot be converted to a vector");
}

Val vec_replace(const Val &v, std::int64_t start, const Val &part) {
	require_vector(v, "range assignment");
	require_vector(part, "range assignment");
	std::int64_t len = part.length();
	if (start < v.low() || (len > 0 && start + len - 1 > v.high()))
		fail(ErrorKind::Eval, "range " + std::to_string(start) + ".." + std::to_string(start + len - 1) +
				" escapes vector bounds " + std::to_string(v.low()) + ".." + std::to_string(v.high()));
	if (len > 0 && part.elem_kind() != v.elem_kind())
		type_error(":=", v, part);
	Val r = v;
	// part is in written order; its leftmost element goes to the leftmost
	// index of the range in v's direction.
	for (std::int64_t k = 0; k < len; ++k) {
		std::int64_t idx = v.tag() == ValTag::VecTo ? start + k : start + len - 1 - k;
		r.elems()[static_cast<std::size_t>(pos_of(v, idx))] = part.elems()[static_cast<std::size_t>(k)];
	}
	return r;
}

Scalar resolve_logic9(std::span<const Scalar> drivers) {
	if (drivers.empty())
		fail(ErrorKind::Eval, "resolution of an empty driver list");
	std::vector<Logic9> ls;
	ls.reserve(drivers.size());
	for (const auto &d : drivers) {
		if (kind_of(d) != ScalarKind::Logic)
			fail(ErrorKind::Eval, "resolved: driver " + to_string(d) + " is not std_ulogic");
		ls.push_back(std::get<Logic9>(d));
	}
	return logic9_resolve(ls);
}

Val resolve_vals(std::span<const Val> drivers) {
	if (drivers.empty())
		fail(ErrorKind::Eval, "resolution of an empty driver list");
	const Val &first = drivers.front();
	if (first.is_scalar()) {
		std::vector<Scalar> s;
		for (const auto &d : drivers) {
			if (!d.is_scalar())
				fail(ErrorKind::Eval, "resolved: mixed scalar and vector drivers");
			s.push_back(d.scalar());
		}
		return Val(resolve_logic9(s));
	}
	if (!first.is_vector())
		fail(ErrorKind::Eval, "resolved: record drivers are resolved per field");
	Val r = first;
	std::vector<Scalar> col(drivers.size());
	for (std::size_t k = 0; k < first.elems().size(); ++k) {
		for (std::size_t d = 0; d < drivers.size(); ++d) {
			if (!drivers[d].is_vector() || drivers[d].length() != first.length())
				fail(ErrorKind::Eval, "resolved: driver length mismatch");
			col[d] = drivers[d].elems()[k];
		}
		r.elems()[k] = resolve_logic9(col);
	}
	return r;
}

} // namespace vhdlkern
