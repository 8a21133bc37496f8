#include <string>
#include <vector>

#include "doctest.h"
#include "harness.hpp"
#include "vhdlkern/error.hpp"
#include "vhdlkern/value.hpp"

using namespace vk_test;

namespace {

Val bits_to(const std::string &s, std::int64_t left = 0) {
	return Val::vector_from_string(ValTag::VecTo, left, ScalarKind::Bit, s);
}
Val bits_down(const std::string &s) {
	return Val::vector_from_string(ValTag::VecDownto, static_cast<std::int64_t>(s.size()) - 1, ScalarKind::Bit, s);
}
Val slv(const std::string &s) {
	return Val::vector_from_string(ValTag::VecDownto, static_cast<std::int64_t>(s.size()) - 1, ScalarKind::Logic, s);
}
Val slv_of(std::uint64_t v, int w) {
	std::string s;
	for (int i = w - 1; i >= 0; --i)
		s += (v >> i) & 1 ? '1' : '0';
	return slv(s);
}
std::uint64_t slv_bits(const Val &v) {
	std::uint64_t r = 0;
	for (const auto &e : v.elems())
		r = (r << 1) | (std::get<Logic9>(e) == Logic9::L1 ? 1u : 0u);
	return r;
}
Val I(std::int64_t v) { return Val::integer(v); }
Val bin(Op op, const Val &a, const Val &b, Numeric n = Numeric::None) { return eval_binop(make_op(op, n), a, b); }
Val un(Op op, const Val &a, Numeric n = Numeric::None, std::int64_t w = 0) { return eval_unop(make_op(op, n, w), a); }

ErrorKind error_of(auto &&f) {
	try {
		f();
	} catch (const SimError &e) {
		return e.kind();
	}
	FAIL("no error");
	return ErrorKind::Config;
}

Scalar random_scalar(Rng &r, ScalarKind k) {
	switch (k) {
	case ScalarKind::Bit:
		return Bit{r.coin()};
	case ScalarKind::Boolean:
		return r.coin();
	case ScalarKind::Character:
		return static_cast<char>(r.range(32, 126));
	case ScalarKind::Integer:
		return r.range(-1000000, 1000000);
	case ScalarKind::Real:
		return static_cast<double>(r.range(-1000, 1000)) / 8.0;
	case ScalarKind::Time:
		return Time{r.range(0, 1000000)};
	case ScalarKind::Logic:
		return kAllLogic9[static_cast<std::size_t>(r.range(0, 8))];
	}
	return Bit{};
}

ScalarKind random_kind(Rng &r) { return static_cast<ScalarKind>(r.range(0, 6)); }

Val random_vector(Rng &r, ScalarKind k, std::int64_t len) {
	std::vector<Scalar> es;
	for (std::int64_t i = 0; i < len; ++i)
		es.push_back(random_scalar(r, k));
	ValTag tag = r.coin() ? ValTag::VecTo : ValTag::VecDownto;
	return Val::vector(tag, r.range(-4, 40), k, std::move(es));
}

Val random_val(Rng &r, int depth = 0) {
	switch (r.range(0, depth < 2 ? 2 : 1)) {
	case 0:
		return Val(random_scalar(r, random_kind(r)));
	case 1:
		return random_vector(r, random_kind(r), r.range(0, 9));
	default: {
		std::vector<std::string> names;
		std::vector<Val> ms;
		auto n = r.range(1, 4);
		for (std::int64_t i = 0; i < n; ++i) {
			names.push_back("f" + std::to_string(i));
			ms.push_back(random_val(r, depth + 1));
		}
		return Val::record(names, ms);
	}
	}
}

} // namespace

TEST_CASE("unary operators") {
	CHECK(un(Op::Not, Val::bit(true)) == Val::bit(false));
	CHECK(un(Op::Not, bits_to("1010")) == bits_to("0101"));
	CHECK(un(Op::Abs, I(-5)) == I(5));
	CHECK(un(Op::Neg, I(5)) == I(-5));
	CHECK(un(Op::Not, Val::boolean(false)) == Val::boolean(true));
	CHECK(un(Op::Not, Val::logic(Logic9::Z)) == Val::logic(Logic9::X));
}

TEST_CASE("integer division truncates, mod follows the divisor, rem the dividend") {
	CHECK(bin(Op::Div, I(7), I(2)) == I(3));
	CHECK(bin(Op::Div, I(-7), I(2)) == I(-3));
	CHECK(bin(Op::Mod, I(-7), I(3)) == I(2));
	CHECK(bin(Op::Mod, I(7), I(-3)) == I(-2));
	CHECK(bin(Op::Rem, I(-7), I(3)) == I(-1));
	CHECK(bin(Op::Rem, I(7), I(-3)) == I(1));
	CHECK(bin(Op::Pow, I(3), I(4)) == I(81));
	CHECK(bin(Op::Pow, I(5), I(0)) == I(1));
	CHECK(error_of([] { bin(Op::Div, I(1), I(0)); }) == ErrorKind::DivByZero);
	CHECK(error_of([] { bin(Op::Mod, I(1), I(0)); }) == ErrorKind::DivByZero);
	CHECK(error_of([] { bin(Op::Add, I(INT64_MAX), I(1)); }) == ErrorKind::Overflow);
	CHECK(error_of([] { bin(Op::Mul, I(INT64_MAX / 2 + 1), I(2)); }) == ErrorKind::Overflow);
	CHECK(error_of([] { bin(Op::Pow, I(2), I(-1)); }) == ErrorKind::Eval);
	CHECK(error_of([] { bin(Op::Add, I(1), Val::bit(true)); }) == ErrorKind::Eval);
}

TEST_CASE("integer arithmetic against int128 on random operands") {
	Rng r(3);
	for (int k = 0; k < 2000; ++k) {
		std::int64_t a = r.range(-(1ll << 40), 1ll << 40), b = r.range(-(1ll << 20), 1ll << 20);
		__int128 A = a, B = b;
		CHECK(bin(Op::Add, I(a), I(b)).as_int() == static_cast<std::int64_t>(A + B));
		CHECK(bin(Op::Sub, I(a), I(b)).as_int() == static_cast<std::int64_t>(A - B));
		CHECK(bin(Op::Mul, I(a), I(b)).as_int() == static_cast<std::int64_t>(A * B));
		if (b != 0) {
			CHECK(bin(Op::Div, I(a), I(b)).as_int() == static_cast<std::int64_t>(A / B));
			CHECK(bin(Op::Rem, I(a), I(b)).as_int() == static_cast<std::int64_t>(A % B));
			__int128 m = A % B;
			if (m != 0 && ((m < 0) != (B < 0)))
				m += B;
			CHECK(bin(Op::Mod, I(a), I(b)).as_int() == static_cast<std::int64_t>(m));
		}
		CHECK(bin(Op::Lt, I(a), I(b)) == Val::boolean(a < b));
		CHECK(bin(Op::Ge, I(a), I(b)) == Val::boolean(a >= b));
	}
}

TEST_CASE("shifts on 4-bit vectors") {
	CHECK(bin(Op::Sll, bits_to("1100"), I(1)) == bits_to("1000"));
	// Left is element 0: sll moves elements towards the left end.
	const char *sll1[16] = {"0000", "0010", "0100", "0110", "1000", "1010", "1100", "1110",
			"0000", "0010", "0100", "0110", "1000", "1010", "1100", "1110"};
	for (unsigned x = 0; x < 16; ++x) {
		std::string s;
		for (int i = 3; i >= 0; --i)
			s += (x >> i) & 1 ? '1' : '0';
		CHECK(bin(Op::Sll, bits_to(s), I(1)) == bits_to(sll1[x]));
		for (int n = 0; n <= 5; ++n) {
			auto as_bits = [](unsigned v) {
				std::string t;
				for (int i = 3; i >= 0; --i)
					t += (v >> i) & 1 ? '1' : '0';
				return t;
			};
			unsigned rot = n % 4;
			CHECK(bin(Op::Sll, bits_to(s), I(n)) == bits_to(as_bits((x << n) & 15)));
			CHECK(bin(Op::Srl, bits_to(s), I(n)) == bits_to(as_bits(x >> n)));
			CHECK(bin(Op::Rol, bits_to(s), I(n)) == bits_to(as_bits(((x << rot) | (x >> (4 - rot))) & 15)));
			CHECK(bin(Op::Ror, bits_to(s), I(n)) == bits_to(as_bits(((x >> rot) | (x << (4 - rot))) & 15)));
			// sra keeps the leftmost bit
			unsigned sra = x;
			for (int i = 0; i < n; ++i)
				sra = (sra >> 1) | (sra & 8);
			CHECK(bin(Op::Sra, bits_to(s), I(n)) == bits_to(as_bits(sra)));
		}
	}
}

TEST_CASE("vector arithmetic wraps to the operand width") {
	Rng r(5);
	for (int k = 0; k < 1500; ++k) {
		int w = static_cast<int>(r.range(1, 20));
		std::uint64_t mask = (1ull << w) - 1;
		std::uint64_t a = r.next() & mask, b = r.next() & mask;
		CHECK(slv_bits(bin(Op::Add, slv_of(a, w), slv_of(b, w), Numeric::Unsigned)) == ((a + b) & mask));
		CHECK(slv_bits(bin(Op::Sub, slv_of(a, w), slv_of(b, w), Numeric::Signed)) == ((a - b) & mask));
		CHECK(bin(Op::Lt, slv_of(a, w), slv_of(b, w), Numeric::Unsigned) == Val::boolean(a < b));
		auto sg = [&](std::uint64_t v) { return (v >> (w - 1)) & 1 ? static_cast<std::int64_t>(v) - (1ll << w) : static_cast<std::int64_t>(v); };
		CHECK(bin(Op::Lt, slv_of(a, w), slv_of(b, w), Numeric::Signed) == Val::boolean(sg(a) < sg(b)));
		CHECK(un(Op::ToInteger, slv_of(a, w), Numeric::Unsigned) == I(static_cast<std::int64_t>(a)));
		CHECK(un(Op::ToInteger, slv_of(a, w), Numeric::Signed) == I(sg(a)));
	}
}

TEST_CASE("indexing and slicing") {
	Val abc = Val::vector_from_string(ValTag::VecTo, 0, ScalarKind::Character, "abc");
	CHECK(vec_nth(abc, 1) == Val::character('b'));
	CHECK(error_of([&] { vec_nth(abc, 3); }) == ErrorKind::Eval);
	// downto 2..0 written "cba": index 2 is the leftmost written element
	Val cba = Val::vector_from_string(ValTag::VecDownto, 2, ScalarKind::Character, "cba");
	CHECK(vec_nth(cba, 2) == Val::character('c'));
	CHECK(vec_nth(cba, 0) == Val::character('a'));
	CHECK(vec_slice(bits_to("10110"), 1, 3) == bits_to("011", 1));
	CHECK(vec_slice(bits_to("10110"), 0, 5) == bits_to("10110"));
	// x(5 downto 2) of "11001010" (7 downto 0) is "0010"
	CHECK(vec_slice(bits_down("11001010"), 2, 4) == bits_down("0010").rebased(ValTag::VecDownto, 5));
}

TEST_CASE("nth agrees with a naive index map for every small vector") {
	for (int len = 1; len <= 6; ++len)
		for (int left = -2; left <= 3; ++left)
			for (bool down : {false, true}) {
				std::string s;
				for (int i = 0; i < len; ++i)
					s += static_cast<char>('a' + i);
				Val v = Val::vector_from_string(down ? ValTag::VecDownto : ValTag::VecTo, left, ScalarKind::Character, s);
				for (int k = 0; k < len; ++k) {
					int idx = down ? left - k : left + k; // k-th written element
					CHECK(vec_nth(v, idx) == Val::character(s[static_cast<std::size_t>(k)]));
				}
			}
}

TEST_CASE("slice/nth consistency on random vectors") {
	Rng r(7);
	for (int k = 0; k < 2000; ++k) {
		Val v = random_vector(r, random_kind(r), r.range(1, 12));
		auto len = r.range(0, v.length());
		auto start = r.range(v.low(), v.high() - len + 1);
		Val s = vec_slice(v, start, len);
		REQUIRE(s.length() == len);
		CHECK(s.tag() == v.tag());
		for (std::int64_t i = start; i < start + len; ++i)
			CHECK(vec_nth(s, i) == vec_nth(v, i));
		// writing the slice back is the identity
		CHECK(vec_replace(v, start, s) == v);
	}
}

TEST_CASE("to_vector and concatenation") {
	Val one = Val::bit(true);
	CHECK(to_vector(one, false) == Val::vector(ValTag::VecTo, 0, ScalarKind::Bit, {Bit{true}}));
	CHECK(to_vector(bits_to("01"), false) == bits_to("01"));
	// '1' & x for x downto: hand-written results
	struct {
		const char *x, *want;
	} cases[] = {{"0", "10"}, {"0110", "10110"}, {"111", "1111"}};
	for (auto c : cases) {
		Val r = bin(Op::Concat, to_vector(one, true), bits_down(c.x));
		CHECK(r.tag() == ValTag::VecDownto);
		CHECK(r.elems() == bits_down(c.want).elems());
	}
}

TEST_CASE("resolving driver values") {
	std::vector<Val> d{Val::logic(Logic9::L0), Val::logic(Logic9::Z)};
	CHECK(resolve_vals(d) == Val::logic(Logic9::L0));
	d = {Val::logic(Logic9::L0), Val::logic(Logic9::L1)};
	CHECK(resolve_vals(d) == Val::logic(Logic9::X));
	d = {slv("01Z"), slv("ZZ1")};
	CHECK(resolve_vals(d) == slv("011"));
	Rng r(13);
	for (int k = 0; k < 1000; ++k) {
		Val v = r.coin() ? Val(random_scalar(r, ScalarKind::Logic)) : random_vector(r, ScalarKind::Logic, r.range(0, 9));
		std::vector<Val> single{v};
		CHECK(resolve_vals(single) == v);
	}
}

TEST_CASE("value properties on random values") {
	Rng r(17);
	for (int k = 0; k < 2000; ++k) {
		Val v = random_val(r);
		CAPTURE(to_string(v));
		if (!v.is_record())
			CHECK(bin(Op::Eq, v, v) == Val::boolean(true));
		Val b = random_vector(r, r.coin() ? ScalarKind::Bit : ScalarKind::Boolean, r.range(0, 10));
		CHECK(un(Op::Not, un(Op::Not, b)) == b);
	}
}

TEST_CASE("vectors compare in dictionary order") {
	CHECK(bin(Op::Lt, bits_to("011"), bits_to("100")) == Val::boolean(true));
	CHECK(bin(Op::Lt, bits_to("10"), bits_to("100")) == Val::boolean(true));
	CHECK(bin(Op::Gt, bits_to("11"), bits_to("100")) == Val::boolean(true));
}
