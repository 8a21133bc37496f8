#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "harness.hpp"
#include "vhdlkern/logic9.hpp"

using namespace vk_test;

namespace {

// std_logic_1164 tables, rows and columns in the order U X 0 1 Z W L H -.
const char *kOrder = "UX01ZWLH-";
const char *kResolve[9] = {"UUUUUUUUU", "UXXXXXXXX", "UX0X0000X", "UXX11111X", "UX01ZWLHX",
		"UX01WWWWX", "UX01LWLWX", "UX01HWWHX", "UXXXXXXXX"};
const char *kAnd[9] = {"UU0UUU0UU", "UX0XXX0XX", "000000000", "UX01XX01X", "UX0XXX0XX",
		"UX0XXX0XX", "000000000", "UX01XX01X", "UX0XXX0XX"};
const char *kOr[9] = {"UUU1UUU1U", "UXX1XXX1X", "UX01XX01X", "111111111", "UXX1XXX1X",
		"UXX1XXX1X", "UX01XX01X", "111111111", "UXX1XXX1X"};
const char *kXor[9] = {"UUUUUUUUU", "UXXXXXXXX", "UX01XX01X", "UX10XX10X", "UXXXXXXXX",
		"UXXXXXXXX", "UX01XX01X", "UX10XX10X", "UXXXXXXXX"};
const char *kNot = "UX10XX10X";

Logic9 L(char c) { return *logic9_from_char(c); }

Logic9 table(const char *const t[9], Logic9 a, Logic9 b) {
	auto ia = std::string(kOrder).find(logic9_char(a));
	auto ib = std::string(kOrder).find(logic9_char(b));
	return L(t[ia][ib]);
}

Logic9 fold(const std::vector<Logic9> &v) { return logic9_resolve(v); }

} // namespace

TEST_CASE("logic9 character mapping") {
	for (char c : std::string(kOrder))
		CHECK(logic9_char(L(c)) == c);
	CHECK(logic9_from_char('x') == Logic9::X);
	CHECK(logic9_from_char('h') == Logic9::H);
	CHECK(!logic9_from_char('2').has_value());
	CHECK(logic9_to_bool(Logic9::H) == true);
	CHECK(logic9_to_bool(Logic9::L) == false);
	CHECK(!logic9_to_bool(Logic9::Z).has_value());
}

TEST_CASE("logic9 operators follow the std_logic_1164 tables") {
	for (auto a : kAllLogic9) {
		CHECK(logic9_not(a) == L(kNot[std::string(kOrder).find(logic9_char(a))]));
		for (auto b : kAllLogic9) {
			CAPTURE(logic9_char(a));
			CAPTURE(logic9_char(b));
			CHECK(logic9_and(a, b) == table(kAnd, a, b));
			CHECK(logic9_or(a, b) == table(kOr, a, b));
			CHECK(logic9_xor(a, b) == table(kXor, a, b));
			CHECK(logic9_resolve2(a, b) == table(kResolve, a, b));
		}
	}
	CHECK(logic9_and(Logic9::L0, Logic9::Z) == Logic9::L0);
	CHECK(logic9_and(Logic9::X, Logic9::L1) == Logic9::X);
	CHECK(fold({Logic9::L0, Logic9::Z}) == Logic9::L0);
	CHECK(fold({Logic9::L0, Logic9::L1}) == Logic9::X);
}

TEST_CASE("resolution: every permutation of every 3-driver list") {
	int cases = 0;
	for (auto a : kAllLogic9)
		for (auto b : kAllLogic9)
			for (auto c : kAllLogic9) {
				std::vector<Logic9> v{a, b, c};
				Logic9 want = table(kResolve, table(kResolve, a, b), c);
				std::sort(v.begin(), v.end());
				do {
					CHECK(fold(v) == want);
					++cases;
				} while (std::next_permutation(v.begin(), v.end()));
			}
	CHECK(cases >= 729);
}

TEST_CASE("resolution properties on random driver lists") {
	Rng rng(11);
	auto any = [&] { return kAllLogic9[static_cast<std::size_t>(rng.range(0, 8))]; };
	for (int k = 0; k < 2000; ++k) {
		std::vector<Logic9> v(static_cast<std::size_t>(rng.range(1, 8)));
		for (auto &x : v)
			x = any();
		Logic9 r = fold(v);
		// commutative: any shuffle resolves the same
		auto w = v;
		for (std::size_t i = w.size(); i > 1; --i)
			std::swap(w[i - 1], w[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(i) - 1))]);
		CHECK(fold(w) == r);
		// associative: resolving a split and then the two halves' results
		auto cut = static_cast<std::size_t>(rng.range(1, static_cast<std::int64_t>(v.size())));
		if (cut < v.size()) {
			std::vector<Logic9> lo(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cut));
			std::vector<Logic9> hi(v.begin() + static_cast<std::ptrdiff_t>(cut), v.end());
			CHECK(logic9_resolve2(fold(lo), fold(hi)) == r);
		}
		// 'Z' is the identity, 'U' absorbs. The table sends '-' with 'Z' to
		// 'X', so a lone '-' driver is the one exception.
		auto z = v;
		z.insert(z.begin() + rng.range(0, static_cast<std::int64_t>(z.size())), Logic9::Z);
		CHECK(fold(z) == (r == Logic9::DC ? Logic9::X : r));
		auto u = v;
		u.insert(u.begin() + rng.range(0, static_cast<std::int64_t>(u.size())), Logic9::U);
		CHECK(fold(u) == Logic9::U);
		// a single driver resolves to itself
		CHECK(fold({v[0]}) == v[0]);
	}
}
