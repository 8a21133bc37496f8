#include "vhdlkern/logic9.hpp"

#include <cassert>

namespace vhdlkern {

namespace {

using enum Logic9;

// Tables from IEEE 1164, indexed [lhs][rhs] in U X 0 1 Z W L H - order.
constexpr Logic9 kResolution[9][9] = {
	{U, U, U, U, U, U, U, U, U},
	{U, X, X, X, X, X, X, X, X},
	{U, X, L0, X, L0, L0, L0, L0, X},
	{U, X, X, L1, L1, L1, L1, L1, X},
	{U, X, L0, L1, Z, W, L, H, X},
	{U, X, L0, L1, W, W, W, W, X},
	{U, X, L0, L1, L, W, L, W, X},
	{U, X, L0, L1, H, W, W, H, X},
	{U, X, X, X, X, X, X, X, X},
};

constexpr Logic9 kAnd[9][9] = {
	{U, U, L0, U, U, U, L0, U, U},
	{U, X, L0, X, X, X, L0, X, X},
	{L0, L0, L0, L0, L0, L0, L0, L0, L0},
	{U, X, L0, L1, X, X, L0, L1, X},
	{U, X, L0, X, X, X, L0, X, X},
	{U, X, L0, X, X, X, L0, X, X},
	{L0, L0, L0, L0, L0, L0, L0, L0, L0},
	{U, X, L0, L1, X, X, L0, L1, X},
	{U, X, L0, X, X, X, L0, X, X},
};

constexpr Logic9 kOr[9][9] = {
	{U, U, U, L1, U, U, U, L1, U},
	{U, X, X, L1, X, X, X, L1, X},
	{U, X, L0, L1, X, X, L0, L1, X},
	{L1, L1, L1, L1, L1, L1, L1, L1, L1},
	{U, X, X, L1, X, X, X, L1, X},
	{U, X, X, L1, X, X, X, L1, X},
	{U, X, L0, L1, X, X, L0, L1, X},
	{L1, L1, L1, L1, L1, L1, L1, L1, L1},
	{U, X, X, L1, X, X, X, L1, X},
};

constexpr Logic9 kXor[9][9] = {
	{U, U, U, U, U, U, U, U, U},
	{U, X, X, X, X, X, X, X, X},
	{U, X, L0, L1, X, X, L0, L1, X},
	{U, X, L1, L0, X, X, L1, L0, X},
	{U, X, X, X, X, X, X, X, X},
	{U, X, X, X, X, X, X, X, X},
	{U, X, L0, L1, X, X, L0, L1, X},
	{U, X, L1, L0, X, X, L1, L0, X},
	{U, X, X, X, X, X, X, X, X},
};

constexpr Logic9 kNot[9] = {U, X, L1, L0, X, X, L1, L0, X};

constexpr char kChars[9] = {'U', 'X', '0', '1', 'Z', 'W', 'L', 'H', '-'};

constexpr std::size_t idx(Logic9 v) { return static_cast<std::size_t>(v); }

} // namespace

char logic9_char(Logic9 v) { return kChars[idx(v)]; }

std::optional<Logic9> logic9_from_char(char c) {
	// Lower-case spellings are accepted the way most simulators do.
	switch (c) {
	case 'U': case 'u': return U;
	case 'X': case 'x': return X;
	case '0': return L0;
	case '1': return L1;
	case 'Z': case 'z': return Z;
	case 'W': case 'w': return W;
	case 'L': case 'l': return L;
	case 'H': case 'h': return H;
	case '-': return DC;
	default: return std::nullopt;
	}
}

Logic9 logic9_not(Logic9 a) { return kNot[idx(a)]; }
Logic9 logic9_and(Logic9 a, Logic9 b) { return kAnd[idx(a)][idx(b)]; }
Logic9 logic9_or(Logic9 a, Logic9 b) { return kOr[idx(a)][idx(b)]; }
Logic9 logic9_xor(Logic9 a, Logic9 b) { return kXor[idx(a)][idx(b)]; }
Logic9 logic9_resolve2(Logic9 a, Logic9 b) { return kResolution[idx(a)][idx(b)]; }

Logic9 logic9_resolve(std::span<const Logic9> drivers) {
	assert(!drivers.empty());
	Logic9 acc = drivers.front();
	for (std::size_t i = 1; i < drivers.size(); ++i)
		acc = logic9_resolve2(acc, drivers[i]);
	return acc;
}

std::optional<bool> logic9_to_bool(Logic9 v) {
	switch (v) {
	case L0: case L: return false;
	case L1: case H: return true;
	default: return std::nullopt;
	}
}

} // namespace vhdlkern
