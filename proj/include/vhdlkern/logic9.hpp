#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace vhdlkern {

/// std_ulogic. Enumerator order is the position order of the standard type,
/// which is also what the relational operators compare.
enum class Logic9 : std::uint8_t { U, X, L0, L1, Z, W, L, H, DC };

inline constexpr std::array<Logic9, 9> kAllLogic9 = {
	Logic9::U, Logic9::X, Logic9::L0, Logic9::L1, Logic9::Z,
	Logic9::W, Logic9::L, Logic9::H, Logic9::DC};

char logic9_char(Logic9 v);
std::optional<Logic9> logic9_from_char(char c);

Logic9 logic9_not(Logic9 a);
Logic9 logic9_and(Logic9 a, Logic9 b);
Logic9 logic9_or(Logic9 a, Logic9 b);
Logic9 logic9_xor(Logic9 a, Logic9 b);

/// One step of the `resolved` function table.
Logic9 logic9_resolve2(Logic9 a, Logic9 b);

/// Left fold of the resolution table over a non-empty driver list.
Logic9 logic9_resolve(std::span<const Logic9> drivers);

/// '0'/'L' -> false, '1'/'H' -> true, anything else has no boolean reading.
std::optional<bool> logic9_to_bool(Logic9 v);

} // namespace vhdlkern
