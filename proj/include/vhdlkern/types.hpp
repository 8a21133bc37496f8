#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vhdlkern/value.hpp"

namespace vhdlkern {

/// Declared type of a signal, port, variable or constant.
struct TypeDesc {
	enum class Kind : std::uint8_t { Scalar, Vector, Record };

	Kind kind = Kind::Scalar;
	/// Name as written in the source (e.g. "natural", "std_logic_vector").
	std::string name;
	/// Scalar kind, or the element kind of a vector.
	ScalarKind scalar = ScalarKind::Integer;
	/// Integer subtype constraint (natural, positive, `range a to b`).
	std::optional<std::int64_t> range_lo, range_hi;
	/// Vector bounds as declared: `left to right` / `left downto right`.
	bool downto = false;
	std::int64_t left = 0, right = 0;
	/// Arithmetic reading of a bit/logic vector (signed, unsigned).
	Numeric numeric = Numeric::None;
	/// Record fields in declaration order.
	std::vector<std::pair<std::string, TypeDesc>> fields;

	static TypeDesc scalar_of(ScalarKind k, std::string name = {});
	static TypeDesc vector_of(ScalarKind elem, bool downto, std::int64_t left, std::int64_t right,
			std::string name = {}, Numeric numeric = Numeric::None);

	std::int64_t length() const;
	std::int64_t low() const { return downto ? right : left; }
	std::int64_t high() const { return downto ? left : right; }
	ValTag vec_tag() const { return downto ? ValTag::VecDownto : ValTag::VecTo; }

	bool operator==(const TypeDesc &) const = default;
};

/// Default initial value: 'left of the scalar type, or the aggregate of such.
Val default_value(const TypeDesc &t);

/// Checks that v fits t (kind, length, integer range) and returns v rebased
/// onto t's index range. Throws SimError naming `what` on a mismatch.
Val conform(const Val &v, const TypeDesc &t, const std::string &what);

/// True when values of a and b have the same structure (scalar kind, vector
/// element kind and length, record field shapes).
bool same_shape(const TypeDesc &a, const TypeDesc &b);

std::string to_string(const TypeDesc &t);

} // namespace vhdlkern
