#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vhdlkern/logic9.hpp"

namespace vhdlkern {

struct Bit {
	bool v = false;
	bool operator==(const Bit &) const = default;
};

/// Physical time, integer femtoseconds.
struct Time {
	std::int64_t fs = 0;
	bool operator==(const Time &) const = default;
};

/// Alternative order must stay in sync with ScalarKind.
using Scalar = std::variant<Bit, bool, char, std::int64_t, double, Time, Logic9>;

enum class ScalarKind : std::uint8_t { Bit, Boolean, Character, Integer, Real, Time, Logic };

inline ScalarKind kind_of(const Scalar &s) { return static_cast<ScalarKind>(s.index()); }
std::string_view kind_name(ScalarKind k);

/// Default ('left) value of a scalar kind: '0', false, NUL, 0, 0.0, 0 fs, 'U'.
Scalar default_scalar(ScalarKind k);

enum class ValTag : std::uint8_t { Scalar, VecTo, VecDownto, Record };

/// Runtime value. Vectors keep their elements in written (left-to-right)
/// order together with the index of the leftmost element, so a `downto`
/// vector holds its elements in descending index order and the logical index
/// i lives at position (left - i).
class Val {
public:
	Val() : scalar_(std::int64_t{0}) {}
	Val(Scalar s) : scalar_(s) {} // NOLINT: scalars convert implicitly

	static Val bit(bool b) { return Val(Scalar{Bit{b}}); }
	static Val boolean(bool b) { return Val(Scalar{b}); }
	static Val character(char c) { return Val(Scalar{c}); }
	static Val integer(std::int64_t i) { return Val(Scalar{i}); }
	static Val real(double r) { return Val(Scalar{r}); }
	static Val time(std::int64_t fs) { return Val(Scalar{Time{fs}}); }
	static Val logic(Logic9 l) { return Val(Scalar{l}); }

	static Val vector(ValTag dir, std::int64_t left, ScalarKind elem, std::vector<Scalar> elems);
	/// Vector from a character string such as "01XZ", element kind selects
	/// how each character is read (Bit, Logic or Character).
	static Val vector_from_string(ValTag dir, std::int64_t left, ScalarKind elem, std::string_view s);
	static Val record(std::vector<std::string> names, std::vector<Val> members);

	ValTag tag() const { return tag_; }
	bool is_scalar() const { return tag_ == ValTag::Scalar; }
	bool is_vector() const { return tag_ == ValTag::VecTo || tag_ == ValTag::VecDownto; }
	bool is_record() const { return tag_ == ValTag::Record; }

	const Scalar &scalar() const { return scalar_; }
	ScalarKind scalar_kind() const { return kind_of(scalar_); }

	ScalarKind elem_kind() const { return elem_kind_; }
	std::int64_t left() const { return left_; }
	std::int64_t length() const { return static_cast<std::int64_t>(elems_.size()); }
	std::int64_t low() const;
	std::int64_t high() const;
	const std::vector<Scalar> &elems() const { return elems_; }
	std::vector<Scalar> &elems() { return elems_; }

	const std::vector<std::string> &field_names() const { return names_; }
	const std::vector<Val> &members() const { return members_; }
	std::vector<Val> &members() { return members_; }

	/// Same elements and element kind, new direction and left bound.
	Val rebased(ValTag dir, std::int64_t left) const;

	std::int64_t as_int() const;
	bool as_bool() const;

	bool operator==(const Val &) const = default;

private:
	ValTag tag_ = ValTag::Scalar;
	Scalar scalar_;
	ScalarKind elem_kind_ = ScalarKind::Bit;
	std::int64_t left_ = 0;
	std::vector<Scalar> elems_;
	std::vector<std::string> names_;
	std::vector<Val> members_;
};

std::string to_string(const Scalar &s);
std::string to_string(const Val &v);

enum class OpClass : std::uint8_t { Unary, Logical, Relational, Shift, Arith };

enum class Op : std::uint8_t {
	// unary
	Not, Abs, Neg, ToInteger, ToVector, Resize,
	// logical
	And, Or, Nand, Nor, Xor, Xnor,
	// relational
	Eq, Ne, Lt, Le, Gt, Ge,
	// shift
	Sll, Srl, Sla, Sra, Rol, Ror,
	// arithmetic
	Add, Sub, Mul, Div, Mod, Rem, Pow, Concat,
};

/// How a bit/logic vector is read by arithmetic and ordering operators.
enum class Numeric : std::uint8_t { None, Unsigned, Signed };

struct OpKind {
	OpClass cls = OpClass::Unary;
	Op op = Op::Not;
	Numeric numeric = Numeric::None;
	/// Result width of ToVector / Resize.
	std::int64_t width = 0;

	bool operator==(const OpKind &) const = default;
};

OpClass class_of(Op op);
std::string_view op_name(Op op);
bool op_from_name(std::string_view name, Op &out);
inline OpKind make_op(Op op, Numeric n = Numeric::None, std::int64_t width = 0) {
	return OpKind{class_of(op), op, n, width};
}

Val eval_unop(const OpKind &op, const Val &v);
Val eval_binop(const OpKind &op, const Val &a, const Val &b);

/// Element at logical index i.
Val vec_nth(const Val &v, std::int64_t i);
/// The len elements whose logical indices are start .. start+len-1; the
/// result keeps v's direction.
Val vec_slice(const Val &v, std::int64_t start, std::int64_t len);
/// Singleton or re-directed vector (exp_tl / exp_trl).
Val to_vector(const Val &v, bool reversed);
/// Copy of v with the elements at logical indices start .. start+len-1
/// replaced by the elements of part.
Val vec_replace(const Val &v, std::int64_t start, const Val &part);

Scalar resolve_logic9(std::span<const Scalar> drivers);
/// `resolved` lifted to logic vectors element by element.
Val resolve_vals(std::span<const Val> drivers);

} // namespace vhdlkern
