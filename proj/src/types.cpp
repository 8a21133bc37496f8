#include "vhdlkern/types.hpp"

#include "vhdlkern/error.hpp"

namespace vhdlkern {

TypeDesc TypeDesc::scalar_of(ScalarKind k, std::string name) {
	TypeDesc t;
	t.kind = Kind::Scalar;
	t.scalar = k;
	t.name = name.empty() ? std::string(kind_name(k)) : std::move(name);
	return t;
}

TypeDesc TypeDesc::vector_of(ScalarKind elem, bool downto, std::int64_t left, std::int64_t right,
		std::string name, Numeric numeric) {
	TypeDesc t;
	t.kind = Kind::Vector;
	t.scalar = elem;
	t.downto = downto;
	t.left = left;
	t.right = right;
	t.numeric = numeric;
	t.name = std::move(name);
	return t;
}

std::int64_t TypeDesc::length() const {
	if (kind != Kind::Vector)
		return 0;
	std::int64_t n = downto ? left - right + 1 : right - left + 1;
	return n < 0 ? 0 : n;
}

Val default_value(const TypeDesc &t) {
	switch (t.kind) {
	case TypeDesc::Kind::Scalar: {
		if (t.scalar == ScalarKind::Integer && t.range_lo)
			return Val::integer(*t.range_lo);
		return Val(default_scalar(t.scalar));
	}
	case TypeDesc::Kind::Vector: {
		std::vector<Scalar> elems(static_cast<std::size_t>(t.length()), default_scalar(t.scalar));
		return Val::vector(t.vec_tag(), t.left, t.scalar, std::move(elems));
	}
	case TypeDesc::Kind::Record: {
		std::vector<std::string> names;
		std::vector<Val> members;
		for (const auto &[n, ft] : t.fields) {
			names.push_back(n);
			members.push_back(default_value(ft));
		}
		return Val::record(std::move(names), std::move(members));
	}
	}
	return Val();
}

Val conform(const Val &v, const TypeDesc &t, const std::string &what) {
	switch (t.kind) {
	case TypeDesc::Kind::Scalar:
		if (!v.is_scalar() || v.scalar_kind() != t.scalar)
			fail(ErrorKind::Eval, "type mismatch assigning " + to_string(v) + " to " + what + " of type " + to_string(t));
		if (t.scalar == ScalarKind::Integer && t.range_lo) {
			std::int64_t x = v.as_int();
			if (x < *t.range_lo || x > *t.range_hi)
				fail(ErrorKind::Eval, "value " + std::to_string(x) + " out of range " + std::to_string(*t.range_lo) +
						" to " + std::to_string(*t.range_hi) + " for " + what);
		}
		return v;
	case TypeDesc::Kind::Vector:
		if (!v.is_vector() || (v.length() > 0 && v.elem_kind() != t.scalar))
			fail(ErrorKind::Eval, "type mismatch assigning " + to_string(v) + " to " + what + " of type " + to_string(t));
		if (v.length() != t.length())
			fail(ErrorKind::Eval, "length mismatch assigning " + std::to_string(v.length()) + " elements to " + what +
					" of length " + std::to_string(t.length()));
		if (v.tag() == t.vec_tag() && v.left() == t.left && v.elem_kind() == t.scalar)
			return v;
		return Val::vector(t.vec_tag(), t.left, t.scalar, v.elems());
	case TypeDesc::Kind::Record: {
		if (!v.is_record() || v.members().size() != t.fields.size())
			fail(ErrorKind::Eval, "type mismatch assigning " + to_string(v) + " to record " + what);
		std::vector<std::string> names;
		std::vector<Val> members;
		for (std::size_t k = 0; k < t.fields.size(); ++k) {
			names.push_back(t.fields[k].first);
			members.push_back(conform(v.members()[k], t.fields[k].second, what + "." + t.fields[k].first));
		}
		return Val::record(std::move(names), std::move(members));
	}
	}
	return v;
}

bool same_shape(const TypeDesc &a, const TypeDesc &b) {
	if (a.kind != b.kind)
		return false;
	switch (a.kind) {
	case TypeDesc::Kind::Scalar: return a.scalar == b.scalar;
	case TypeDesc::Kind::Vector: return a.scalar == b.scalar && a.length() == b.length();
	case TypeDesc::Kind::Record:
		if (a.fields.size() != b.fields.size())
			return false;
		for (std::size_t k = 0; k < a.fields.size(); ++k)
			if (!same_shape(a.fields[k].second, b.fields[k].second))
				return false;
		return true;
	}
	return false;
}

std::string to_string(const TypeDesc &t) {
	switch (t.kind) {
	case TypeDesc::Kind::Scalar: {
		std::string s = t.name.empty() ? std::string(kind_name(t.scalar)) : t.name;
		return s;
	}
	case TypeDesc::Kind::Vector:
		return (t.name.empty() ? "array of " + std::string(kind_name(t.scalar)) : t.name) + "(" +
				std::to_string(t.left) + (t.downto ? " downto " : " to ") + std::to_string(t.right) + ")";
	case TypeDesc::Kind::Record:
		return t.name.empty() ? "record" : t.name;
	}
	return "?";
}

} // namespace vhdlkern
