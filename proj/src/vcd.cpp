#include "vhdlkern/vcd.hpp"

#include <cctype>
#include <cstdio>

namespace vhdlkern {

namespace {

std::string code_of(std::int64_t n) {
	// printable ASCII from '!' to '~'
	std::string s;
	do {
		s += static_cast<char>('!' + n % 94);
		n /= 94;
	} while (n > 0);
	return s;
}

char scalar_char(const Scalar &s) {
	switch (kind_of(s)) {
	case ScalarKind::Bit: return std::get<Bit>(s).v ? '1' : '0';
	case ScalarKind::Boolean: return std::get<bool>(s) ? '1' : '0';
	case ScalarKind::Logic: return static_cast<char>(std::tolower(static_cast<unsigned char>(logic9_char(std::get<Logic9>(s)))));
	default: return 'x';
	}
}

std::string bits(std::uint64_t v, int width) {
	std::string s;
	for (int k = width - 1; k >= 0; --k)
		s += (v >> k) & 1U ? '1' : '0';
	return s;
}

std::string var_decl(const TypeDesc &t, std::string &kind) {
	kind = "wire";
	if (t.kind == TypeDesc::Kind::Vector)
		return std::to_string(t.scalar == ScalarKind::Character ? 8 * t.length() : t.length());
	switch (t.scalar) {
	case ScalarKind::Integer: kind = "integer"; return "64";
	case ScalarKind::Time: kind = "time"; return "64";
	case ScalarKind::Real: kind = "real"; return "64";
	case ScalarKind::Character: return "8";
	default: return "1";
	}
}

} // namespace

std::string vcd_value(const Val &v) {
	if (v.is_vector()) {
		std::string s = "b";
		for (const auto &e : v.elems())
			s += kind_of(e) == ScalarKind::Character ? bits(static_cast<unsigned char>(std::get<char>(e)), 8)
								: std::string(1, scalar_char(e));
		return s;
	}
	const Scalar &s = v.scalar();
	switch (kind_of(s)) {
	case ScalarKind::Integer: return "b" + bits(static_cast<std::uint64_t>(std::get<std::int64_t>(s)), 64);
	case ScalarKind::Time: return "b" + bits(static_cast<std::uint64_t>(std::get<Time>(s).fs), 64);
	case ScalarKind::Character: return "b" + bits(static_cast<unsigned char>(std::get<char>(s)), 8);
	case ScalarKind::Real: {
		char buf[64];
		std::snprintf(buf, sizeof buf, "r%.17g", std::get<double>(s));
		return buf;
	}
	default: return std::string(1, scalar_char(s));
	}
}

VcdWriter::VcdWriter(std::ostream &out, const DesignRegistry &reg, const ArchState &root) : out_(out), reg_(reg) {
	out_ << "$timescale 1 ns $end\n";
	declare(root, "");
	out_ << "$enddefinitions $end\n";
	sample(0, root);
}

void VcdWriter::declare(const ArchState &s, const std::string &path) {
	const Design &d = reg_.get(s.name);
	out_ << "$scope module " << (s.instance.empty() ? s.name : s.instance) << " $end\n";
	const auto &leaves = d.idx().leaves;
	for (std::size_t k = 0; k < leaves.size(); ++k) {
		std::string kind;
		std::string width = var_decl(leaves[k].type, kind);
		std::string name = leaves[k].name;
		for (auto &c : name)
			if (c == '.')
				c = '_';
		Var v{path, static_cast<std::int32_t>(k), code_of(next_code_++), ""};
		out_ << "$var " << kind << " " << width << " " << v.code << " " << name << " $end\n";
		vars_.push_back(std::move(v));
	}
	for (const auto &[pm, c] : s.children)
		declare(c, path.empty() ? c.instance : path + "." + c.instance);
	out_ << "$upscope $end\n";
}

void VcdWriter::collect(const ArchState &s, const std::string &path, std::map<std::string, const SimState *> &out) const {
	out[path] = &s.local;
	for (const auto &[pm, c] : s.children)
		collect(c, path.empty() ? c.instance : path + "." + c.instance, out);
}

void VcdWriter::sample(std::int64_t time, const ArchState &root) {
	std::map<std::string, const SimState *> states;
	collect(root, "", states);
	bool stamped = false;
	for (auto &v : vars_) {
		const SimState *st = states.at(v.path);
		std::string text = vcd_value(st->sp[static_cast<std::size_t>(v.leaf)]);
		if (text == v.last)
			continue;
		if (!stamped) {
			out_ << "#" << time << "\n";
			stamped = true;
		}
		v.last = text;
		out_ << text << (text.size() > 1 ? " " : "") << v.code << "\n";
	}
}

} // namespace vhdlkern
