#pragma once

// Value change dump of a hierarchy, sampled after each cycle. One cycle is
// one time unit; each instance is a scope named by its label.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "vhdlkern/hierarchy.hpp"

namespace vhdlkern {

class VcdWriter {
public:
	/// Writes the header and the values at time 0.
	VcdWriter(std::ostream &out, const DesignRegistry &reg, const ArchState &root);
	/// Writes the values that changed since the last sample at time `time`.
	void sample(std::int64_t time, const ArchState &root);

private:
	struct Var {
		std::string path; // instance path
		std::int32_t leaf;
		std::string code;
		std::string last;
	};
	void declare(const ArchState &s, const std::string &path);
	void collect(const ArchState &s, const std::string &path, std::map<std::string, const SimState *> &out) const;

	std::ostream &out_;
	const DesignRegistry &reg_;
	std::vector<Var> vars_;
	std::int64_t next_code_ = 0;
};

/// VCD text for one value: "1", "b0101", "r1.5" (without the identifier).
std::string vcd_value(const Val &v);

} // namespace vhdlkern
