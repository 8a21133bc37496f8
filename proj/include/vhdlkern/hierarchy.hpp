#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vhdlkern/ast.hpp"
#include "vhdlkern/sim_kernel.hpp"
#include "vhdlkern/state.hpp"

namespace vhdlkern {

/// (component port leaf, outer signal/port leaf) pairs.
struct PortMap {
	std::vector<std::pair<std::string, std::string>> pairs;

	bool operator==(const PortMap &) const = default;
};

struct ArchState {
	/// Design name, looked up in the registry.
	std::string name;
	/// Instance label ("" for the root).
	std::string instance;
	SimState local;
	std::vector<std::pair<PortMap, ArchState>> children;

	bool operator==(const ArchState &) const = default;
};

/// Named, linked designs. Designs are held by pointer so references stay
/// valid as the registry grows.
class DesignRegistry {
public:
	/// Links d and adds it; throws SimError(Config) on a duplicate name.
	const Design &add(Design d);
	const Design *find(const std::string &name) const;
	const Design &get(const std::string &name) const;
	std::vector<std::string> names() const;
	bool empty() const { return entries_.empty(); }

private:
	std::vector<std::pair<std::string, std::shared_ptr<Design>>> entries_;
};

/// Instantiates top and, recursively, its components. Checks that every
/// referenced design exists, that port maps name existing ports, that
/// required inputs are mapped, and that the hierarchy is acyclic.
ArchState build_arch_state(const DesignRegistry &reg, const std::string &top, bool ignore_unknown = false);

/// Copies outer values into each child's in/inout ports.
void pass_input_all_comps(const DesignRegistry &reg, ArchState &outer);
/// Simulates each child for one cycle (no clock of their own).
void sim_comps(const DesignRegistry &reg, std::vector<std::pair<PortMap, ArchState>> &children, const SimConfig &cfg);
/// Copies child out/inout ports up to the mapped outer signals.
void get_comp_results(const DesignRegistry &reg, ArchState &outer);
/// n times: inputs down, children one cycle, outputs up, own cycle.
void sim_arch(std::int64_t n, const DesignRegistry &reg, ArchState &s, const SimConfig &cfg);

/// Finds the state of an instance path such as "u1.u2"; "" is s itself.
const ArchState &instance_state(const ArchState &s, const std::string &path);

} // namespace vhdlkern
