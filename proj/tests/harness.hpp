#pragma once

// Shared by the unit tests and the acceptance binary: corpus access and a
// cycle-steppable test bench over the same path the CLI takes.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vhdlkern/frontend.hpp"
#include "vhdlkern/hierarchy.hpp"
#include "vhdlkern/run.hpp"
#include "vhdlkern/sim_kernel.hpp"

namespace vk_test {

using namespace vhdlkern;

std::string corpus_dir();
std::string corpus_file(const std::string &design, const std::string &file);
/// Corpus design directories, sorted.
std::vector<std::string> corpus_names();

struct CorpusCase {
	std::string name;
	RunSpec spec;
	int expect_exit = 0;
	std::vector<std::string> expect_stderr;
	/// "name = value" lines the final dump must contain.
	std::vector<std::string> expected;
};
CorpusCase load_case(const std::string &name);

/// Turns CLI-style arguments (as in a runspec) into a RunSpec. File
/// arguments are resolved against base_dir.
RunSpec spec_from_args(const std::vector<std::string> &args, const std::string &base_dir);

struct RunOut {
	int code = 0;
	std::string out;
	std::string err;
};
RunOut run_capture(const RunSpec &spec);

std::vector<std::string> lines_of(const std::string &text);
/// Expected lines missing from a dump.
std::vector<std::string> missing_lines(const std::vector<std::string> &expected, const std::string &dump);

/// Loads files, picks the top design and steps it one cycle at a time the
/// same way `run` does.
class Bench {
public:
	Bench(const std::vector<std::string> &files, std::optional<std::string> top = std::nullopt,
			std::optional<std::string> clock = std::nullopt, LoadOptions opt = {});
	/// Parses lit against the port's type and forces it before the next cycle.
	void set(const std::string &sig, const std::string &lit);
	void set_int(const std::string &sig, std::int64_t v) { set(sig, std::to_string(v)); }
	void step(std::int64_t n = 1);
	/// Value of a signal by path ("result", "u_mult.p").
	const Val &get(const std::string &path) const;
	std::int64_t get_int(const std::string &path) const { return get(path).as_int(); }
	std::string dump() const;
	std::int64_t cycle() const { return root_.local.cycle; }
	const DesignRegistry &registry() const { return lr_.registry; }
	const Design &top() const { return registry().get(top_); }
	ArchState &state() { return root_; }
	SimConfig &config() { return cfg_; }

private:
	LoadResult lr_;
	std::string top_;
	ArchState root_;
	SimConfig cfg_;
};

/// Loads a registry or throws with the diagnostics in the message.
LoadResult load_ok(const std::vector<std::string> &files, LoadOptions opt = {});

/// Loads one design from VHDL text held in memory (written to a temp file).
LoadResult load_text(const std::string &vhdl, LoadOptions opt = {});

/// Every permutation of the processes of d, relinked. d itself comes first.
std::vector<Design> process_permutations(const Design &d);

/// Small deterministic generator for the property suites.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : gen_(seed) {}
	std::uint64_t next();
	std::int64_t range(std::int64_t lo, std::int64_t hi); // inclusive
	bool coin() { return next() & 1; }
	template <class T>
	const T &pick(const std::vector<T> &v) { return v[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(v.size()) - 1))]; }

private:
	std::mt19937_64 gen_;
};

} // namespace vk_test
