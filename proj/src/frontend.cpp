#include "vhdlkern/frontend.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "vhdlkern/error.hpp"
#include "vhdlkern/serialize.hpp"

namespace vhdlkern {

SourceUnit read_source(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		fail(ErrorKind::Config, "cannot read \"" + path + "\"");
	std::ostringstream ss;
	ss << in.rdbuf();
	return SourceUnit{path, ss.str()};
}

namespace {

bool ends_with(const std::string &s, const std::string &suf) {
	return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void register_design(LoadResult &r, Design d, const std::string &path) {
	auto diags = check_design(d);
	for (auto &dg : diags)
		if (dg.span.file.empty())
			dg.span.file = path;
	bool bad = has_errors(diags);
	r.diags.insert(r.diags.end(), diags.begin(), diags.end());
	if (bad)
		return;
	try {
		r.registry.add(std::move(d));
	} catch (const SimError &e) {
		r.diags.push_back(Diagnostic{Diagnostic::Severity::Error, e.what(), SourceSpan{path, 0, 0, 0}});
	}
}

void add_complex(LoadResult &r, std::vector<ComplexDesign> cds, const std::string &path, const LoadOptions &opt) {
	for (auto &cd : cds) {
		std::vector<Diagnostic> diags;
		Design d = lower_design(cd, diags, opt.lower);
		for (auto &dg : diags)
			if (dg.span.file.empty())
				dg.span.file = path;
		bool bad = has_errors(diags);
		r.diags.insert(r.diags.end(), diags.begin(), diags.end());
		r.complex.push_back(std::move(cd));
		if (!bad)
			register_design(r, std::move(d), path);
	}
}

} // namespace

LoadResult load_registry(const std::vector<std::string> &paths, const LoadOptions &opt) {
	LoadResult r;
	for (const auto &p : paths) {
		SourceUnit src;
		try {
			src = read_source(p);
		} catch (const SimError &e) {
			r.diags.push_back(Diagnostic{Diagnostic::Severity::Error, e.what(), SourceSpan{p, 0, 0, 0}});
			continue;
		}
		if (ends_with(p, ".json")) {
			try {
				auto j = nlohmann::json::parse(src.text);
				std::string form = j.is_object() && j.contains("form") ? j.at("form").get<std::string>() : "core";
				if (form == "complex") {
					add_complex(r, load_complex(src.text), p, opt);
				} else {
					for (auto &d : load_core(src.text)) {
						link(d);
						register_design(r, std::move(d), p);
					}
				}
			} catch (const std::exception &e) {
				r.diags.push_back(Diagnostic{Diagnostic::Severity::Error, e.what(), SourceSpan{p, 0, 0, 0}});
			}
			continue;
		}
		ParseResult pr = parse_design(src);
		r.diags.insert(r.diags.end(), pr.diags.begin(), pr.diags.end());
		add_complex(r, std::move(pr.designs), p, opt);
	}
	return r;
}

} // namespace vhdlkern
