#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "errors.hpp"

namespace sdw {

// Flat dotted-key configuration.  parse/validate fill it; run() executes the
// command and emits the CSV artifact with the resolved config in its header.
struct ExperimentConfig {
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }
    const std::string& get(const std::string& k) const;
    std::string get_or(const std::string& k, const std::string& dflt) const;
};

// Parses `key=value` lines with '#' comments; syntax errors carry the line
// number, unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);

// Fills explicit defaults for the configured command and checks semantic
// constraints that do not need the heavy machinery.
void resolve_defaults(ExperimentConfig& cfg);

// Executes the command, writing the artifact to cfg["out"] (atomic) or to
// `fallback_out`.  Returns the process exit code; error records go to `err`
// as single-line JSON.
int run(ExperimentConfig cfg, std::ostream& fallback_out, std::ostream& err);

inline constexpr const char* kToolVersion = "sdw 1.0";

// Exit code classes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPrecision = 3;
inline constexpr int kExitCap = 4;
inline constexpr int kExitInfeasible = 5;

} // namespace sdw
