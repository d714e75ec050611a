#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlforge::verify {

enum class Status { Pass, Fail, Error };
std::string to_string(Status s);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownSuite : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    // generator range of the dual Steenrod model; H_*MU uses min(this, 48)
    int max_degree = 64;
    // a-adic precision of the power-operation pipeline
    int truncation = 8;
    bool parallel = false;
    // report elapsed times; off gives byte-stable reports
    bool timings = true;
    // check ids to sabotage; "*" hits every check
    std::set<std::string> inject_fault;

    std::map<std::string, std::string> echo() const;
};

// key = value lines, '#' comments. Keys: max_degree, truncation, parallel,
// timings, inject_fault (comma separated). Dashes and underscores are
// interchangeable in keys.
RunConfig parse_run_config(const std::string& text, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

class Workspace;

struct CheckEnv {
    Workspace& ws;
    const RunConfig& config;
    bool faulted = false;
    // set by checks that turn the fault into a genuinely wrong input
    mutable bool fault_consumed = false;
};

struct Outcome {
    bool ok = false;
    std::string witness;
};

struct CheckDefinition {
    std::string id;
    std::string anchor;
    std::function<Outcome(const CheckEnv&)> run;
    // stated here, checked elsewhere
    bool imported = false;
};

struct SuiteDefinition {
    std::string name;
    std::string description;
    std::vector<std::string> anchors;
    std::vector<CheckDefinition> checks;
};

// every suite in registration order; "all" last
const std::vector<SuiteDefinition>& registry();
const SuiteDefinition& find_suite(const std::string& name);
std::vector<std::string> suite_names();

struct CheckResult {
    std::string id;
    Status status = Status::Error;
    std::string witness;
    double elapsed_ms = 0;
    std::string anchor;
    bool imported = false;
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckResult> checks;  // sorted by id
    Status overall = Status::Pass;
    std::string tool_version;
    std::map<std::string, std::string> config;
    std::vector<std::string> anchors;
    std::string note;

    bool passed() const { return overall == Status::Pass; }
};

VerificationReport run_suite(const std::string& name, const RunConfig& config = {});

std::string tool_version();

enum class Format { Json, Text };
Format parse_format(const std::string& s);
std::string format_report(const VerificationReport& r, Format f);
// throws std::runtime_error when the file cannot be written
void emit_report(const VerificationReport& r, const std::string& path, Format f);

}  // namespace dlforge::verify
