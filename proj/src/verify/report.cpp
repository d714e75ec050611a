#include "dlforge/verify/suites.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dlforge::verify {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

int parse_int(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    int out = 0;
    try {
        out = std::stoi(v, &used);
    }
    catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "yes" || v == "on" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "off" || v == "0")
        return false;
    throw ConfigError("config: " + key + " expects true or false, got '" + v + "'");
}

}  // namespace

std::map<std::string, std::string> RunConfig::echo() const
{
    std::string faults;
    for (const auto& f : inject_fault)
        faults += (faults.empty() ? "" : ",") + f;
    return {{"inject_fault", faults},
            {"max_degree", std::to_string(max_degree)},
            {"parallel", parallel ? "true" : "false"},
            {"timings", timings ? "true" : "false"},
            {"truncation", std::to_string(truncation)}};
}

RunConfig parse_run_config(const std::string& text, RunConfig c)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '-', '_');
        if (key == "max_degree")
            c.max_degree = parse_int(key, value);
        else if (key == "truncation")
            c.truncation = parse_int(key, value);
        else if (key == "parallel")
            c.parallel = parse_bool(key, value);
        else if (key == "timings")
            c.timings = parse_bool(key, value);
        else if (key == "inject_fault") {
            std::istringstream ids(value);
            for (std::string id; std::getline(ids, id, ',');)
                if (!trim(id).empty())
                    c.inject_fault.insert(trim(id));
        }
        else
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (c.max_degree < 1 || c.truncation < 1)
        throw ConfigError("config: max_degree and truncation must be positive");
    return c;
}

RunConfig load_run_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), std::move(base));
}

Format parse_format(const std::string& s)
{
    if (s == "json")
        return Format::Json;
    if (s == "text")
        return Format::Text;
    throw ConfigError("unknown report format '" + s + "'");
}

std::string format_report(const VerificationReport& r, Format f)
{
    if (f == Format::Json) {
        nlohmann::json j;
        j["suite"] = r.suite;
        j["overall"] = to_string(r.overall);
        j["tool_version"] = r.tool_version;
        j["config"] = r.config;
        j["anchors"] = r.anchors;
        if (!r.note.empty())
            j["note"] = r.note;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : r.checks)
            j["checks"].push_back({{"id", c.id},
                                   {"status", to_string(c.status)},
                                   {"witness", c.witness},
                                   {"elapsed_ms", std::round(c.elapsed_ms * 1000) / 1000},
                                   {"anchor", c.anchor},
                                   {"imported", c.imported}});
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "suite:   " << r.suite << "\n"
        << "overall: " << to_string(r.overall) << "\n"
        << "version: " << r.tool_version << "\n"
        << "config: ";
    for (const auto& [k, v] : r.config)
        out << " " << k << "=" << (v.empty() ? "-" : v);
    out << "\n";
    for (const auto& a : r.anchors)
        out << "anchor:  " << a << "\n";
    if (!r.note.empty())
        out << "note:    " << r.note << "\n";
    out << "\n";
    std::size_t width = 2;
    for (const auto& c : r.checks)
        width = std::max(width, c.id.size());
    for (const auto& c : r.checks) {
        std::string status = to_string(c.status);
        std::transform(status.begin(), status.end(), status.begin(), ::toupper);
        out << status << std::string(6 - status.size(), ' ') << c.id << std::string(width - c.id.size() + 2, ' ');
        char ms[32];
        std::snprintf(ms, sizeof ms, "%9.1f ms  ", c.elapsed_ms);
        out << ms << (c.imported ? "[imported] " : "") << c.witness << "\n";
    }
    std::size_t passed = std::count_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.status == Status::Pass; });
    out << "\n" << passed << "/" << r.checks.size() << " checks passed\n";
    return out.str();
}

void emit_report(const VerificationReport& r, const std::string& path, Format f)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write report to " + path);
    out << format_report(r, f);
    if (!out)
        throw std::runtime_error("write failed for " + path);
}

}  // namespace dlforge::verify
