#include "dlforge/dl/normalizer.hpp"
#include "dlforge/dl/parser.hpp"
#include "dlforge/dl/relations.hpp"
#include "dlforge/verify/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace dlforge;

namespace {

constexpr int kUsage = 2;

dl::Context load_context(const std::string& path)
{
    if (path.empty())
        return dl::base_context();
    std::ifstream in(path);
    if (!in)
        throw verify::ConfigError("cannot read context file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return dl::Context::parse(ss.str());
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dlforge: exact Dyer-Lashof and formal group computations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", verify::tool_version());

    auto* run = app.add_subcommand("run", "run a verification suite");
    std::string suite, report_path, format = "text", config_path;
    std::optional<int> max_degree, truncation;
    bool parallel = false, no_timings = false;
    run->add_option("--suite", suite, "suite name, see `dlforge list`")->required();
    run->add_option("--max-degree", max_degree, "generator range of the dual Steenrod model");
    run->add_option("--truncation", truncation, "a-adic precision of the power-operation pipeline");
    run->add_option("--report", report_path, "write the report here instead of stdout");
    run->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    run->add_flag("--parallel", parallel, "run checks concurrently");
    run->add_option("--config", config_path, "key = value config file");
    run->add_flag("--no-timings", no_timings, "zero the elapsed times");

    auto* list = app.add_subcommand("list", "list suites and their anchors");

    std::string context_path, expr;
    std::optional<int> strict;
    auto* normalize = app.add_subcommand("normalize", "normal form of an operation expression");
    normalize->add_option("--context", context_path, "file of `gen <name> deg <d>` lines (default: x in degree 2)");
    normalize->add_option("--expr", expr, "expression, e.g. \"Q20 Q8 x\"")->required();
    normalize->add_option("--strict", strict, "reject applications outside the E_n window");

    auto* en = app.add_subcommand("en-level", "E_n level needed to evaluate an expression");
    en->add_option("--context", context_path, "file of `gen <name> deg <d>` lines (default: x in degree 2)");
    en->add_option("--expr", expr, "expression")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*run) {
            verify::RunConfig cfg;
            if (!config_path.empty())
                cfg = verify::load_run_config(config_path, cfg);
            if (max_degree)
                cfg.max_degree = *max_degree;
            if (truncation)
                cfg.truncation = *truncation;
            if (parallel)
                cfg.parallel = true;
            if (no_timings)
                cfg.timings = false;
            const auto fmt = verify::parse_format(format);
            const auto rep = verify::run_suite(suite, cfg);
            if (report_path.empty()) {
                std::cout << verify::format_report(rep, fmt);
            }
            else {
                verify::emit_report(rep, report_path, fmt);
                std::size_t passed = 0;
                for (const auto& c : rep.checks)
                    passed += c.status == verify::Status::Pass;
                std::cout << rep.suite << ": " << verify::to_string(rep.overall) << " (" << passed << "/"
                          << rep.checks.size() << "), report in " << report_path << "\n";
            }
            return rep.passed() ? 0 : 1;
        }
        if (*list) {
            for (const auto& s : verify::registry()) {
                std::cout << s.name << " (" << s.checks.size() << " checks): " << s.description << "\n";
                for (const auto& a : s.anchors)
                    std::cout << "    " << a << "\n";
            }
            return 0;
        }
        if (*normalize) {
            dl::NormalizerOptions opts;
            opts.strict_level = strict;
            dl::Normalizer n(load_context(context_path), opts);
            std::cout << n.normalize(*dl::parse_expression(expr, n.context())).to_string(n.context()) << "\n";
            return 0;
        }
        if (*en) {
            dl::Normalizer n(load_context(context_path));
            auto l = dl::min_en_level(n, *dl::parse_expression(expr, n.context()));
            std::cout << l.level;
            if (l.r >= 0)
                std::cout << " (Q" << l.r << " on degree " << l.d << ")";
            std::cout << "\n";
            return 0;
        }
    }
    catch (const verify::ConfigError& e) {
        std::cerr << "dlforge: " << e.what() << "\n";
        return kUsage;
    }
    catch (const verify::UnknownSuite& e) {
        std::cerr << "dlforge: " << e.what() << "\n";
        return kUsage;
    }
    catch (const dl::ParseError& e) {
        std::cerr << "dlforge: parse error at " << e.position() << ": " << e.what() << "\n";
        return kUsage;
    }
    catch (const std::exception& e) {
        std::cerr << "dlforge: " << e.what() << "\n";
        return 1;
    }
    return kUsage;
}
