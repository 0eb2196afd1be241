// attackgraph - evaluate a security model over a fact base and export the
// attack graphs for the attacker goals.
//
// Exit codes: 0 success; 1 usage, parse, or validation error; 2 at least one
// goal is not derivable.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "attackgraph.h"

namespace {

struct string_deleter {
    void operator()(char* p) const { ag_string_free(p); }
};
using api_string = std::unique_ptr<char, string_deleter>;

struct run_config {
    std::vector<std::string> fact_paths;
    std::string inventory_path;
    std::vector<std::string> rules = {"extended"};
    std::vector<std::string> goals;
    std::string format = "dot";
    std::string out_path;
    std::size_t max_facts = 0; // 0 = library default
    bool validate_only = false;
};

int fail(const std::string& message) {
    std::cerr << "attackgraph: " << message << "\n";
    return 1;
}

ag_ruleset* load_rules(const run_config& config) {
    ag_ruleset* merged = nullptr;
    for (const std::string& spec : config.rules) {
        ag_ruleset* next = nullptr;
        if (spec == "extended") {
            next = ag_ruleset_extended();
        } else if (spec == "legacy") {
            next = ag_ruleset_legacy();
        } else if (spec == "both") {
            ag_ruleset* extended = ag_ruleset_extended();
            ag_ruleset* legacy = ag_ruleset_legacy();
            ag_ruleset_merge(extended, legacy, &next);
            ag_ruleset_free(extended);
            ag_ruleset_free(legacy);
        } else {
            char* error = nullptr;
            if (ag_ruleset_load(spec.c_str(), &next, &error) != AG_OK) {
                std::string message = error ? error : "cannot load rules";
                ag_string_free(error);
                ag_ruleset_free(merged);
                throw std::runtime_error(spec + ": " + message);
            }
        }
        if (!merged) {
            merged = next;
        } else {
            ag_ruleset* combined = nullptr;
            ag_ruleset_merge(merged, next, &combined);
            ag_ruleset_free(merged);
            ag_ruleset_free(next);
            merged = combined;
        }
    }
    return merged;
}

bool write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return out.good();
}

// graph.dot -> graph.2.dot for the second goal; used when several goals are
// requested so each graph lands in its own file.
std::string indexed_path(const std::string& path, std::size_t index) {
    std::size_t dot = path.find_last_of('.');
    std::size_t slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + std::to_string(index + 1);
    return path.substr(0, dot) + "." + std::to_string(index + 1) + path.substr(dot);
}

int run(const run_config& config) {
    std::unique_ptr<ag_ruleset, decltype(&ag_ruleset_free)> rules(nullptr, ag_ruleset_free);
    try {
        rules.reset(load_rules(config));
    } catch (const std::exception& e) {
        return fail(e.what());
    }

    std::unique_ptr<ag_program, decltype(&ag_program_free)> facts(ag_program_new(),
                                                                  ag_program_free);
    struct source {
        std::string path;
        ag_program* prog;
    };
    std::vector<source> sources;
    auto cleanup_sources = [&sources] {
        for (auto& s : sources) ag_program_free(s.prog);
    };

    for (const std::string& path : config.fact_paths) {
        ag_program* prog = nullptr;
        char* error = nullptr;
        if (ag_program_parse_file(path.c_str(), &prog, &error) != AG_OK) {
            std::string message = error ? error : "parse error";
            ag_string_free(error);
            cleanup_sources();
            return fail(path + ": " + message);
        }
        sources.push_back({path, prog});
    }

    if (!config.inventory_path.empty()) {
        std::ifstream in(config.inventory_path, std::ios::binary);
        if (!in) {
            cleanup_sources();
            return fail(config.inventory_path + ": cannot open inventory");
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        ag_program* prog = nullptr;
        char* warnings = nullptr;
        char* error = nullptr;
        if (ag_ingest(text.c_str(), &prog, &warnings, &error) != AG_OK) {
            std::string message = error ? error : "ingest error";
            ag_string_free(error);
            ag_string_free(warnings);
            cleanup_sources();
            return fail(config.inventory_path + ": " + message);
        }
        if (warnings && *warnings) std::cerr << warnings;
        ag_string_free(warnings);
        sources.push_back({config.inventory_path, prog});
    }

    // Static checks run per input so findings point at the right file.
    // Rule-set-level notes (inputs no rule consumes, shipped rules deriving
    // wildcards) are independent of the file, so they are shown once.
    bool validation_failed = false;
    bool first_source = true;
    for (const auto& s : sources) {
        char* report = nullptr;
        size_t error_count = 0;
        ag_validate(s.prog, rules.get(), &report, &error_count);
        if (report && *report) {
            std::istringstream lines(report);
            std::string line;
            while (std::getline(lines, line)) {
                bool schema_note =
                    line.find("never matched by any rule body") != std::string::npos ||
                    (line.find(" rule for ") != std::string::npos &&
                     line.find("warning: local rule for") == std::string::npos);
                if (schema_note && !first_source) continue;
                std::cerr << s.path << ": " << line << "\n";
            }
        }
        ag_string_free(report);
        if (error_count > 0) validation_failed = true;
        ag_program_merge(facts.get(), s.prog);
        first_source = false;
    }
    cleanup_sources();
    if (validation_failed) return fail("validation failed");
    if (config.validate_only) return 0;

    std::vector<std::string> goals = config.goals;
    if (goals.empty()) {
        for (size_t i = 0; i < ag_program_goal_count(facts.get()); ++i) {
            api_string goal(ag_program_goal(facts.get(), i));
            goals.emplace_back(goal.get());
        }
    }
    if (goals.empty()) return fail("no goal: pass --goal or declare attackGoal facts");

    ag_ledger* ledger_raw = nullptr;
    {
        char* error = nullptr;
        ag_status status =
            ag_evaluate(facts.get(), rules.get(), config.max_facts, &ledger_raw, &error);
        if (status != AG_OK) {
            std::string message = error ? error : "evaluation failed";
            ag_string_free(error);
            return fail(message);
        }
    }
    std::unique_ptr<ag_ledger, decltype(&ag_ledger_free)> ledger(ledger_raw, ag_ledger_free);

    if (config.format == "facts") {
        api_string dump(ag_ledger_dump(ledger.get()));
        if (!write_output(config.out_path, dump.get()))
            return fail(config.out_path + ": cannot write output");
    }

    int exit_code = 0;
    for (std::size_t i = 0; i < goals.size(); ++i) {
        ag_graph* graph_raw = nullptr;
        char* error = nullptr;
        ag_status status = ag_graph_build(ledger.get(), goals[i].c_str(), &graph_raw, &error);
        if (status == AG_ERR_GOAL_NOT_DERIVABLE) {
            std::cerr << "attackgraph: " << (error ? error : "goal not derivable") << "\n";
            ag_string_free(error);
            exit_code = 2;
            continue;
        }
        if (status != AG_OK) {
            std::string message = error ? error : "graph construction failed";
            ag_string_free(error);
            return fail(message);
        }
        std::unique_ptr<ag_graph, decltype(&ag_graph_free)> graph(graph_raw, ag_graph_free);
        if (config.format == "facts") continue; // ledger already written
        api_string rendered(config.format == "dot" ? ag_graph_to_dot(graph.get())
                                                   : ag_graph_to_json(graph.get()));
        std::string path = config.out_path;
        if (!path.empty() && goals.size() > 1) path = indexed_path(path, i);
        if (!write_output(path, rendered.get())) return fail(path + ": cannot write output");
    }
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    run_config config;
    CLI::App app{"Logical attack-graph generator: evaluates a Datalog security"
                 " model over a fact base and exports the derivation graph for"
                 " each attacker goal."};
    app.add_option("--facts", config.fact_paths, "Fact file(s) in the clause format")
        ->type_name("PATH");
    app.add_option("--ingest", config.inventory_path,
                   "Host-inventory document (JSON) to convert into facts")
        ->type_name("PATH");
    app.add_option("--rules", config.rules,
                   "Rule selection: extended, legacy, both, or a rule-file path"
                   " (repeatable)")
        ->type_name("SPEC");
    app.add_option("--goal", config.goals,
                   "Goal atom(s); overrides attackGoal facts from the inputs")
        ->type_name("ATOM");
    app.add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"dot", "json", "facts"}))
        ->capture_default_str();
    app.add_option("--out", config.out_path,
                   "Output path (default stdout); goal index is appended when"
                   " several goals are given")
        ->type_name("PATH");
    app.add_option("--max-facts", config.max_facts,
                   "Cap on derived facts (default 1000000)")
        ->type_name("N");
    app.add_flag("--validate-only", config.validate_only,
                 "Run static validation of the fact base and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (config.fact_paths.empty() && config.inventory_path.empty())
        return fail("no fact input: pass --facts or --ingest");

    try {
        return run(config);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}
