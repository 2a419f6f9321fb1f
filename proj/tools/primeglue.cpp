// primeglue: run a gluing script and write JSON/DOT artifacts plus report.json.
//
//   primeglue script.pg --out build/out [--strict-embed] [--chain-cap N]
//             [--oracle on|off] [--assert-flag T.uncountable=false] [--print]
//
// Exit status: 0 all checks pass, 1 some check failed, 2 bad input.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "primeglue/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gluing prime ideals in tower rings: shapes, certificates and checks"};
    std::string script_path;
    std::string out_dir = "primeglue-out";
    std::string oracle = "on";
    std::vector<std::string> assertions;
    bool strict_embed = false;
    bool print_only = false;
    std::size_t chain_cap = primeglue::default_chain_cap;

    app.add_option("script", script_path, "script file")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--strict-embed", strict_embed, "require order-reflecting embeddings");
    app.add_option("--chain-cap", chain_cap, "maximum saturated chains enumerated per pair")
        ->check(CLI::PositiveNumber);
    app.add_option("--oracle", oracle, "run brute-force oracles")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--assert-flag", assertions, "flag=value or ring.flag=value");
    app.add_flag("--print", print_only, "print the script in canonical form and exit");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(script_path);
    std::stringstream buf;
    buf << in.rdbuf();

    primeglue::script::Script script;
    primeglue::RunOptions opt;
    try {
        script = primeglue::script::parse(buf.str());
        for (const auto& a : assertions) opt.flags.push_back(primeglue::parse_flag_assertion(a));
    } catch (const primeglue::Error& e) {
        std::cerr << script_path << ":" << e.what() << "\n";
        return 2;
    }
    if (print_only) {
        std::cout << primeglue::script::print(script);
        return 0;
    }

    opt.strict_embed = strict_embed;
    opt.chain_cap = chain_cap;
    opt.oracle = oracle == "on";
    opt.base_dir = std::filesystem::path(script_path).parent_path();
    if (opt.base_dir.empty()) opt.base_dir = ".";

    auto result = primeglue::run(script, opt);
    try {
        primeglue::write_artifacts(result, out_dir);
    } catch (const primeglue::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    for (const auto& step : result.report["steps"]) {
        std::cout << (step["ok"].get<bool>() ? "ok   " : "FAIL ") << "line " << step["line"] << ": "
                  << step["statement"].get<std::string>();
        if (step.contains("error")) std::cout << " (" << step["error"].get<std::string>() << ")";
        std::cout << "\n";
    }
    return result.ok ? 0 : 1;
}
