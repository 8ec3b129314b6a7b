// Command-line front end: parses one declaration file, dispatches a
// subcommand to the kernel, and prints a human-readable or JSON report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "kpa/commands.hpp"

namespace {

struct GlobalFlags {
    bool json = false;
    std::string input;
    std::string out;
};

int emit(const kpa::CommandResult& result, const GlobalFlags& flags) {
    if (flags.json) {
        std::cout << result.report.to_json().dump(2) << "\n";
    } else {
        std::cout << result.report.to_text();
    }
    if (result.output_document && !flags.out.empty()) {
        std::ofstream out(flags.out);
        if (!out) {
            std::cerr << "error: cannot write " << flags.out << "\n";
            return 2;
        }
        out << *result.output_document;
    }
    return result.exit_code;
}

int emit_input_error(const std::string& command, const std::string& message, bool json) {
    if (json) {
        kpa::Report r;
        r.command = command;
        r.error = message;
        std::cout << r.to_json().dump(2) << "\n";
    } else {
        std::cerr << "error: " << message << "\n";
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for Kahler-Poisson algebras"};
    app.require_subcommand(1);

    GlobalFlags flags;
    kpa::Invocation inv;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", flags.json, "emit the report as a single JSON object");
        cmd->add_flag("--assume-poisson", inv.assume_poisson,
                      "skip the Jacobi check (recorded in the report)");
        cmd->add_option("input", flags.input, "input declaration file")->required();
    };
    auto opt = [&](CLI::App* cmd, const std::string& name, const char* help,
                   bool required = true) {
        auto* o = cmd->add_option_function<std::string>(
            "--" + name, [&inv, name](const std::string& v) { inv.options[name] = v; }, help);
        if (required) o->required();
        return o;
    };

    auto* check_poisson = app.add_subcommand("check-poisson", "antisymmetry and Jacobi checks");
    add_common(check_poisson);
    opt(check_poisson, "algebra", "algebra name");

    auto* solve = app.add_subcommand("solve-eta", "solve eta*PgPgP = -P for eta");
    add_common(solve);
    opt(solve, "kp", "kahler name");

    auto* verify = app.add_subcommand("verify", "verify the declared eta");
    add_common(verify);
    opt(verify, "kp", "kahler name");

    auto* tensors = app.add_subcommand("tensors", "derived D and P tensors");
    add_common(tensors);
    opt(tensors, "kp", "kahler name");

    auto* check_hom = app.add_subcommand("check-hom", "morphism conditions for a hom");
    add_common(check_hom);
    opt(check_hom, "hom", "hom name");

    auto* check_iso = app.add_subcommand("check-iso", "isomorphism criterion for a hom");
    add_common(check_iso);
    opt(check_iso, "hom", "hom name");

    auto* transport = app.add_subcommand("check-eta-transport", "eta transport along a hom");
    add_common(transport);
    opt(transport, "hom", "hom name");

    auto* dsum = app.add_subcommand("dsum", "direct sum of two verified triples");
    add_common(dsum);
    opt(dsum, "left", "left kahler name");
    opt(dsum, "right", "right kahler name");
    opt(dsum, "name", "name for the constructed triple", false);
    dsum->add_option("--out", flags.out, "write the constructed declarations to a file");

    auto* tprod = app.add_subcommand("tprod", "tensor product of two verified triples");
    add_common(tprod);
    opt(tprod, "left", "left kahler name");
    opt(tprod, "right", "right kahler name");
    opt(tprod, "name", "name for the constructed triple", false);
    tprod->add_option("--out", flags.out, "write the constructed declarations to a file");

    auto* check_sub = app.add_subcommand("check-sub", "subalgebra check via an index map");
    add_common(check_sub);
    opt(check_sub, "sub", "sub kahler name");
    opt(check_sub, "super", "ambient kahler name");
    opt(check_sub, "map", "comma-separated 1-based indices, one per sub generator");

    auto* image_sub = app.add_subcommand("image-sub", "image triple of a hom with preimages");
    add_common(image_sub);
    opt(image_sub, "hom", "hom name");
    opt(image_sub, "name", "name for the constructed triple", false);
    image_sub->add_option("--out", flags.out, "write the constructed declarations to a file");

    auto* corpus = app.add_subcommand("corpus", "run the bundled worked-example suite");
    corpus->add_flag("--json", flags.json, "emit the report as a single JSON object");
    std::string corpus_dir = "corpus";
    corpus->add_option("--dir", corpus_dir, "directory of .kpa files (default: corpus)");

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = app.get_subcommands().front();
    inv.command = active->get_name();

    if (inv.command == "corpus") {
        kpa::CommandResult result = kpa::run_corpus(corpus_dir);
        return emit(result, flags);
    }

    std::ifstream in(flags.input);
    if (!in) return emit_input_error(inv.command, "cannot open " + flags.input, flags.json);
    std::stringstream buffer;
    buffer << in.rdbuf();

    kpa::Document doc;
    try {
        doc = kpa::parse_input(buffer.str());
    } catch (const kpa::ParseError& e) {
        return emit_input_error(inv.command, flags.input + ": " + e.what(), flags.json);
    }

    kpa::CommandResult result = kpa::run_command(doc, inv);
    return emit(result, flags);
}
