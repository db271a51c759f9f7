#include <iostream>

#include "CLI11.hpp"
#include "hsd/cli.hpp"
#include "hsd/parallel.hpp"

namespace hsd::cli {

int main_entry(int argc, char** argv) {
    CLI::App app{"Spectral Wiener-Hopf solver for half-space difference equations"};
    std::string input, outdir = "out", command = "verify";
    int threads = 1;
    std::vector<std::string> overrides;
    app.add_option("--input", input, "Problem file (JSON)")->required();
    app.add_option("--outdir", outdir, "Output directory")->capture_default_str();
    app.add_option("--command", command, "analyze | factorize | solve | bvp | verify")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tol-override", overrides, "Tolerance override key=value (repeatable)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    set_thread_count(threads);
    RunOutcome out;
    try {
        const Command cmd = parse_command(command);
        ProblemSpec spec = load_problem(input);
        for (const std::string& o : overrides) apply_override(spec.tol, o);
        out = run(spec, cmd, outdir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            return report_failure(command, e, outdir).exit_code;
        } catch (const Error&) {
            return exit_code_for(e.kind());
        }
    }
    if (out.report.contains("error"))
        std::cerr << "error: " << out.report["error"]["message"].get<std::string>() << "\n";
    for (const auto& w : out.report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    std::cout << command << ": " << out.report["status"].get<std::string>() << " (exit " << out.exit_code << ")\n";
    return out.exit_code;
}

}  // namespace hsd::cli
