#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hsd/bvp.hpp"
#include "hsd/error.hpp"
#include "hsd/grid.hpp"
#include "hsd/symbol.hpp"
#include "json.hpp"

namespace hsd::cli {

using json = nlohmann::json;

struct Tolerances {
    double residual = 1e-4;
    double support = 1e-3;
    double reconstruction = 1e-6;
    double one_sidedness = 1e-6;
    double trace = 1e-3;
    double determinant = kDeterminantThreshold;
    double rounding = 0.1;
    double ellipticity = 1e-6;
    double boundary_layer = 1.0;
    double interior_fraction = 0.8;
    double residual_taper = 0.25;

    json to_json() const;
    /// Sets one field by name; throws Input on an unknown key or a non-finite value.
    void set(const std::string& key, double value);
};

enum class RhsKind { GaussianBump, ExpDecay, Samples };

struct RhsSpec {
    RhsKind kind = RhsKind::GaussianBump;
    double center = 3.0;   // gaussian_bump: x_m centre
    double width = 0.5;    // gaussian_bump: x_m width
    double offset = 0.0;   // support starts at x_m = offset
    double rate = 1.0;     // exp_decay: lambda
    double prime_width = 1.0;
    cplx amplitude = 1.0;
    Extension extension = Extension::Zero;
    std::filesystem::path samples;  // resolved path for kind == Samples
};

/// A xi'-function given as a constant or amp * exp(-|xi'|^2 / (2 w^2)).
struct BoundaryData {
    cplx amplitude = 1.0;
    std::optional<double> gaussian_width;

    std::vector<cplx> sample(const SpectralGrid& g) const;
};

/// Condition symbol gain * Lambda_+^plus * Lambda_-^minus, of order plus + minus.
struct ConditionSymbol {
    cplx gain = 1.0;
    int plus_power = 0;
    int minus_power = 0;
};

struct BcSpec {
    enum class Kind { Traces, PseudoDiff } kind = Kind::Traces;
    std::vector<double> p;
    std::vector<cplx> mixing;
    std::vector<ConditionSymbol> symbols;
    std::vector<BoundaryData> data;
};

struct ProblemSpec {
    SpectralGrid grid{1, 4, 1.0};
    SymbolSpec symbol{DifferenceOperator::identity(1)};
    double s = 0.0;
    std::optional<RhsSpec> rhs;
    std::optional<BcSpec> bc;
    Tolerances tol;
    std::string digest;  // FNV-1a-64 of the input bytes
};

enum class Command { Analyze, Factorize, Solve, Bvp, Verify };

Command parse_command(const std::string& name);
const char* to_string(Command c) noexcept;

std::uint64_t fnv1a64(const std::string& bytes) noexcept;

/// Parses and validates a problem; errors name the offending field path.
ProblemSpec parse_problem(const json& j, const std::filesystem::path& base_dir, const std::string& digest = {});
ProblemSpec load_problem(const std::filesystem::path& path);

/// Applies "key=value".
void apply_override(Tolerances& tol, const std::string& assignment);

/// Samples the right-hand side on the problem grid (x-side, plus-supported).
SampledField make_rhs(const ProblemSpec& spec);

struct RunOutcome {
    int exit_code = 0;
    json report;
    json timings;
};

/// Runs a command, writes report.json, timings.json and the CSV outputs into outdir.
RunOutcome run(const ProblemSpec& spec, Command command, const std::filesystem::path& outdir);

/// Writes a report for a run that failed before the pipeline started (bad command or problem file).
RunOutcome report_failure(const std::string& command, const Error& error, const std::filesystem::path& outdir);

/// Exit code for a library error kind.
int exit_code_for(ErrorKind kind) noexcept;

/// Full command-line entry point.
int main_entry(int argc, char** argv);

}  // namespace hsd::cli
