#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nbvp/galerkin.hpp"
#include "nbvp/rigor.hpp"

namespace nbvp {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid problem file / override. `line()` is 0 when the
/// problem is not tied to a line (missing key, failed validation).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& message, std::size_t line = 0);
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Problem file: `key = value` lines grouped under [problem], [newton] and
/// [rigor]; `#` starts a comment. problem.f is a quoted expression,
/// newton.b0 a comma list of raw cosine amplitudes (zero-padded to m).
ProblemSpec parse_problem(std::string_view text);
ProblemSpec load_problem(const std::string& path);

/// The parsed spec together with newton.b0 as written (raw amplitudes).
struct ProblemFile {
    ProblemSpec spec;
    std::vector<double> b0_amplitudes;
};
ProblemFile parse_problem_file(std::string_view text);
ProblemFile load_problem_file(const std::string& path);

enum class RunMode { solve, certify, given };
enum class OutputFormat { text, kv };

struct RunConfig {
    std::string path;
    std::optional<int> m;
    std::optional<int> solver_panels;
    std::optional<int> rigor_panels;
    std::optional<int> subdiv;
    std::optional<int> max_iter;
    /// Raw cosine amplitudes; replaces newton.b0.
    std::optional<std::vector<double>> b0;
    RunMode mode = RunMode::certify;
    OutputFormat format = OutputFormat::text;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_solver = 3;
inline constexpr int exit_not_verified = 4;
inline constexpr int exit_rigor_stage = 5;

/// Applies the overrides of `config` and re-validates; throws ConfigError.
/// b0 is rebuilt from `file_amplitudes` (or config.b0) for the final m.
void apply_overrides(ProblemSpec& p, const RunConfig& config, const std::vector<double>& file_amplitudes = {});

/// Loads, solves and/or certifies, writing the report to `out` and
/// diagnostics to `err`. Returns one of the exit_* codes.
///
/// RunMode::given certifies the initial guess b0 directly, without Newton.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Report content independent of the output format.
struct Report {
    const ProblemSpec* problem = nullptr;
    RunMode mode = RunMode::certify;
    CosCoeffs candidate;
    std::optional<NewtonResult> solver;
    std::optional<CertifyResult> result;
};

void write_text(std::ostream& os, const Report& r);
void write_kv(std::ostream& os, const Report& r);

} // namespace nbvp
