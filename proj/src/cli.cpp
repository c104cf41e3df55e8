#include "nbvp/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nbvp {

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Drops a trailing comment, ignoring '#' inside double quotes.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') {
            quoted = !quoted;
        } else if (s[i] == '#' && !quoted) {
            return s.substr(0, i);
        }
    }
    return s;
}

template <class T>
T parse_number(std::string_view text, const std::string& key, std::size_t line) {
    const std::string_view t = trim(text);
    T value{};
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
        throw ConfigError(key + ": cannot parse '" + std::string(t) + "' as a number", line);
    }
    return value;
}

std::vector<double> parse_list(std::string_view text, const std::string& key, std::size_t line) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_number<double>(piece, key, line));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string unquote(std::string_view v, const std::string& key, std::size_t line) {
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
        throw ConfigError(key + " must be a double-quoted string", line);
    }
    return std::string(v.substr(1, v.size() - 2));
}

QuadMode parse_quad_mode(std::string_view v, std::size_t line) {
    if (v == "simpson") {
        return QuadMode::simpson;
    }
    if (v == "riemann") {
        return QuadMode::riemann;
    }
    throw ConfigError("rigor.quad_mode must be simpson or riemann", line);
}

// Converts raw amplitudes to h_cos coordinates, zero-padding to m.
std::vector<double> amplitudes_to_b(const std::vector<double>& amps, int m) {
    if (static_cast<int>(amps.size()) > m) {
        throw ConfigError("newton.b0 has " + std::to_string(amps.size()) + " entries but m = " + std::to_string(m));
    }
    std::vector<double> padded(amps);
    padded.resize(static_cast<std::size_t>(m), 0.0);
    const CosCoeffs b = CosCoeffs::from_amplitudes(padded);
    return {b.b().begin(), b.b().end()};
}

void validate_or_throw(const ProblemSpec& p) {
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

struct RawProblem {
    ProblemSpec spec;
    std::vector<double> b0_amplitudes;
};

RawProblem parse_raw(std::string_view text) {
    RawProblem raw;
    ProblemSpec& p = raw.spec;
    std::map<std::string, std::size_t> seen;
    bool have_f = false;
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        const std::string_view raw_line =
            text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string_view line = trim(strip_comment(raw_line));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header", line_no);
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "problem" && section != "newton" && section != "rigor") {
                throw ConfigError("unknown section [" + section + "]", line_no);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected key = value", line_no);
        }
        std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.find('.') == std::string::npos) {
            if (section.empty()) {
                throw ConfigError("key '" + key + "' outside of any section", line_no);
            }
            key = section + "." + key;
        }
        if (!seen.emplace(key, line_no).second) {
            throw ConfigError("duplicate key " + key, line_no);
        }
        if (key == "problem.f") {
            const std::string src = unquote(value, key, line_no);
            p.f = parse(src);
            have_f = true;
        } else if (key == "problem.m") {
            p.m = parse_number<int>(value, key, line_no);
        } else if (key == "problem.R") {
            p.R = parse_number<double>(value, key, line_no);
        } else if (key == "newton.b0") {
            raw.b0_amplitudes = parse_list(value, key, line_no);
        } else if (key == "newton.tol") {
            p.newton.tol = parse_number<double>(value, key, line_no);
        } else if (key == "newton.max_iter") {
            p.newton.max_iter = parse_number<int>(value, key, line_no);
        } else if (key == "newton.panels") {
            p.quad.solver_panels = parse_number<int>(value, key, line_no);
        } else if (key == "rigor.panels") {
            p.quad.rigor_panels = parse_number<int>(value, key, line_no);
        } else if (key == "rigor.subdiv") {
            p.quad.subdiv = parse_number<int>(value, key, line_no);
        } else if (key == "rigor.quad_mode") {
            p.quad.mode = parse_quad_mode(value, line_no);
        } else if (key == "rigor.remainder_cells") {
            p.quad.remainder_cells = parse_number<int>(value, key, line_no);
        } else {
            throw ConfigError("unknown key " + key, line_no);
        }
    }
    if (!have_f) {
        throw ConfigError("missing required key problem.f");
    }
    return raw;
}

void finalise(RawProblem& raw) {
    if (raw.spec.m < 1) {
        throw ConfigError("problem.m must be >= 1");
    }
    raw.spec.newton.b0.clear();
    if (!raw.b0_amplitudes.empty()) {
        raw.spec.newton.b0 = amplitudes_to_b(raw.b0_amplitudes, raw.spec.m);
    }
    validate_or_throw(raw.spec);
}

std::string up(double v) { return format_directed(v, false); }
std::string down(double v) { return format_directed(v, true); }

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string mode_name(RunMode m) {
    switch (m) {
    case RunMode::solve:
        return "solve";
    case RunMode::certify:
        return "certify";
    case RunMode::given:
        return "given";
    }
    return "?";
}

std::string quad_name(QuadMode m) { return m == QuadMode::simpson ? "simpson" : "riemann"; }

std::string reason_line(const Certificate& c) {
    if (c.status == CertStatus::verified) {
        return "none";
    }
    return c.stage + ": " + to_string(c.reason);
}

} // namespace

ProblemSpec parse_problem(std::string_view text) { return parse_problem_file(text).spec; }

ProblemFile parse_problem_file(std::string_view text) {
    RawProblem raw = parse_raw(text);
    finalise(raw);
    return {raw.spec, raw.b0_amplitudes};
}

ProblemSpec load_problem(const std::string& path) { return load_problem_file(path).spec; }

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open problem file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("error reading problem file '" + path + "'");
    }
    return parse_problem_file(buf.str());
}

void apply_overrides(ProblemSpec& p, const RunConfig& c, const std::vector<double>& file_amplitudes) {
    const std::vector<double>& amps = c.b0 ? *c.b0 : file_amplitudes;
    if (c.m) {
        p.m = *c.m;
    }
    if (c.solver_panels) {
        p.quad.solver_panels = *c.solver_panels;
    }
    if (c.rigor_panels) {
        p.quad.rigor_panels = *c.rigor_panels;
    }
    if (c.subdiv) {
        p.quad.subdiv = *c.subdiv;
    }
    if (c.max_iter) {
        p.newton.max_iter = *c.max_iter;
    }
    if (p.m < 1) {
        throw ConfigError("m must be >= 1");
    }
    p.newton.b0 = amps.empty() ? std::vector<double>{} : amplitudes_to_b(amps, p.m);
    validate_or_throw(p);
}

void write_text(std::ostream& os, const Report& r) {
    const ProblemSpec& p = *r.problem;
    os << "problem: f = " << to_string(p.f) << ", m = " << p.m << ", R = " << exact(p.R) << "\n";
    os << "mode: " << mode_name(r.mode) << "\n";
    if (r.solver) {
        os << "newton: " << r.solver->iterations << " iterations, residual "
           << exact(r.solver->residual_history.back()) << "\n";
    }
    os << "candidate:\n";
    for (int k = 1; k <= r.candidate.m(); ++k) {
        os << "  k = " << k << "  b = " << exact(r.candidate[k]) << "  amplitude = " << exact(r.candidate.amplitude(k))
           << "\n";
    }
    if (!r.result) {
        return;
    }
    const RigorBounds& b = r.result->bounds;
    const Certificate& c = r.result->certificate;
    os << "bounds:\n";
    os << "  r    <= " << up(b.r) << "\n";
    os << "  eta  <= " << up(b.eta) << "\n";
    os << "  nu0  >= " << down(b.nu0) << "\n";
    os << "  tail >= " << down(b.tail) << "\n";
    os << "  L    >= " << down(b.L) << "\n";
    os << "  N    <= " << up(b.N) << "\n";
    os << "  nu   >= " << down(b.nu) << "\n";
    os << "  K    <= " << up(b.K) << "\n";
    os << "certificate:\n";
    os << "  status: " << to_string(c.status) << "\n";
    if (c.status == CertStatus::verified) {
        os << "  t*  in " << to_string(c.t_star_enclosure) << "\n";
        os << "  t** >= " << down(c.t_dstar) << (c.t_dstar_infinite ? " (infinite, capped at R)" : "") << "\n";
        os << "  radius_h2 <= " << up(c.radius_h2) << "\n";
        os << "  radius_c1 <= " << up(c.radius_c1) << "\n";
        os << "  uniqueness_radius >= " << down(c.uniqueness_radius) << "\n";
    } else {
        os << "  reason: " << reason_line(c) << "\n";
        os << "  detail: " << c.detail << "\n";
    }
    if (b.quad_fallback()) {
        os << "note: Simpson remainder too wide, Riemann enclosure used (eta: " << (b.eta_fallback ? "yes" : "no")
           << ", jacobian entries: " << b.jacobian_fallbacks << ")\n";
    }
}

void write_kv(std::ostream& os, const Report& r) {
    const ProblemSpec& p = *r.problem;
    auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
    kv("mode", mode_name(r.mode));
    kv("problem.f", "\"" + to_string(p.f) + "\"");
    kv("problem.m", std::to_string(p.m));
    kv("problem.R", exact(p.R));
    kv("meta.solver_panels", std::to_string(p.quad.solver_panels));
    kv("meta.rigor_panels", std::to_string(p.quad.rigor_panels));
    kv("meta.subdiv", std::to_string(p.quad.subdiv));
    kv("meta.remainder_cells", std::to_string(p.quad.remainder_cells));
    kv("meta.quad_mode", quad_name(p.quad.mode));
    if (r.solver) {
        kv("solver.iterations", std::to_string(r.solver->iterations));
        kv("solver.residual", exact(r.solver->residual_history.back()));
    }
    for (int k = 1; k <= r.candidate.m(); ++k) {
        kv("candidate.b." + std::to_string(k), exact(r.candidate[k]));
    }
    for (int k = 1; k <= r.candidate.m(); ++k) {
        kv("candidate.amp." + std::to_string(k), exact(r.candidate.amplitude(k)));
    }
    if (!r.result) {
        return;
    }
    const RigorBounds& b = r.result->bounds;
    const Certificate& c = r.result->certificate;
    kv("bounds.r", up(b.r));
    kv("bounds.eta", up(b.eta));
    kv("bounds.N", up(b.N));
    kv("bounds.K", up(b.K));
    kv("bounds.nu0", down(b.nu0));
    kv("bounds.tail", down(b.tail));
    kv("bounds.L", down(b.L));
    kv("bounds.nu", down(b.nu));
    kv("certificate.status", to_string(c.status));
    kv("certificate.reason", reason_line(c));
    kv("certificate.t_star", up(c.t_star));
    kv("certificate.t_star_enclosure", to_string(c.t_star_enclosure));
    kv("certificate.t_dstar", down(c.t_dstar));
    kv("certificate.t_dstar_infinite", c.t_dstar_infinite ? "true" : "false");
    kv("certificate.radius_h2", up(c.radius_h2));
    kv("certificate.radius_c1", up(c.radius_c1));
    kv("certificate.uniqueness_radius", down(c.uniqueness_radius));
    kv("meta.quad_fallback", b.quad_fallback() ? "true" : "false");
    kv("meta.eta_fallback", b.eta_fallback ? "true" : "false");
    kv("meta.jacobian_fallbacks", std::to_string(b.jacobian_fallbacks));
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    ProblemSpec p;
    try {
        const ProblemFile file = load_problem_file(config.path);
        p = file.spec;
        apply_overrides(p, config, file.b0_amplitudes);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const ParseError& e) {
        err << "expression error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    }

    Report report;
    report.problem = &p;
    report.mode = config.mode;
    if (config.mode == RunMode::given) {
        report.candidate = p.newton.b0.empty() ? CosCoeffs::zeros(p.m) : CosCoeffs(p.newton.b0);
    } else {
        try {
            report.solver = newton_solve(p);
            report.candidate = report.solver->b;
        } catch (const std::exception& e) {
            err << "solver error: " << e.what() << "\n";
            return exit_solver;
        }
    }

    const auto emit = [&] {
        if (config.format == OutputFormat::kv) {
            write_kv(out, report);
        } else {
            write_text(out, report);
        }
    };
    if (config.mode == RunMode::solve) {
        emit();
        return exit_ok;
    }
    try {
        report.result = certify(p, report.candidate);
    } catch (const RigorStageError& e) {
        emit();
        err << "rigor stage error: " << e.what() << "\n";
        return exit_rigor_stage;
    } catch (const std::exception& e) {
        emit();
        err << "internal error: " << e.what() << "\n";
        return exit_rigor_stage;
    }
    emit();
    const Certificate& c = report.result->certificate;
    if (c.status != CertStatus::verified) {
        err << "certification failed: " << reason_line(c) << "\n";
        return exit_not_verified;
    }
    return exit_ok;
}

} // namespace nbvp
