#include "sparseproj/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparseproj/bench.hpp"
#include "sparseproj/project.hpp"
#include "sparseproj/selfcheck.hpp"
#include "sparseproj/vector_io.hpp"

namespace sparseproj::cli {

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Domain: return kRejectZero;
        case ErrorCode::Dimension: return kRejectDimension;
        case ErrorCode::Range:
        case ErrorCode::InvalidTarget:
        case ErrorCode::Size: return kInvalidTarget;
        case ErrorCode::NegativeEntry: return kRejectNegative;
        case ErrorCode::DegenerateInput:
        case ErrorCode::NonuniqueProjection: return kNonunique;
        case ErrorCode::SolverFailure: return kSolverFailure;
        case ErrorCode::DegenerateGradient: return kDegenerateGradient;
        case ErrorCode::MalformedInput: return kMalformedInput;
        case ErrorCode::Io: return kIoError;
        case ErrorCode::NumericDegeneracy:
        case ErrorCode::Inconsistency: return kInternal;
    }
    return kInternal;
}

std::string factors_to_json(const GradientFactors& f, double alpha, double beta) {
    nlohmann::json j;
    j["format"] = "sparseproj-factors";
    j["version"] = 1;
    j["n"] = f.n;
    j["lambda1"] = f.lambda1;
    j["lambda2"] = f.lambda2;
    j["a"] = f.a;
    j["b"] = f.b;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["support"] = f.support;
    j["p_tilde"] = f.p_tilde;
    j["boundary_unreliable"] = f.boundary_unreliable;
    return j.dump(2) + "\n";
}

GradientFactors factors_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        if (j.at("format").get<std::string>() != "sparseproj-factors") {
            throw Error(ErrorCode::MalformedInput, "not a factor artifact");
        }
        GradientFactors f;
        f.n = j.at("n").get<std::size_t>();
        f.lambda1 = j.at("lambda1").get<double>();
        f.lambda2 = j.at("lambda2").get<double>();
        f.a = j.at("a").get<double>();
        f.b = j.at("b").get<double>();
        f.support = j.at("support").get<std::vector<std::size_t>>();
        f.p_tilde = j.at("p_tilde").get<std::vector<double>>();
        f.boundary_unreliable = j.value("boundary_unreliable", false);
        if (f.support.size() != f.p_tilde.size() ||
            std::any_of(f.support.begin(), f.support.end(), [&](std::size_t i) { return i >= f.n; })) {
            throw Error(ErrorCode::MalformedInput, "factor artifact support is inconsistent");
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("factor artifact: ") + e.what());
    }
}

namespace {

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

std::vector<double> load_vector(const std::string& path, std::istream& stdin_stream) {
    if (path == "-") return io::read_vector(stdin_stream);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
    return io::read_vector(f);
}

std::string load_text(const std::string& path, std::istream& stdin_stream) {
    std::ostringstream ss;
    if (path == "-") {
        ss << stdin_stream.rdbuf();
    } else {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
        ss << f.rdbuf();
    }
    return ss.str();
}

template <class Writer>
void with_output(const std::string& path, std::ostream& stdout_stream, Writer&& write) {
    if (path == "-") {
        write(stdout_stream);
        stdout_stream.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    write(f);
    if (!f) throw Error(ErrorCode::Io, "failed writing " + path);
}

io::VectorFormat format_from(const std::string& name) {
    return name == "binary" ? io::VectorFormat::Binary : io::VectorFormat::Text;
}

// Input screening for the projection, in the order the exit codes are documented.
int screen_input(const std::vector<double>& x, std::ostream& err) {
    if (x.empty()) {
        err << "error: empty input vector\n";
        return kRejectZero;
    }
    if (std::any_of(x.begin(), x.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
        err << "error: input entries must be finite and non-negative\n";
        return kRejectNegative;
    }
    if (x.size() < 2) {
        err << "error: input needs at least two entries\n";
        return kRejectDimension;
    }
    if (std::none_of(x.begin(), x.end(), [](double v) { return v > 0.0; })) {
        err << "error: input is the zero vector\n";
        return kRejectZero;
    }
    return kOk;
}

std::size_t parse_dim(const std::string& token) {
    std::size_t pos = 0;
    const auto caret = token.find('^');
    if (caret != std::string::npos) {
        const unsigned long base = std::stoul(token.substr(0, caret), &pos);
        if (pos != caret) throw std::invalid_argument(token);
        const unsigned long exp = std::stoul(token.substr(caret + 1), &pos);
        if (pos != token.size() - caret - 1 || exp > 40) throw std::invalid_argument(token);
        std::size_t v = 1;
        for (unsigned long i = 0; i < exp; ++i) v *= base;
        return v;
    }
    const unsigned long v = std::stoul(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
}

double parse_real(const std::string& token) {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        if (!cur.empty()) parts.push_back(cur);
    }
    return parts;
}

// "0.2,0.5" or an inclusive range "start:step:stop".
std::vector<double> parse_sigma_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 3) {
            const double start = parse_real(parts[0]);
            const double step = parse_real(parts[1]);
            const double stop = parse_real(parts[2]);
            if (!(step > 0.0)) throw std::invalid_argument(item);
            const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
            for (long k = 0; k <= count; ++k) {
                // Snap to 12 decimals so 0.2:0.025:0.975 yields 0.3, not 0.30000000000000004.
                out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
            }
        } else if (parts.size() == 1) {
            out.push_back(parse_real(parts[0]));
        } else {
            throw std::invalid_argument(item);
        }
    }
    return out;
}

void print_diagnostics(std::ostream& err, const ProjectionResult& r, const SparsenessTarget& t) {
    err << "alpha=" << r.alpha << " beta=" << r.beta << " d=" << r.support.size()
        << " evals=" << r.evals << " sigma=" << sigma(r.p) << " sigma_star=" << t.sigma_star()
        << " branch=" << (r.branch == Branch::Increase ? "increase" : "decrease") << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Euclidean projections onto sets of prescribed Hoyer sparseness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sparseproj 1.0.0");

    const std::vector<std::string> solver_names{"bisection", "newton", "newtonsqr", "halley"};
    const std::vector<std::string> format_names{"text", "binary"};

    // project
    std::string in_path = "-";
    std::string out_path = "-";
    std::string format = "text";
    std::string solver_name = "newtonsqr";
    std::string factors_path;
    std::string dim_norms = "auto";
    double sigma_star = 0.0;
    double l1 = 0.0;
    double l2 = 1.0;

    CLI::App* project_cmd = app.add_subcommand("project", "Project a non-negative vector onto D");
    project_cmd->add_option("--in", in_path, "Input vector path, '-' for stdin")->capture_default_str();
    project_cmd->add_option("--out", out_path, "Output path, '-' for stdout")->capture_default_str();
    project_cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember(format_names))
        ->capture_default_str();
    auto* sigma_opt = project_cmd->add_option("--sigma", sigma_star, "Target sparseness in (0, 1)");
    auto* l1_opt = project_cmd->add_option("--l1", l1, "Target L1 norm");
    project_cmd->add_option("--l2", l2, "Target L2 norm (default 1)");
    project_cmd->add_option("--dim-norms", dim_norms, "Dimension used to derive norms from --sigma")
        ->check(CLI::IsMember({"auto"}))
        ->capture_default_str();
    sigma_opt->excludes(l1_opt);
    project_cmd->add_option("--solver", solver_name, "Root-finding solver")
        ->check(CLI::IsMember(solver_names))
        ->capture_default_str();
    project_cmd->add_option("--emit-factors", factors_path, "Write gradient factors (JSON) here");

    // sigma
    std::string sigma_in = "-";
    CLI::App* sigma_cmd = app.add_subcommand("sigma", "Print the Hoyer sparseness of a vector");
    sigma_cmd->add_option("--in", sigma_in, "Input vector path, '-' for stdin")->capture_default_str();

    // gradvec
    std::string grad_factors;
    std::string grad_in = "-";
    std::string grad_out = "-";
    std::string grad_format = "text";
    CLI::App* grad_cmd = app.add_subcommand("gradvec", "Multiply the projection's gradient with a vector");
    grad_cmd->add_option("--factors", grad_factors, "Factor artifact from project --emit-factors")
        ->required();
    grad_cmd->add_option("--in", grad_in, "Vector y, '-' for stdin")->capture_default_str();
    grad_cmd->add_option("--out", grad_out, "Output path, '-' for stdout")->capture_default_str();
    grad_cmd->add_option("--format", grad_format, "Output format")
        ->check(CLI::IsMember(format_names))
        ->capture_default_str();

    // bench
    std::string n_list = "1024";
    std::string sigma_list = "0.2:0.025:0.975";
    std::string solver_list = "bisection,newton,newtonsqr,halley";
    std::string csv_path = "-";
    int trials = 100;
    std::uint64_t seed = 0;
    bool allow_huge = false;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Solver comparison benchmark (CSV)");
    bench_cmd->add_option("--n-list", n_list, "Comma-separated dimensions, e.g. 1024,2^20")
        ->capture_default_str();
    bench_cmd->add_option("--sigma-list", sigma_list, "Comma-separated values or start:step:stop")
        ->capture_default_str();
    bench_cmd->add_option("--solvers", solver_list, "Comma-separated solver names")->capture_default_str();
    bench_cmd->add_option("--trials", trials, "Trials per cell")->capture_default_str();
    bench_cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
    bench_cmd->add_option("--csv", csv_path, "CSV output path, '-' for stdout")->capture_default_str();
    bench_cmd->add_flag("--allow-huge", allow_huge, "Permit dimensions up to 2^26");

    // selfcheck
    selfcheck::Options check_opts;
    std::string fault = "none";
    CLI::App* check_cmd = app.add_subcommand("selfcheck", "Run the property suites at desk scale");
    check_cmd->add_option("--seed", check_opts.seed, "Seed")->capture_default_str();
    check_cmd->add_option("--vectors", check_opts.vectors_per_suite, "Vectors per suite")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    check_cmd->add_option("--inject-fault", fault, "Fault injection for harness testing")
        ->check(CLI::IsMember({"none", "flip-sign"}))
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (project_cmd->parsed()) {
            const std::vector<double> x = load_vector(in_path, in);
            if (const int rc = screen_input(x, err); rc != kOk) return rc;
            if (sigma_opt->count() == 0 && l1_opt->count() == 0) {
                err << "error: give either --sigma or --l1/--l2\n";
                return kUsage;
            }
            const SparsenessTarget target = sigma_opt->count() ? derive_norms(sigma_star, x.size(), l2)
                                                               : SparsenessTarget::make(x.size(), l1, l2);
            const SolverKind solver = *parse_solver(solver_name);
            const ProjectionResult r = project(x, target, solver);
            with_output(out_path, out,
                        [&](std::ostream& os) { io::write_vector(os, r.p, format_from(format)); });
            print_diagnostics(err, r, target);
            if (!factors_path.empty()) {
                const GradientFactors f = make_gradient_factors(r, target);
                if (f.boundary_unreliable) {
                    err << "warning: an entry lies within the non-differentiable band around alpha\n";
                }
                const std::string doc = factors_to_json(f, r.alpha, r.beta);
                with_output(factors_path, out, [&](std::ostream& os) { os << doc; });
            }
            return kOk;
        }

        if (sigma_cmd->parsed()) {
            const std::vector<double> x = load_vector(sigma_in, in);
            if (x.empty()) {
                err << "error: empty input vector\n";
                return kRejectZero;
            }
            out.precision(17);
            out << sigma(x) << '\n';
            return kOk;
        }

        if (grad_cmd->parsed()) {
            const GradientFactors f = factors_from_json(load_text(grad_factors, in));
            const std::vector<double> y = load_vector(grad_in, in);
            if (y.size() != f.n) {
                err << "error: vector has " << y.size() << " entries, factors expect " << f.n << '\n';
                return kRejectDimension;
            }
            const std::vector<double> z = grad_vec(f, y);
            with_output(grad_out, out,
                        [&](std::ostream& os) { io::write_vector(os, z, format_from(grad_format)); });
            return kOk;
        }

        if (bench_cmd->parsed()) {
            bench::BenchConfig config;
            try {
                config.n_list.clear();
                for (const std::string& t : split(n_list, ',')) config.n_list.push_back(parse_dim(t));
                config.sigma_list = parse_sigma_list(sigma_list);
            } catch (const std::logic_error&) {
                err << "error: cannot parse --n-list or --sigma-list\n";
                return kUsage;
            }
            config.solvers.clear();
            for (const std::string& t : split(solver_list, ',')) {
                const auto kind = parse_solver(t);
                if (!kind) {
                    err << "error: unknown solver '" << t << "'\n";
                    return kUsage;
                }
                config.solvers.push_back(*kind);
            }
            config.trials = trials;
            config.seed = seed;
            config.allow_huge = allow_huge;
            bench::validate(config);
            bench::RunSummary summary;
            with_output(csv_path, out,
                        [&](std::ostream& os) { summary = bench::run_benchmark_csv(config, os); });
            err << "records=" << summary.records << (summary.truncated ? " (truncated)" : "") << '\n';
            return kOk;
        }

        if (check_cmd->parsed()) {
            check_opts.fault =
                fault == "flip-sign" ? selfcheck::Fault::FlipClosedFormSign : selfcheck::Fault::None;
            const auto results = selfcheck::run(check_opts);
            selfcheck::print_table(out, results);
            const auto failed = std::find_if(results.begin(), results.end(),
                                             [](const selfcheck::SuiteResult& r) { return !r.passed(); });
            if (failed != results.end()) {
                err << "selfcheck failed: " << failed->name << '\n';
                return kSelfcheckFailed;
            }
            return kOk;
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace sparseproj::cli
