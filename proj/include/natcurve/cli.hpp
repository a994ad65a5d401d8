#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "natcurve/analysis.hpp"
#include "natcurve/error.hpp"
#include "natcurve/io.hpp"
#include "natcurve/solver.hpp"
#include "natcurve/spec.hpp"
#include "natcurve/transforms.hpp"

namespace natcurve {

enum ExitCode : int { exit_ok = 0, exit_verification_failed = 1, exit_input_error = 2 };

namespace detail {

inline void emit_samples(const CurveSamples& samples, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) write_csv(samples, out);
    else export_csv(samples, out_path);
}

inline std::vector<std::string> split_checks(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const std::string& item : raw) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

inline CurveSamples run_transform(const CurveSamples& in, const std::string& op, std::optional<double> phi0) {
    const bool needs_phi0 = op == "successor" || op == "bishop";
    if (needs_phi0 && !phi0) throw Error(ErrorCode::InvalidArgument, "--phi0 is required for --op " + op);
    if (!needs_phi0 && phi0) throw Error(ErrorCode::InvalidArgument, "--phi0 does not apply to --op " + op);
    const Vec3 x0 = in.position.front();
    if (op == "successor") return to_samples(successor_transform(frenet_from_samples(in), *phi0), x0);
    if (op == "predecessor") return to_samples(predecessor_transform(frenet_from_samples(in)), x0);
    // The Bishop and Frenet frames of one curve share the tangent, so positions carry over.
    if (op == "bishop") {
        CurveSamples out = to_samples(bishop_transform(frenet_from_samples(in), *phi0), x0);
        out.position = in.position;
        return out;
    }
    CurveSamples out = to_samples(inverse_bishop(bishop_from_samples(in)), x0);
    out.position = in.position;
    return out;
}

} // namespace detail

/// Command-line entry point. Exit codes: 0 success, 1 failed verification,
/// 2 input error. Diagnostics go to `err`.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"Curves from natural equations: generate, solve, transform, verify, classify", "natcurve"};
    app.require_subcommand(1);

    std::string input;
    std::string out_path;

    auto* generate_cmd = app.add_subcommand("generate", "Realize a CurveSpec JSON and write CSV samples");
    generate_cmd->add_option("spec", input, "CurveSpec JSON file")->required();
    generate_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");

    auto* solve_cmd = app.add_subcommand("solve", "Solve raw natural equations from a development JSON");
    solve_cmd->add_option("dev", input, "Development JSON file")->required();
    solve_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");

    std::string op;
    std::optional<double> phi0;
    auto* transform_cmd = app.add_subcommand("transform", "Apply a frame transformation to CSV samples");
    transform_cmd->add_option("in", input, "CSV samples")->required();
    transform_cmd->add_option("--op", op, "Transformation")
        ->required()
        ->check(CLI::IsMember({"successor", "predecessor", "bishop", "inverse-bishop"}));
    transform_cmd->add_option("--phi0", phi0, "Initial phase (successor, bishop)");
    transform_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");

    std::vector<std::string> checks;
    auto* verify_cmd = app.add_subcommand("verify", "Check CSV samples and print a JSON report");
    verify_cmd->add_option("in", input, "CSV samples")->required();
    verify_cmd->add_option("--checks", checks, "Comma-separated checks (default: all)")->delimiter(',');

    double tol = ClassifyConfig{}.tol;
    auto* classify_cmd = app.add_subcommand("classify", "Classify a development JSON");
    classify_cmd->add_option("dev", input, "Development JSON file")->required();
    classify_cmd->add_option("--tol", tol, "Classification tolerance");

    std::vector<const char*> argv{"natcurve"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (generate_cmd->parsed()) {
            detail::emit_samples(generate(parse_curve_spec(read_json_file(input))), out_path, out);
        } else if (solve_cmd->parsed()) {
            detail::emit_samples(generate(parse_development_spec(read_json_file(input))), out_path, out);
        } else if (transform_cmd->parsed()) {
            detail::emit_samples(detail::run_transform(import_csv(input), op, phi0), out_path, out);
        } else if (verify_cmd->parsed()) {
            const VerificationReport report = verify(import_csv(input), detail::split_checks(checks));
            out << to_json(report).dump(2) << '\n';
            if (!report.passed()) {
                for (const CheckResult& c : report.checks) {
                    if (!c.passed) {
                        err << "check " << c.name << " failed: " << c.value << " > " << c.tolerance << " at s=" << c.worst_s
                            << '\n';
                    }
                }
                return exit_verification_failed;
            }
        } else if (classify_cmd->parsed()) {
            const RealizedSpec r = realize(parse_development_spec(read_json_file(input)));
            ClassifyConfig cfg;
            cfg.tol = tol;
            out << to_json(classify(r.development, cfg)).dump(2) << '\n';
        }
    } catch (const Error& e) {
        err << "natcurve: " << e.what() << '\n';
        return exit_input_error;
    } catch (const nlohmann::json::exception& e) {
        err << "natcurve: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_ok;
}

} // namespace natcurve
