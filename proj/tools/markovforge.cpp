// markovforge: build loop systems of prescribed entropy and period, and
// classify them as transient or positive recurrent.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace markovforge::cli;

int main(int argc, char** argv) {
    CLI::App app{"Loop-system graphs of prescribed Gurevich entropy and period"};
    app.require_subcommand(1);

    BuildArgs build;
    build.precision = default_precision();
    auto* build_cmd = app.add_subcommand("build", "Build the loop spectrum for a beta (or entropy and period)");
    auto* beta_opt = build_cmd->add_option("--beta", build.beta, "beta: 2, 3/2, 2.5, exp(7/10)");
    auto* entropy_opt = build_cmd->add_option("--entropy", build.entropy, "target entropy h (decimal, ln2 or ln3)");
    beta_opt->excludes(entropy_opt);
    build_cmd->add_option("--period", build.period, "period p; beta = e^{h p}")->check(CLI::PositiveNumber);
    build_cmd->add_option("--max-n", build.max_n, "truncation N_max")->check(CLI::Range(4, 1 << 20));
    build_cmd->add_option("--precision", build.precision, "starting precision in bits");
    build_cmd->add_option("--out", build.out, "output spectrum file (default stdout)");

    TransientArgs transient;
    auto* transient_cmd = app.add_subcommand("transient-variant", "Delete one loop to get the transient variant");
    transient_cmd->add_option("file", transient.file)->required();
    transient_cmd->add_option("--n0", transient.n0, "loop length to delete, or auto");
    transient_cmd->add_option("--out", transient.out, "output spectrum file (default stdout)");

    ClassifyArgs classify;
    classify.precision = default_precision();
    auto* classify_cmd = app.add_subcommand("classify", "Print the classification report as JSON");
    classify_cmd->add_option("file", classify.file)->required();
    classify_cmd->add_option("--precision", classify.precision, "bisection precision in bits");
    classify_cmd->add_flag("--bits", classify.bits, "report entropy in bits instead of nats");

    EntropyArgs entropy;
    auto* entropy_cmd = app.add_subcommand("entropy", "Path-count growth estimates as CSV");
    entropy_cmd->add_option("file", entropy.file)->required();
    entropy_cmd->add_option("--max-n", entropy.max_n, "loop-length depth; counts run to max-n * period");
    entropy_cmd->add_option("--csv", entropy.csv, "CSV path (default: CSV on stdout)");

    LiftArgs lift;
    auto* lift_cmd = app.add_subcommand("lift", "Record a period-p lift in the spectrum file");
    lift_cmd->add_option("file", lift.file)->required();
    lift_cmd->add_option("--period", lift.period, "period p")->required()->check(CLI::PositiveNumber);
    lift_cmd->add_option("--out", lift.out, "output spectrum file (default stdout)");

    ExportArgs export_args;
    auto* export_cmd = app.add_subcommand("export", "Realize the truncated graph as DOT or JSON");
    export_cmd->add_option("file", export_args.file)->required();
    export_cmd->add_option("--format", export_args.format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    export_cmd->add_option("--max-n", export_args.max_n, "longest loop to realize");
    export_cmd->add_option("--out", export_args.out, "output path (default stdout)");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite; exit 5 on any failure");
    verify_cmd->add_option("file", verify.file)->required();
    verify_cmd->add_option("--oracle-depth", verify.oracle_depth, "loop-length depth of the oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kFailure;
    }

    if (*build_cmd) return cmd_build(build, std::cout, std::cerr);
    if (*transient_cmd) return cmd_transient_variant(transient, std::cout, std::cerr);
    if (*classify_cmd) return cmd_classify(classify, std::cout, std::cerr);
    if (*entropy_cmd) return cmd_entropy(entropy, std::cout, std::cerr);
    if (*lift_cmd) return cmd_lift(lift, std::cout, std::cerr);
    if (*export_cmd) return cmd_export(export_args, std::cout, std::cerr);
    if (*verify_cmd) return cmd_verify(verify, std::cout, std::cerr);
    return kFailure;
}
