#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hetnet/config_io.hpp"
#include "hetnet/quadrature.hpp"

// hetnet-duda: analytic uplink performance of K-tier networks under
// decoupled/coupled access with fractional power control, plus the Monte
// Carlo oracle that validates every analytic number.
//
// Exit codes: 0 ok, 1 config error, 2 numerical non-convergence,
// 3 validation failure.

namespace {

using hetnet::cli::CommonOptions;
using hetnet::cli::SweepOptions;

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_config) {
    if (with_config)
        cmd->add_option("--config", opt.config_path, "scenario file")->required();
    cmd->add_option("--mode", [&opt](const std::vector<std::string>& v) {
            const auto mode = hetnet::access_mode_from_string(v.back());
            if (!mode) return false;
            opt.mode = *mode;
            return true;
        },
        "access mode override: duda | cuda_fading | cuda_mean");
    cmd->add_option("--seed", opt.seed, "Monte Carlo seed");
    cmd->add_option("--drops", opt.drops, "Monte Carlo drops")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opt.out_path, "output path");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    cmd->add_flag("--bits", opt.bits, "report bit units instead of nat units");
    cmd->add_flag("--ee-include-static", opt.ee_include_static,
                  "fold the static UE power draw into energy efficiency");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uplink DUDA/CUDA performance model with Monte Carlo validation"};
    app.require_subcommand(1);

    CommonOptions eval_opt, sweep_opt_common, repro_opt, validate_opt;
    SweepOptions sweep_opt;
    std::string repro_target;
    std::vector<std::string> sweep_modes;
    int eval_tier = -1;

    CLI::App* eval = app.add_subcommand("eval", "evaluate metrics for a scenario");
    add_common(eval, eval_opt, true);
    eval->add_option("--metric", eval_opt.metrics,
                     "assoc|rate|se|ee|power|load|total_rate|total_se|total_ee|all");
    eval->add_option("--tier", eval_tier, "restrict table rows to one tier");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep a parameter, emit CSV");
    add_common(sweep, sweep_opt_common, true);
    sweep->add_option("--param", sweep_opt.param,
                      "parameter path, e.g. tier[0].fpc_factor or tier[*].epsilon")
        ->required();
    sweep->add_option("--values", sweep_opt.values, "swept values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--metric", sweep_opt_common.metrics, "metrics (repeatable)")
        ->required();
    sweep->add_option("--sweep-mode", sweep_modes,
                      "access modes to sweep (repeatable; default: config's mode)");

    CLI::App* repro = app.add_subcommand(
        "reproduce", "regenerate a published exhibit as CSV + SVG");
    repro->add_option("target", repro_target, "table1|fig2|fig3|fig4|fig5")
        ->required()
        ->check(CLI::IsMember({"table1", "fig2", "fig3", "fig4", "fig5"}));
    add_common(repro, repro_opt, false);

    CLI::App* validate = app.add_subcommand(
        "validate", "compare every analytic metric against the Monte Carlo oracle");
    add_common(validate, validate_opt, true);
    validate->add_flag("--one-per-bs", validate_opt.one_per_bs,
                       "append realized one-transmitter-per-BS rate probes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            if (eval_tier >= 0) eval_opt.tier = eval_tier;
            return hetnet::cli::cmd_eval(eval_opt);
        }
        if (sweep->parsed()) {
            for (const auto& m : sweep_modes) {
                const auto mode = hetnet::access_mode_from_string(m);
                if (!mode) {
                    std::fprintf(stderr, "error: unknown mode '%s'\n", m.c_str());
                    return 1;
                }
                sweep_opt.modes.push_back(*mode);
            }
            return hetnet::cli::cmd_sweep(sweep_opt_common, sweep_opt);
        }
        if (repro->parsed()) return hetnet::cli::cmd_reproduce(repro_target, repro_opt);
        if (validate->parsed()) return hetnet::cli::cmd_validate(validate_opt);
    } catch (const hetnet::QuadratureError& e) {
        std::fprintf(stderr, "numerical error: %s (best estimate %.9g, err_est %.3g)\n",
                     e.what(), e.best_estimate(), e.err_est());
        return 2;
    } catch (const hetnet::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
