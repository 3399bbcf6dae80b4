// Batch experiment runner: thin CLI over the shared-library C interface.
// Flag precedence: built-in defaults < --config file values < explicit flags.

#include <cstdio>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "rpt.h"

namespace {

struct Sub {
    CLI::App* app = nullptr;
    std::string config_path;
    std::string output = "-";
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;

    CLI::Option* add(const std::string& flag, const std::string& key,
                     const std::string& desc) {
        CLI::Option* o = app->add_option(flag, values[key], desc);
        opts[key] = o;
        return o;
    }

    void add_common() {
        app->set_help_flag("--help", "print help");  // frees -h for the field flag
        app->add_option("--config", config_path, "flat key=value config file");
        app->add_option("-o,--output", output, "output CSV path ('-' = stdout)")
            ->capture_default_str();
        add("--seed", "seed", "master RNG seed (default 1)")->check(CLI::Number);
        add("--threads", "threads", "worker thread count (default 1)")->check(CLI::Number);
    }
};

int fail_with(rpt_status st) {
    std::fprintf(stderr, "error: %s\n", rpt_last_error());
    return static_cast<int>(st);
}

int execute(const char* name, const Sub& sub) {
    rpt_config* cfg = rpt_config_new();
    if (!cfg) {
        std::fprintf(stderr, "error: out of memory\n");
        return static_cast<int>(RPT_NUMERIC_ERROR);
    }
    rpt_status st = RPT_OK;
    if (!sub.config_path.empty()) st = rpt_config_load(cfg, sub.config_path.c_str());
    if (st == RPT_OK) {
        for (const auto& [key, opt] : sub.opts) {
            if (opt->count() == 0) continue;
            st = rpt_config_set(cfg, key.c_str(), sub.values.at(key).c_str());
            if (st != RPT_OK) break;
        }
    }
    if (st == RPT_OK) st = rpt_run(cfg, name, sub.output.c_str());
    rpt_config_free(cfg);
    return st == RPT_OK ? 0 : fail_with(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reduced process tomography experiment runner"};
    app.set_help_flag("--help", "print help");
    app.set_version_flag("--version", rpt_version());
    app.require_subcommand(1);

    Sub converge;
    converge.app = app.add_subcommand(
        "converge", "Monte-Carlo sigma_max(chi) against the analytic rate or bound");
    converge.add_common();
    converge
        .add("--strategy", "strategy",
             "haar-lbit | fixed-rotated:<state> | correlated-identical | kuniform:<n,k>")
        ->capture_default_str();
    converge.add("--n", "n", "qubit count")->check(CLI::Number);
    converge.add("--ell", "ell", "block size for haar-lbit/correlated (default 1)")
        ->check(CLI::Number);
    converge.add("--nu", "nu", "shot count, or comma list (default 100)");
    converge.add("--samples", "samples", "Monte-Carlo sample count (default 20000)")
        ->check(CLI::Number);

    Sub weights;
    weights.app =
        app.add_subcommand("weights", "subset-weight hierarchy w_s of a pure state");
    weights.add_common();
    weights.add("--state", "state", "state token (zero:/plus:/ghz:/bell-pairs:/kuniform:) or file");

    Sub scramble;
    scramble.app = app.add_subcommand(
        "scramble", "Heisenberg-chain scan of max_s w_s and the level weights W_k");
    scramble.add_common();
    scramble.add("--n", "n", "chain length (default 7)")->check(CLI::Number);
    scramble.add("--J", "J", "exchange coupling (default 1)")->check(CLI::Number);
    scramble.add("--h", "h", "field strength (default 1)")->check(CLI::Number);
    scramble.add("--tmax", "tmax", "scan end time (default 20)")->check(CLI::Number);
    scramble.add("--dt", "dt", "grid spacing (default 0.05)")->check(CLI::Number);
    scramble.add("--boundary", "boundary", "open | periodic (default open)")
        ->check(CLI::IsMember({"open", "periodic"}));
    scramble.add("--state", "state", "initial state token or file (default plus:<n>)");
    scramble.add("--refine", "refine", "1 = golden-section refine around the grid minimum")
        ->check(CLI::Number);

    Sub tomography;
    tomography.app = app.add_subcommand(
        "tomography", "simulated reduced process tomography with error decomposition");
    tomography.add_common();
    tomography.add("--channel", "channel",
                   "unitary:<file> | heisenberg:<n,J,h,t> | kraus:<file>");
    tomography.add("--s", "s", "comma list of subset qubits (default 1)");
    tomography.add("--prep", "prep", "complement preparation strategy (default haar-lbit)");
    tomography.add("--ell", "ell", "block size for the preparation (default 1)")
        ->check(CLI::Number);
    tomography.add("--nu", "nu", "shots per setting (default 1000)")->check(CLI::Number);
    tomography.add("--trials", "trials", "independent repetitions (default 50)")
        ->check(CLI::Number);
    tomography.add("--choi-out", "choi_out", "save the reconstructed Choi matrix here");
    tomography.add("--psd", "psd", "1 = clip the saved reconstruction to PSD")
        ->check(CLI::Number);

    Sub fisher;
    fisher.app = app.add_subcommand(
        "fisher", "phase-sensitivity proxy and SLD Fisher information per register count");
    fisher.add_common();
    fisher.add("--protocol", "protocol", "ghz | separable (default ghz)")
        ->check(CLI::IsMember({"ghz", "separable"}));
    fisher.add("--nu", "nu", "comma list of register counts (default 2,3,4,5,6)");
    fisher.add("--phi", "phi", "phase at which to evaluate (default 0)")->check(CLI::Number);

    Sub fidelity;
    fidelity.app =
        app.add_subcommand("fidelity", "Uhlmann and Frobenius distance of two densities");
    fidelity.add_common();
    fidelity.add("--rho", "rho", "uniform:<d> | orthomix:<d>,<nu> | state:<token> | file");
    fidelity.add("--sigma", "sigma", "second density, same grammar");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(RPT_USAGE_ERROR);
    }

    const std::map<std::string, const Sub*> subs = {
        {"converge", &converge},   {"weights", &weights}, {"scramble", &scramble},
        {"tomography", &tomography}, {"fisher", &fisher},   {"fidelity", &fidelity}};
    for (const auto& [name, sub] : subs)
        if (sub->app->parsed()) return execute(name.c_str(), *sub);
    return static_cast<int>(RPT_USAGE_ERROR);
}
