/* SPDX-License-Identifier: Apache-2.0 */
// Command-line runner over the C API: one verb per experiment.
#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

#include "dclab/dclab.h"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<long long> seed;
    std::optional<int> threads;
    bool binary = false;
    bool json = false;
    bool quiet = false;
};

int fail(dclab_status s, const char* what)
{
    std::fprintf(stderr, "dclab: %s: %s (%s)\n", what, dclab_last_error(), dclab_status_name(s));
    return 2;
}

int run(const std::string& verb, const Flags& f)
{
    dclab_config* cfg = nullptr;
    dclab_status s = dclab_config_load(f.config.c_str(), &cfg);
    if (s != DCLAB_OK) return fail(s, "loading config");

    struct Guard {
        dclab_config* c;
        dclab_result* r = nullptr;
        ~Guard()
        {
            dclab_result_free(r);
            dclab_config_free(c);
        }
    } guard{cfg};

    auto set = [&](const char* section, const char* key, const std::string& value) {
        return dclab_config_set(cfg, section, key, value.c_str());
    };
    std::string kind = verb;
    if ((s = set("experiment", "kind", kind)) != DCLAB_OK) return fail(s, "setting experiment kind");
    if (f.seed && (s = set("experiment", "seed", std::to_string(*f.seed))) != DCLAB_OK) return fail(s, "--seed");
    if (f.threads && (s = set("solver", "threads", std::to_string(*f.threads))) != DCLAB_OK) return fail(s, "--threads");
    if (f.binary && (s = set("output", "binary", "true")) != DCLAB_OK) return fail(s, "--binary");
    if (f.json && (s = set("output", "json", "true")) != DCLAB_OK) return fail(s, "--json");

    if ((s = dclab_run(cfg, &guard.r)) != DCLAB_OK) return fail(s, "running experiment");

    std::string dir = f.out;
    if (dir.empty()) {
        const char* text = nullptr;
        if ((s = dclab_config_get(cfg, "output", "dir", &text)) != DCLAB_OK) return fail(s, "reading output dir");
        dir = text;
    }
    if ((s = dclab_result_write(guard.r, cfg, dir.c_str())) != DCLAB_OK) return fail(s, "writing results");

    const size_t n = dclab_result_assertion_count(guard.r);
    for (size_t i = 0; i < n; ++i) {
        const char* name = nullptr;
        const char* detail = nullptr;
        int pass = 0;
        dclab_result_assertion(guard.r, i, &name, &pass, &detail);
        if (!f.quiet || !pass) std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail);
    }
    const bool ok = dclab_result_passed(guard.r) != 0;
    std::printf("%s: %s (results in %s)\n", kind.c_str(), ok ? "all assertions passed" : "assertions failed",
                dir.c_str());
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dead-core experiments for the infinity Laplacian with absorption"};
    app.set_version_flag("--version", std::string(dclab_version()));
    app.require_subcommand(1);

    const char* verbs[][2] = {
        {"solve", "Solve one Dirichlet problem"},
        {"convergence", "Refinement study against the radial oracle"},
        {"flatness", "Kappa sweep of the pinned flatness surrogate"},
        {"borderline", "Borderline source refinement study with a dead-core contrast"},
        {"liouville", "Plateau fraction of scaled dead-core problems"},
        {"porosity", "Porosity and box dimension of the free boundary"},
        {"audit", "Growth-condition audit of source terms"},
        {"verify", "Seeded viscosity touching test of a candidate field"},
    };
    Flags flags;
    std::string chosen;
    for (const auto& v : verbs) {
        CLI::App* sub = app.add_subcommand(v[0], v[1]);
        sub->add_option("--config", flags.config, "Experiment config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "Output directory (default: [output] dir)");
        sub->add_option("--seed", flags.seed, "Override [experiment] seed");
        sub->add_option("--threads", flags.threads, "Override [solver] threads")->check(CLI::PositiveNumber);
        sub->add_flag("--binary", flags.binary, "Write field dumps as little-endian doubles");
        sub->add_flag("--json", flags.json, "Mirror tables as JSON records");
        sub->add_flag("-q,--quiet", flags.quiet, "Print failing assertions only");
        sub->callback([&chosen, name = std::string(v[0])] { chosen = name; });
    }
    CLI11_PARSE(app, argc, argv);
    return run(chosen, flags);
}
