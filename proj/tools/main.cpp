#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "sklern/errors.hpp"

namespace {

using sklern::cli::RunConfig;

struct Flags {
    std::string config;
    int n = 0;
    int k = 0;
    std::string kappa;
    int order = 0;
    double mu = 0.0;
    double ball = 0.0;
    std::string annulus;
    int grid = 0;
    double epsilon = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double delta = 0.0;
    int samples = 0;
    std::string json;
    std::string csv;
    std::string spheres;
    std::uint64_t seed = 0;
    int draws = 0;
    std::string pairs;
    std::string suite;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "JSON config file; flags override its values");
    sub->add_option("--n", f.n, "dimension");
    sub->add_option("--k", f.k, "sigma_k index");
    sub->add_option("--mu", f.mu, "free coefficient c_{n,0}");
    sub->add_option("--json", f.json, "write the JSON report here instead of stdout");
}

void add_geometry(CLI::App* sub, Flags& f)
{
    auto* ball = sub->add_option("--ball", f.ball, "ball radius R");
    auto* ann = sub->add_option("--annulus", f.annulus, "annulus radii a,b");
    ball->excludes(ann);
    sub->add_option("--grid", f.grid, "number of grid intervals J (default 16000)");
    sub->add_option("--epsilon", f.epsilon, "offset from the blow-up boundary (0: 1e-3 of the width)");
}

bool given(const CLI::App* sub, const char* flag)
{
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
}

template <typename T>
void apply(const CLI::App* sub, const char* flag, const std::string& key, const T& value, T& target, RunConfig& cfg)
{
    if (given(sub, flag)) {
        target = value;
        sklern::cli::override_key(cfg, key);
    }
}

RunConfig merge(const CLI::App* sub, const Flags& f)
{
    RunConfig cfg = f.config.empty() ? RunConfig{} : sklern::cli::load_config(f.config);
    cfg.command = sub->get_name();
    apply(sub, "--n", "n", f.n, cfg.n, cfg);
    apply(sub, "--k", "k", f.k, cfg.k, cfg);
    apply(sub, "--order", "order", f.order, cfg.order, cfg);
    apply(sub, "--mu", "mu", f.mu, cfg.mu, cfg);
    apply(sub, "--grid", "grid", f.grid, cfg.grid, cfg);
    apply(sub, "--epsilon", "epsilon", f.epsilon, cfg.epsilon, cfg);
    apply(sub, "--beta", "beta", f.beta, cfg.beta, cfg);
    apply(sub, "--theta", "theta", f.theta, cfg.theta, cfg);
    apply(sub, "--delta", "delta", f.delta, cfg.delta, cfg);
    apply(sub, "--samples", "samples", f.samples, cfg.samples, cfg);
    apply(sub, "--json", "json", f.json, cfg.json_out, cfg);
    apply(sub, "--csv", "csv", f.csv, cfg.csv_out, cfg);
    apply(sub, "--spheres", "spheres", f.spheres, cfg.spheres_out, cfg);
    apply(sub, "--seed", "seed", f.seed, cfg.seed, cfg);
    apply(sub, "--draws", "draws", f.draws, cfg.draws, cfg);
    if (given(sub, "--kappa")) {
        cfg.kappa = sklern::cli::parse_list(f.kappa, "kappa");
        sklern::cli::override_key(cfg, "kappa");
    }
    if (given(sub, "--ball")) {
        cfg.domain = sklern::Ball{f.ball};
        sklern::cli::override_key(cfg, "ball");
        cfg.origin.erase("annulus");
    }
    if (given(sub, "--annulus")) {
        const auto ab = sklern::cli::parse_list(f.annulus, "annulus");
        if (ab.size() != 2) {
            throw sklern::cli::ConfigError("--annulus: expected a,b");
        }
        cfg.domain = sklern::Annulus{ab[0], ab[1]};
        sklern::cli::override_key(cfg, "annulus");
        cfg.origin.erase("ball");
    }
    if (given(sub, "--pairs")) {
        cfg.pairs = sklern::cli::parse_pairs(f.pairs);
        sklern::cli::override_key(cfg, "pairs");
    }
    if (!f.suite.empty()) {
        cfg.suite = f.suite;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sigma_k Loewner-Nirenberg expansions, radial solutions and diagnostics"};
    app.require_subcommand(1);
    Flags f;

    auto* expand = app.add_subcommand("expand", "boundary expansion coefficient table");
    add_common(expand, f);
    expand->add_option("--kappa", f.kappa, "principal curvatures kappa_1,...,kappa_{n-1}");
    expand->add_option("--order", f.order, "expansion order M (default 2n+2)");

    auto* solve = app.add_subcommand("solve", "radial solution on a ball or annulus");
    add_common(solve, f);
    add_geometry(solve, f);
    solve->add_option("--csv", f.csv, "solution CSV (r, w, u, one-sided u', eigenvalues, residual)");
    solve->add_option("--spheres", f.spheres, "coordinate-sphere CSV (r, H0, Hu, area_g, obstruction)");

    auto* verify = app.add_subcommand("verify", "run a verification suite and report pass/fail per criterion");
    add_common(verify, f);
    add_geometry(verify, f);
    verify->add_option("suite", f.suite, "barrier | corner | sphere | obstruction | xi | expansion");
    verify->add_option("--kappa", f.kappa, "principal curvatures (barrier with formal data)");
    verify->add_option("--order", f.order, "expansion order");
    verify->add_option("--beta", f.beta, "barrier amplitude");
    verify->add_option("--theta", f.theta, "barrier exponent in (n, n+1); default n + 1/2");
    verify->add_option("--delta", f.delta, "barrier collar width");
    verify->add_option("--samples", f.samples, "barrier sample radii");
    verify->add_option("--seed", f.seed, "seed of the random curvature draws");
    verify->add_option("--draws", f.draws, "number of random curvature draws");

    auto* sweep = app.add_subcommand("sweep", "parallel solves over (n, k) pairs");
    add_common(sweep, f);
    add_geometry(sweep, f);
    sweep->add_option("--pairs", f.pairs, "n:k list, default 3:2,4:2,4:3");
    sweep->add_option("--csv", f.csv, "summary CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return sklern::cli::kConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        RunConfig cfg = merge(sub, f);
        if (sub == expand) {
            if (cfg.kappa.empty()) {
                std::cerr << "expand: missing --kappa\n\n" << expand->help();
                return sklern::cli::kConfig;
            }
            sklern::cli::validate(cfg, {"kappa", "order"});
            return sklern::cli::cmd_expand(cfg, std::cout);
        }
        if (sub == solve) {
            sklern::cli::validate(cfg, {"domain"});
            return sklern::cli::cmd_solve(cfg, std::cout);
        }
        if (sub == verify) {
            if (cfg.suite.empty()) {
                std::cerr << "verify: missing suite\n\n" << verify->help();
                return sklern::cli::kConfig;
            }
            std::vector<std::string> needs;
            if (cfg.suite == "barrier") {
                needs = {"barrier", "order"};
                if (!cfg.kappa.empty()) {
                    needs.push_back("kappa");
                }
            } else if (cfg.suite == "expansion") {
                needs = {"order", "draws"};
            } else {
                needs = {"domain"};
            }
            sklern::cli::validate(cfg, needs);
            return sklern::cli::cmd_verify(cfg, std::cout);
        }
        if (!cfg.domain) {
            cfg.domain = sklern::Annulus{};
        }
        sklern::cli::validate(cfg, {"domain", "pairs"});
        return sklern::cli::cmd_sweep(cfg, std::cout);
    } catch (const sklern::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sklern::cli::kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sklern::cli::kConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sklern::cli::kConfig;
    } catch (const sklern::DegeneracyError& e) {
        std::cerr << "degenerate: " << e.what() << '\n';
        return sklern::cli::kDegenerate;
    } catch (const sklern::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return sklern::cli::kNumerical;
    }
}
