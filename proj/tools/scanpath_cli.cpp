#include "scanpath/scanpath.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> solver;
};

scanpath::ScenarioConfig resolve(const Options& opt) {
    scanpath::ScenarioConfig cfg = opt.config_path.empty() ? scanpath::ScenarioConfig{} : scanpath::load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.out) cfg.out = *opt.out;
    if (opt.solver) cfg.solver = scanpath::parse_solver(*opt.solver);
    return cfg;
}

void print_report(const scanpath::RunReport& r, std::size_t regions) {
    std::printf("regions %zu  mean error %.2f um  std %.2f um  coverage %.2f %%  tour %.2f px  iterations %zu\n",
                regions, r.mean_error_um, r.std_error_um, r.coverage_percent, r.tour_length, r.iterations);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laser scan-path planning and closed-loop steering simulator"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "key = value scenario file");
        sub->add_option("--seed", opt.seed, "override the scenario seed");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--solver", opt.solver, "exact | heuristic | brute")
            ->check(CLI::IsMember({"exact", "heuristic", "brute"}));
    };
    auto* plan = app.add_subcommand("plan", "detect regions and plan the tour");
    auto* run = app.add_subcommand("run", "plan and execute the scan in closed loop");
    auto* batch = app.add_subcommand("batch", "run a list of scenarios and aggregate the reports");
    for (auto* sub : {plan, run, batch}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const scanpath::ScenarioConfig cfg = resolve(opt);
        if (plan->parsed()) {
            const auto p = scanpath::write_plan(cfg, cfg.out);
            std::printf("regions %zu  tour", p.plans.size());
            for (int id : p.tour.sequence) std::printf(" %d", id);
            std::printf("  length %.3f px\n", p.tour.total_length);
        } else if (run->parsed()) {
            const auto r = scanpath::run_scenario(cfg, cfg.out);
            print_report(r.report, r.plan.plans.size());
        } else {
            const auto tests = cfg.batch.empty() ? scanpath::ScenarioConfig::default_batch(cfg.seed) : cfg.batch;
            const auto b = scanpath::run_batch(cfg, tests, cfg.out);
            for (const auto& row : b.rows) {
                if (row.report) {
                    std::printf("test %2d  ", row.test);
                    print_report(*row.report, static_cast<std::size_t>(row.regions));
                } else {
                    std::printf("test %2d  %s\n", row.test, row.status.c_str());
                }
            }
            std::printf("average  mean error %.2f um  std %.2f um  coverage %.2f %%\n", b.average.mean_error_um,
                        b.average.std_error_um, b.average.coverage_percent);
            if (b.succeeded != b.rows.size()) return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "scanpath: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
