#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "delib/harness.hpp"
#include "json.hpp"
#include "plot.hpp"

namespace {

using namespace delib;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= csv.size(); ++i) {
        if (i == csv.size() || csv[i] == ',') {
            std::string item = csv.substr(start, i - start);
            while (!item.empty() && item.front() == ' ') item.erase(item.begin());
            while (!item.empty() && item.back() == ' ') item.pop_back();
            if (!item.empty()) out.push_back(std::move(item));
            start = i + 1;
        }
    }
    return out;
}

struct RunFlags {
    std::string config;
    std::optional<uint64_t> seed;
    std::optional<int> replications;
    std::optional<std::string> strategies;
    std::optional<std::string> rules;
    std::optional<std::string> out;
    int threads = 1;
};

// Flag > config > DELIB_OUT environment variable > "out".
void resolve_out_dir(ExperimentConfig& cfg, const std::optional<std::string>& flag) {
    if (flag) {
        cfg.out_dir = *flag;
    } else if (cfg.out_dir.empty()) {
        if (const char* env = std::getenv("DELIB_OUT")) cfg.out_dir = env;
    }
}

int cmd_run(const RunFlags& flags) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(flags.config);
        if (flags.seed) cfg.master_seed = *flags.seed;
        if (flags.replications) cfg.replications = *flags.replications;
        if (flags.strategies) {
            cfg.strategies.clear();
            for (const std::string& name : split_list(*flags.strategies))
                cfg.strategies.push_back(parse_strategy(name));
        }
        if (flags.rules) {
            cfg.rules.clear();
            for (const std::string& name : split_list(*flags.rules))
                cfg.rules.push_back(parse_rule(name));
        }
        resolve_out_dir(cfg, flags.out);
        cfg.validate();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    try {
        run_experiment(cfg, flags.threads);
        const std::string dir = cfg.out_dir.empty() ? "out" : cfg.out_dir;
        std::printf("wrote %s/records.csv, records.jsonl, report.json, report.txt"
                    " (%d replications)\n",
                    dir.c_str(), cfg.replications);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        const ExperimentConfig cfg = load_config(config_path);
        cfg.validate();
        std::string strategies, rules;
        for (Strategy s : cfg.strategies) {
            if (!strategies.empty()) strategies += ", ";
            strategies += strategy_name(s);
        }
        for (Rule r : cfg.rules) {
            if (!rules.empty()) rules += ", ";
            rules += rule_name(r);
        }
        std::printf("config ok: %d+%d voters, %d candidates, k=%d, phi=%g\n",
                    cfg.population.n_majority, cfg.population.n_minority,
                    cfg.population.candidates, cfg.population.committee_size, cfg.population.phi);
        std::printf("  %d replications, seed %llu, groups=%d, rounds=%d\n", cfg.replications,
                    static_cast<unsigned long long>(cfg.master_seed), cfg.groups, cfg.rounds);
        std::printf("  strategies: %s\n  rules: %s\n", strategies.c_str(), rules.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

int cmd_report(const std::string& records_path) {
    std::vector<RunRecord> records;
    try {
        records = load_records(records_path);
        if (records.empty()) {
            std::fprintf(stderr, "error: %s contains no records\n", records_path.c_str());
            return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    try {
        const AggregateReport rep = aggregate_records(records);

        std::printf("table 1: EJR / PJR satisfaction (%%), %d replications\n", rep.replications);
        std::printf("  %-5s %-14s %8s %8s\n", "rule", "strategy", "EJR%", "PJR%");
        for (const std::string& rule : rep.rules)
            for (const std::string& strategy : rep.strategies)
                std::printf("  %-5s %-14s %8.1f %8.1f\n", rule.c_str(), strategy.c_str(),
                            100.0 * rep.stat(strategy, rule, "ejr").mean,
                            100.0 * rep.stat(strategy, rule, "pjr").mean);

        std::printf("\ntable 2: minority-supported candidates elected (mean +/- se)\n");
        std::printf("  %-5s %-14s %8s %8s\n", "rule", "strategy", "mean", "se");
        for (const std::string& rule : rep.rules)
            for (const std::string& strategy : rep.strategies) {
                const Stat& st = rep.stat(strategy, rule, "minority_preserved");
                std::printf("  %-5s %-14s %8.3f %8.3f\n", rule.c_str(), strategy.c_str(), st.mean,
                            st.se);
            }

        std::printf("\ntable 3: URagg (mean +/- se) and ratios to the initial MES / PAV scores\n");
        const auto baseline = [&](const char* rule) -> std::optional<double> {
            try {
                return rep.stat("initial", rule, "uragg").mean;
            } catch (const std::out_of_range&) {
                return std::nullopt;
            }
        };
        const std::optional<double> mes0 = baseline("mes");
        const std::optional<double> pav0 = baseline("pav");
        std::printf("  %-5s %-14s %8s %8s %13s %13s\n", "rule", "strategy", "URagg", "se",
                    "/mes:initial", "/pav:initial");
        for (const std::string& rule : rep.rules)
            for (const std::string& strategy : rep.strategies) {
                const Stat& st = rep.stat(strategy, rule, "uragg");
                std::string r_mes = "-", r_pav = "-";
                char buf[32];
                if (mes0 && *mes0 > 0.0) {
                    std::snprintf(buf, sizeof(buf), "%.3f", st.mean / *mes0);
                    r_mes = buf;
                }
                if (pav0 && *pav0 > 0.0) {
                    std::snprintf(buf, sizeof(buf), "%.3f", st.mean / *pav0);
                    r_pav = buf;
                }
                std::printf("  %-5s %-14s %8.3f %8.3f %13s %13s\n", rule.c_str(), strategy.c_str(),
                            st.mean, st.se, r_mes.c_str(), r_pav.c_str());
            }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

// records.csv -> sibling records.jsonl
std::string jsonl_sibling(const std::string& csv_path) {
    const size_t dot = csv_path.rfind('.');
    const size_t slash = csv_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return csv_path + ".jsonl";
    return csv_path.substr(0, dot) + ".jsonl";
}

int cmd_plot(const std::string& records_path, const std::string& figure,
             const std::string& out_path) {
    static const std::vector<std::string> figures = {"variance", "ur",           "rr",
                                                     "uragg",    "vs",           "cc_approvals",
                                                     "disagreement"};
    if (std::find(figures.begin(), figures.end(), figure) == figures.end()) {
        std::fprintf(stderr, "error: unknown figure '%s' (expected one of:", figure.c_str());
        for (const std::string& f : figures) std::fprintf(stderr, " %s", f.c_str());
        std::fprintf(stderr, ")\n");
        return 2;
    }
    std::vector<RunRecord> records;
    try {
        records = load_records(records_path);
        if (records.empty()) {
            std::fprintf(stderr, "error: %s contains no records\n", records_path.c_str());
            return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    try {
        const AggregateReport rep = aggregate_records(records);
        plot::BarChart chart;

        if (figure == "cc_approvals") {
            // Mean approval count per committee slot (least to most approved),
            // from the JSONL diagnostics of the CC records.
            const std::string jsonl_path = jsonl_sibling(records_path);
            std::ifstream in(jsonl_path, std::ios::binary);
            if (!in) {
                std::fprintf(stderr, "error: cannot read %s (needed for cc_approvals)\n",
                             jsonl_path.c_str());
                return 2;
            }
            std::vector<std::vector<std::vector<double>>> slots(
                rep.strategies.size());  // [strategy][slot] -> samples
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const nlohmann::json j = nlohmann::json::parse(line);
                if (j.at("rule").get<std::string>() != "cc") continue;
                const std::string strategy = j.at("strategy").get<std::string>();
                const auto sit = std::find(rep.strategies.begin(), rep.strategies.end(), strategy);
                if (sit == rep.strategies.end()) continue;
                const size_t si = static_cast<size_t>(sit - rep.strategies.begin());
                const std::vector<double> approvals = j.at("approvals").get<std::vector<double>>();
                if (slots[si].size() < approvals.size()) slots[si].resize(approvals.size());
                for (size_t t = 0; t < approvals.size(); ++t) slots[si][t].push_back(approvals[t]);
            }
            size_t k = 0;
            for (const auto& s : slots) k = std::max(k, s.size());
            if (k == 0) {
                std::fprintf(stderr, "error: no cc diagnostics in %s\n", jsonl_path.c_str());
                return 2;
            }
            chart.title = "CC committee approval profile";
            chart.y_label = "approvals per committee member";
            chart.group_labels = rep.strategies;
            for (size_t t = 0; t < k; ++t) {
                plot::BarSeries series;
                series.label = "member " + std::to_string(t + 1);
                for (size_t si = 0; si < rep.strategies.size(); ++si) {
                    double mean = 0.0, se = 0.0;
                    const std::vector<double>& xs =
                        t < slots[si].size() ? slots[si][t] : std::vector<double>{};
                    if (!xs.empty()) {
                        for (double x : xs) mean += x;
                        mean /= static_cast<double>(xs.size());
                        if (xs.size() > 1) {
                            double ss = 0.0;
                            for (double x : xs) ss += (x - mean) * (x - mean);
                            se = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0)) /
                                 std::sqrt(static_cast<double>(xs.size()));
                        }
                    }
                    series.means.push_back(mean);
                    series.ses.push_back(se);
                }
                chart.series.push_back(std::move(series));
            }
        } else if (figure == "variance") {
            chart.title = "Utility variance after deliberation";
            chart.y_label = "mean utility variance";
            chart.group_labels = {"population"};
            const std::string& rule = rep.rules.front();  // identical across rules
            for (const std::string& strategy : rep.strategies) {
                const Stat& st = rep.stat(strategy, rule, "variance");
                chart.series.push_back({strategy, {st.mean}, {st.se}});
            }
        } else {
            static const std::vector<std::pair<std::string, std::string>> titles = {
                {"ur", "Utilitarian ratio"},
                {"rr", "Representation ratio"},
                {"uragg", "Utility-representation aggregate"},
                {"vs", "Voter satisfaction"},
                {"disagreement", "Intergroup disagreement"}};
            for (const auto& [name, title] : titles)
                if (name == figure) chart.title = title + " by rule and strategy";
            chart.y_label = "mean " + figure;
            chart.group_labels = rep.rules;
            for (const std::string& strategy : rep.strategies) {
                plot::BarSeries series;
                series.label = strategy;
                for (const std::string& rule : rep.rules) {
                    const Stat& st = rep.stat(strategy, rule, figure);
                    series.means.push_back(st.mean);
                    series.ses.push_back(st.se);
                }
                chart.series.push_back(std::move(series));
            }
        }

        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << plot::render_svg(chart);
        if (!out.flush()) throw std::runtime_error("write failed: " + out_path);
        std::printf("wrote %s\n", out_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_demo(uint64_t seed) {
    try {
        ExperimentConfig cfg;
        cfg.master_seed = seed;
        std::printf("single replication at survey scale (seed %llu)\n",
                    static_cast<unsigned long long>(seed));
        const std::vector<RunRecord> records = run_replication(cfg, 0);
        std::printf("eligible instance found after %d attempt%s\n\n", records.front().attempts,
                    records.front().attempts == 1 ? "" : "s");
        std::string current;
        for (const RunRecord& r : records) {
            if (r.strategy != current) {
                current = r.strategy;
                std::printf("%s: utility variance %.4f, intergroup disagreement %.4f\n",
                            current.c_str(), r.variance, r.disagreement);
            }
            std::string committee;
            for (int c : r.committee) {
                if (!committee.empty()) committee += ' ';
                committee += std::to_string(c);
            }
            std::printf("  %-4s {%s}  ur %.3f  rr %.3f  uragg %.3f  vs %.2f  ejr %s  pjr %s"
                        "  minority %d\n",
                        r.rule.c_str(), committee.c_str(), r.ur, r.rr, r.uragg, r.vs,
                        r.ejr ? "yes" : "no", r.pjr ? "yes" : "no", r.minority_preserved);
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deliberation and multi-winner approval voting simulator"};
    app.require_subcommand(1);

    RunFlags run_flags;
    uint64_t run_seed = 0;
    int run_reps = 0;
    std::string run_strategies, run_rules, run_out;
    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", run_flags.config, "experiment config file")->required();
    CLI::Option* o_seed = run->add_option("--seed", run_seed, "override master_seed");
    CLI::Option* o_reps = run->add_option("--replications", run_reps, "override replications");
    CLI::Option* o_strats =
        run->add_option("--strategies", run_strategies, "comma-separated strategy list");
    CLI::Option* o_rules = run->add_option("--rules", run_rules, "comma-separated rule list");
    CLI::Option* o_out = run->add_option("--out", run_out, "output directory");
    run->add_option("--threads", run_flags.threads, "worker threads")->default_val(1);

    std::string validate_config;
    CLI::App* validate = app.add_subcommand("validate", "parse and validate a config file");
    validate->add_option("--config", validate_config, "experiment config file")->required();

    std::string report_records;
    CLI::App* report = app.add_subcommand("report", "print summary tables from raw records");
    report->add_option("records", report_records, "records.csv path")->required();

    std::string plot_records, plot_figure, plot_out = "figure.svg";
    CLI::App* plot = app.add_subcommand("plot", "render a figure from raw records");
    plot->add_option("records", plot_records, "records.csv path")->required();
    plot->add_option("--figure", plot_figure,
                     "variance|ur|rr|uragg|vs|cc_approvals|disagreement")
        ->required();
    plot->add_option("--out", plot_out, "output SVG path");

    uint64_t demo_seed = 42;
    CLI::App* demo = app.add_subcommand("demo", "narrate a single survey-scale replication");
    demo->add_option("--seed", demo_seed, "replication seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (app.got_subcommand(run)) {
        if (o_seed->count() > 0) run_flags.seed = run_seed;
        if (o_reps->count() > 0) run_flags.replications = run_reps;
        if (o_strats->count() > 0) run_flags.strategies = run_strategies;
        if (o_rules->count() > 0) run_flags.rules = run_rules;
        if (o_out->count() > 0) run_flags.out = run_out;
        return cmd_run(run_flags);
    }
    if (app.got_subcommand(validate)) return cmd_validate(validate_config);
    if (app.got_subcommand(report)) return cmd_report(report_records);
    if (app.got_subcommand(plot)) return cmd_plot(plot_records, plot_figure, plot_out);
    if (app.got_subcommand(demo)) return cmd_demo(demo_seed);
    return 2;
}
