// vbspool: blocking, dimensioning and pooling-gain analysis of VBS pools.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vbspool/analytic.hpp"
#include "vbspool/erlang.hpp"
#include "vbspool/io.hpp"
#include "vbspool/model.hpp"
#include "vbspool/oracle.hpp"
#include "vbspool/planner.hpp"
#include "vbspool/simulator.hpp"

namespace {

using namespace vbspool;

constexpr const char* kOutputDirEnv = "VBSPOOL_OUTPUT_DIR";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoolFlags {
    std::optional<int> m, k, n;
    std::optional<double> a, lambda, mu;
    std::string config_path;

    void attach(CLI::App& cmd) {
        cmd.add_option("--m", m, "number of VBSs (M)");
        cmd.add_option("--k", k, "r-servers per VBS (K)");
        cmd.add_option("--n", n, "c-servers in the pool (N)");
        cmd.add_option("--a", a, "offered load per VBS in Erlangs");
        cmd.add_option("--lambda", lambda, "arrival rate per VBS");
        cmd.add_option("--mu", mu, "service rate");
        cmd.add_option("--config", config_path, "key-value pool config file")
            ->check(CLI::ExistingFile);
    }

    PoolConfig resolve() const {
        PoolConfigFields fields;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            fields = parse_pool_config_fields(in);
        }
        PoolConfigFields flags{m, k, n, lambda, mu, a};
        if (a && lambda) throw UsageError("give either --a or --lambda, not both");
        fields.merge(flags);
        if (!fields.m) throw UsageError("missing --m");
        if (!fields.k) throw UsageError("missing --k");
        if (!fields.n) throw UsageError("missing --n");
        if (!fields.a && !fields.lambda) throw UsageError("missing --a (or --lambda/--mu)");
        PoolConfig config = fields.resolve();
        if (config.clamped()) {
            std::cerr << "warning: n=" << config.requested_n_comp() << " exceeds m*k="
                      << config.max_comp() << "; clamped to " << config.n_comp() << '\n';
        }
        return config;
    }
};

struct Output {
    std::string format = "human";
    std::string path;

    void attach(CLI::App& cmd) {
        cmd.add_option("--format", format, "human, csv or json")
            ->check(CLI::IsMember({"human", "csv", "json"}));
        cmd.add_option("--output", path, "write to this file instead of standard output");
    }

    template <typename Fn>
    void emit(Fn&& write) const {
        if (path.empty()) {
            write(std::cout);
            return;
        }
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        write(out);
    }
};

Metadata pool_metadata(std::string command, const PoolConfig& config) {
    return {{"command", std::move(command)},
            {"m", std::to_string(config.m_vbs())},
            {"k", std::to_string(config.k_radio())},
            {"n", std::to_string(config.n_comp())},
            {"lambda", format_number(config.traffic().lambda())},
            {"mu", format_number(config.traffic().mu())},
            {"a", format_number(config.load())}};
}

std::string describe(const PoolConfig& config) {
    return "M=" + std::to_string(config.m_vbs()) + " K=" + std::to_string(config.k_radio()) +
           " N=" + std::to_string(config.n_comp()) + " a=" + format_number(config.load());
}

std::string human(double value) {
    std::ostringstream s;
    s << std::setprecision(6) << value;
    return s.str();
}

void write_blocking(std::ostream& out, const std::string& format, const PoolConfig& config,
                    const BlockingReport& report) {
    const auto meta = pool_metadata("blocking", config);
    if (format == "csv") {
        out << metadata_comment(meta) << '\n'
            << "m,k,n,a,p_radio,p_comp,p_total\n"
            << config.m_vbs() << ',' << config.k_radio() << ',' << config.n_comp() << ','
            << format_number(config.load()) << ',' << format_number(report.p_radio) << ','
            << format_number(report.p_comp) << ',' << format_number(report.p_total) << '\n';
    } else if (format == "json") {
        nlohmann::json j = {{"metadata", metadata_json(meta)}, {"result", blocking_json(report)}};
        out << j.dump(2) << '\n';
    } else {
        out << "pool: " << describe(config) << '\n'
            << "P_br  radio blocking          " << human(report.p_radio) << '\n'
            << "P_bc  computational blocking  " << human(report.p_comp) << '\n'
            << "P_b   total blocking          " << human(report.p_total) << '\n';
        if (report.underflow) out << "note: probabilities below 1e-308 reported as 0\n";
    }
}

std::string sweep_file_stem(int m, double a, double pth) {
    return "sweep_m" + std::to_string(m) + "_a" + format_number(a) + "_pth" + format_number(pth);
}

std::filesystem::path default_output_dir() {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') return dir;
    return ".";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blocking and pooling-gain analysis for virtual base station pools"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // blocking
    auto* blocking = app.add_subcommand("blocking", "exact blocking probabilities");
    PoolFlags blocking_pool;
    Output blocking_out;
    blocking_pool.attach(*blocking);
    blocking_out.attach(*blocking);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "dimension K, sweep N, report pooling gain");
    std::vector<int> sweep_m;
    double sweep_a = 0.0, sweep_pth = 0.0, sweep_ceiling = 0.5;
    bool sweep_full = false;
    std::string sweep_dir;
    Output sweep_out;
    sweep->add_option("--m", sweep_m, "pool size; repeat for several")->required();
    sweep->add_option("--a", sweep_a, "offered load per VBS in Erlangs")->required();
    sweep->add_option("--pth", sweep_pth, "blocking threshold")->required();
    sweep->add_flag("--full-descent", sweep_full, "evaluate every N down to 0");
    sweep->add_option("--ceiling", sweep_ceiling, "early-stop blocking level (default 0.5)");
    sweep->add_option("--out-dir", sweep_dir,
                      std::string("directory for CSV/JSON files (default $") + kOutputDirEnv +
                          " or .)");
    sweep_out.attach(*sweep);

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo blocking estimate");
    PoolFlags sim_pool;
    Output sim_out;
    std::uint64_t sim_sessions = 0, sim_seed = 1;
    std::optional<std::uint64_t> sim_warmup;
    int sim_reps = 10;
    std::string sim_trace;
    sim_pool.attach(*simulate_cmd);
    sim_out.attach(*simulate_cmd);
    simulate_cmd->add_option("--sessions", sim_sessions, "offered sessions per replication")
        ->required();
    simulate_cmd->add_option("--warmup", sim_warmup, "discarded sessions (default 10%)");
    simulate_cmd->add_option("--reps", sim_reps, "independent replications (default 10)");
    simulate_cmd->add_option("--seed", sim_seed, "random seed (default 1)");
    simulate_cmd->add_option("--trace", sim_trace, "write replication 0's event trace as CSV");

    // limit
    auto* limit = app.add_subcommand("limit", "large-pool utilization bounds");
    double limit_a = 0.0;
    std::optional<double> limit_pth;
    std::optional<int> limit_k;
    Output limit_out;
    limit->add_option("--a", limit_a, "offered load per VBS in Erlangs")->required();
    limit->add_option("--pth", limit_pth, "blocking threshold");
    limit->add_option("--k", limit_k, "r-servers per VBS (default: dimensioned from --pth)");
    limit_out.attach(*limit);

    // dimension
    auto* dimension = app.add_subcommand("dimension", "minimum r-servers for a threshold");
    double dim_a = 0.0, dim_pth = 0.0;
    Output dim_out;
    dimension->add_option("--a", dim_a, "offered load per VBS in Erlangs")->required();
    dimension->add_option("--pth", dim_pth, "blocking threshold")->required();
    dim_out.attach(*dimension);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "cross-check the recursion by enumeration");
    PoolFlags oracle_pool;
    Output oracle_out;
    std::uint64_t oracle_cap = kDefaultEnumerationCap;
    std::string oracle_edges;
    oracle_pool.attach(*oracle);
    oracle_out.attach(*oracle);
    oracle->add_option("--cap", oracle_cap, "maximum number of states");
    oracle->add_option("--dump-edges", oracle_edges, "write the transition list to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (active == blocking) {
            const auto config = blocking_pool.resolve();
            const auto report = compute_blocking(config);
            blocking_out.emit([&](std::ostream& out) {
                write_blocking(out, blocking_out.format, config, report);
            });
        } else if (active == sweep) {
            const std::filesystem::path dir =
                sweep_dir.empty() ? default_output_dir() : std::filesystem::path(sweep_dir);
            std::filesystem::create_directories(dir);
            const SweepOptions options{sweep_full, sweep_ceiling};
            const int k = dimension_radio(sweep_a, sweep_pth);
            int max_m = 1;
            for (int m : sweep_m) {
                if (m < 1) throw std::invalid_argument("pool sizes must be at least 1");
                max_m = std::max(max_m, m);
            }
            const RecursionTable table(k, sweep_a, max_m);
            nlohmann::json summaries = nlohmann::json::array();
            std::vector<SweepResult> results;
            for (int m : sweep_m) {
                auto result = dimension_pool(m, sweep_pth, table, options);
                const Metadata meta = {{"command", "sweep"},
                                       {"m", std::to_string(m)},
                                       {"k", std::to_string(k)},
                                       {"a", format_number(sweep_a)},
                                       {"pth", format_number(sweep_pth)},
                                       {"full_descent", sweep_full ? "true" : "false"},
                                       {"ceiling", format_number(sweep_ceiling)}};
                const auto csv_path = dir / (sweep_file_stem(m, sweep_a, sweep_pth) + ".csv");
                std::ofstream csv(csv_path);
                if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
                write_sweep_csv(csv, result, meta);
                auto summary = sweep_summary_json(result);
                summary["csv"] = csv_path.filename().string();
                summaries.push_back(std::move(summary));
                results.push_back(std::move(result));
            }
            const Metadata run_meta = {{"command", "sweep"},
                                       {"k", std::to_string(k)},
                                       {"a", format_number(sweep_a)},
                                       {"pth", format_number(sweep_pth)},
                                       {"full_descent", sweep_full ? "true" : "false"},
                                       {"ceiling", format_number(sweep_ceiling)}};
            const nlohmann::json doc = {{"metadata", metadata_json(run_meta)},
                                        {"sweeps", summaries}};
            const auto json_path = dir / ("sweep_summary_a" + format_number(sweep_a) + "_pth" +
                                          format_number(sweep_pth) + ".json");
            std::ofstream(json_path) << doc.dump(2) << '\n';

            sweep_out.emit([&](std::ostream& out) {
                if (sweep_out.format == "json") {
                    out << doc.dump(2) << '\n';
                    return;
                }
                if (sweep_out.format == "csv") {
                    out << metadata_comment(run_meta) << '\n'
                        << "m,k,n_max,n_min,normalized_n_min,pooling_gain,knee\n";
                    for (const auto& s : summaries) {
                        out << s["m"] << ',' << s["k"] << ',' << s["n_max"] << ',' << s["n_min"]
                            << ',' << format_number(s["normalized_n_min"].get<double>()) << ','
                            << format_number(s["pooling_gain"].get<double>()) << ','
                            << (s.contains("knee") ? s["knee"].dump() : "") << '\n';
                    }
                    return;
                }
                const auto& first = results.front();
                out << "a=" << format_number(sweep_a) << " pth=" << format_number(sweep_pth)
                    << " -> K=" << k << ", limit bounds [" << human(first.limit_bounds.lower)
                    << ", " << human(first.limit_bounds.upper)
                    << "], asymptote " << human(first.asymptote) << '\n';
                out << "     M   N_max   N_min  N_min/MK    gain   knee\n";
                for (const auto& s : summaries) {
                    out << std::setw(6) << s["m"].get<int>() << std::setw(8)
                        << s["n_max"].get<int>() << std::setw(8) << s["n_min"].get<int>()
                        << std::setw(10) << human(s["normalized_n_min"].get<double>())
                        << std::setw(8) << human(s["pooling_gain"].get<double>()) << std::setw(7)
                        << (s.contains("knee") ? std::to_string(s["knee"].get<int>()) : "-")
                        << '\n';
                }
                out << "files written to " << dir.string() << '\n';
            });
        } else if (active == simulate_cmd) {
            const auto config = sim_pool.resolve();
            SimConfig sim = SimConfig::with_default_warmup(config, sim_sessions, sim_reps, sim_seed);
            if (sim_warmup) sim.warmup_sessions = *sim_warmup;
            const auto estimate = simulate(sim);
            if (!sim_trace.empty()) {
                std::ofstream trace(sim_trace);
                if (!trace) throw std::runtime_error("cannot write " + sim_trace);
                trace << kTraceCsvHeader << '\n';
                simulate_trace(sim, trace_csv_sink(trace));
            }
            auto meta = pool_metadata("simulate", config);
            meta["sessions"] = std::to_string(sim.horizon_sessions);
            meta["warmup"] = std::to_string(sim.warmup_sessions);
            meta["reps"] = std::to_string(sim.replications);
            meta["seed"] = std::to_string(sim.seed);
            sim_out.emit([&](std::ostream& out) {
                const auto& hw = estimate.ci_halfwidth;
                if (sim_out.format == "json") {
                    const nlohmann::json j = {{"metadata", metadata_json(meta)},
                                              {"result", estimate_json(estimate)}};
                    out << j.dump(2) << '\n';
                } else if (sim_out.format == "csv") {
                    out << metadata_comment(meta) << '\n'
                        << "quantity,estimate,ci95_halfwidth\n"
                        << "p_radio," << format_number(estimate.p_radio_hat) << ','
                        << format_number(hw.radio) << '\n'
                        << "p_comp," << format_number(estimate.p_comp_hat) << ','
                        << format_number(hw.comp) << '\n'
                        << "p_total," << format_number(estimate.p_total_hat) << ','
                        << format_number(hw.total) << '\n';
                } else {
                    out << "pool: " << describe(config) << '\n'
                        << "replications " << sim.replications << " x " << sim.horizon_sessions
                        << " sessions (warmup " << sim.warmup_sessions << "), seed " << sim.seed
                        << '\n'
                        << "P_br  " << human(estimate.p_radio_hat) << " +/- " << human(hw.radio)
                        << '\n'
                        << "P_bc  " << human(estimate.p_comp_hat) << " +/- " << human(hw.comp)
                        << '\n'
                        << "P_b   " << human(estimate.p_total_hat) << " +/- " << human(hw.total)
                        << "  (95% CI)\n";
                }
            });
        } else if (active == limit) {
            if (!limit_k && !limit_pth) throw UsageError("limit needs --pth, --k, or both");
            const int k = limit_k ? *limit_k : dimension_radio(limit_a, *limit_pth);
            // Without a threshold the achieved blocking of K servers is the tightest one.
            const double pth = limit_pth ? *limit_pth : erlang_b(k, limit_a);
            const auto bounds = large_pool_limit(k, limit_a, pth);
            const double exact = asymptotic_utilization(k, limit_a);
            const Metadata meta = {{"command", "limit"},
                                   {"a", format_number(limit_a)},
                                   {"k", std::to_string(k)},
                                   {"pth", format_number(pth)}};
            limit_out.emit([&](std::ostream& out) {
                if (limit_out.format == "json") {
                    const nlohmann::json j = {
                        {"metadata", metadata_json(meta)},
                        {"result",
                         {{"k", k},
                          {"lower", round_significant(bounds.lower)},
                          {"upper", round_significant(bounds.upper)},
                          {"asymptote", round_significant(exact)}}}};
                    out << j.dump(2) << '\n';
                } else if (limit_out.format == "csv") {
                    out << metadata_comment(meta) << '\n'
                        << "k,lower,upper,asymptote\n"
                        << k << ',' << format_number(bounds.lower) << ','
                        << format_number(bounds.upper) << ',' << format_number(exact) << '\n';
                } else {
                    out << "K = " << k << '\n'
                        << "utilization bounds [" << human(bounds.lower) << ", "
                        << human(bounds.upper) << "]\n"
                        << "exact asymptote E[k]/K = " << human(exact) << '\n';
                }
            });
        } else if (active == dimension) {
            const int k = dimension_radio(dim_a, dim_pth);
            const double achieved = erlang_b(k, dim_a);
            const Metadata meta = {{"command", "dimension"},
                                   {"a", format_number(dim_a)},
                                   {"pth", format_number(dim_pth)}};
            dim_out.emit([&](std::ostream& out) {
                if (dim_out.format == "json") {
                    const nlohmann::json j = {
                        {"metadata", metadata_json(meta)},
                        {"result", {{"k", k}, {"erlang_b", round_significant(achieved)}}}};
                    out << j.dump(2) << '\n';
                } else if (dim_out.format == "csv") {
                    out << metadata_comment(meta) << '\n'
                        << "k,erlang_b\n"
                        << k << ',' << format_number(achieved) << '\n';
                } else {
                    out << "K = " << k << " (Erlang-B " << human(achieved) << ")\n";
                }
            });
        } else if (active == oracle) {
            const auto config = oracle_pool.resolve();
            const auto chain = build_generator(config, oracle_cap);
            const auto pi = solve_stationary(chain);
            const auto direct = blocking_direct(chain, pi);
            const auto recursive = compute_blocking(config);
            const auto rel = [](double x, double y) {
                const double scale = std::max(std::abs(x), std::abs(y));
                return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
            };
            const double deviation =
                std::max({rel(direct.p_radio, recursive.p_radio),
                          rel(direct.p_comp, recursive.p_comp),
                          rel(direct.p_total, recursive.p_total)});
            const double detailed = detailed_balance_residual(chain, pi);
            if (!oracle_edges.empty()) {
                std::ofstream edges(oracle_edges);
                if (!edges) throw std::runtime_error("cannot write " + oracle_edges);
                write_edge_list(edges, chain);
            }
            const auto meta = pool_metadata("oracle", config);
            oracle_out.emit([&](std::ostream& out) {
                if (oracle_out.format == "json") {
                    const nlohmann::json j = {
                        {"metadata", metadata_json(meta)},
                        {"result",
                         {{"states", chain.states.size()},
                          {"transitions", chain.transitions.size()},
                          {"recursion", blocking_json(recursive)},
                          {"enumeration", blocking_json(direct)},
                          {"max_relative_deviation", round_significant(deviation)},
                          {"detailed_balance_residual", round_significant(detailed)}}}};
                    out << j.dump(2) << '\n';
                } else if (oracle_out.format == "csv") {
                    out << metadata_comment(meta) << '\n'
                        << "source,p_radio,p_comp,p_total\n"
                        << "recursion," << format_number(recursive.p_radio) << ','
                        << format_number(recursive.p_comp) << ','
                        << format_number(recursive.p_total) << '\n'
                        << "enumeration," << format_number(direct.p_radio) << ','
                        << format_number(direct.p_comp) << ',' << format_number(direct.p_total)
                        << '\n';
                } else {
                    out << "pool: " << describe(config) << ", " << chain.states.size()
                        << " states, " << chain.transitions.size() << " transitions\n"
                        << "              P_br                P_bc                P_b\n"
                        << "recursion     " << std::setw(20) << std::left
                        << format_number(recursive.p_radio) << std::setw(20)
                        << format_number(recursive.p_comp) << format_number(recursive.p_total)
                        << '\n'
                        << "enumeration   " << std::setw(20) << format_number(direct.p_radio)
                        << std::setw(20) << format_number(direct.p_comp)
                        << format_number(direct.p_total) << std::right << '\n'
                        << "max relative deviation     " << human(deviation) << '\n'
                        << "detailed balance residual  " << human(detailed) << '\n';
                }
            });
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << active->help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
