// risia command line: generate MISO-RIS instances, build loss matrices,
// solve codeword orderings, evaluate assignments under feedback bit errors,
// and run benchmark campaigns.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "risia/assignment.hpp"
#include "risia/baselines.hpp"
#include "risia/bench.hpp"
#include "risia/codebook.hpp"
#include "risia/errors.hpp"
#include "risia/io.hpp"
#include "risia/loss.hpp"
#include "risia/parallel.hpp"
#include "risia/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidArgs = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitIo = 4;

struct GlobalOpts {
    std::uint64_t seed = 0;
    unsigned threads = risia::default_threads();
    bool quiet = false;
};

void info(const GlobalOpts& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS codebook index-assignment toolkit"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--seed", global.seed, "Master RNG seed");
    app.add_option("--threads", global.threads, "Worker threads");
    app.add_flag("--quiet", global.quiet, "Suppress progress output");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a MISO-RIS instance (channels + codebook)");
    std::size_t gen_K = 64, gen_N = 64, gen_M = 8;
    int gen_b = 4;
    double gen_P = 1.0, gen_sigma2 = 1e-12;
    std::string gen_out;
    gen->add_option("--K", gen_K, "Codewords / users");
    gen->add_option("--N", gen_N, "Reflecting units");
    gen->add_option("--M", gen_M, "Base-station antennas");
    gen->add_option("--b", gen_b, "Quantization bits per unit");
    gen->add_option("--P", gen_P, "Transmit power (W)");
    gen->add_option("--sigma2", gen_sigma2, "Noise power (W)");
    gen->add_option("--out", gen_out, "Output instance JSON")->required();

    // loss
    auto* loss_cmd = app.add_subcommand("loss", "Compute the mismatch-loss matrix of an instance");
    std::string loss_instance, loss_out;
    bool loss_symmetrize = false;
    loss_cmd->add_option("--instance", loss_instance, "Instance JSON")->required();
    loss_cmd->add_option("--out", loss_out, "Output matrix CSV")->required();
    loss_cmd->add_flag("--symmetrize", loss_symmetrize, "Average with the transpose");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Order codewords by a TSP solver");
    std::string solve_matrix, solve_solver = "tsp", solve_params, solve_out;
    std::string solve_perm_out, solve_assignment_out;
    bool solve_seed_given = false;
    std::uint64_t solve_seed = 0;
    solve_cmd->add_option("--matrix", solve_matrix, "Loss matrix CSV")->required();
    solve_cmd->add_option("--solver", solve_solver, "natural|random|greedy|2opt|3opt|tsp|exact");
    solve_cmd->add_option("--params", solve_params, "Solver params JSON (tsp only)");
    solve_cmd->add_option("--seed", solve_seed, "Solver seed")->each([&](const std::string&) {
        solve_seed_given = true;
    });
    solve_cmd->add_option("--out", solve_out, "Output solver report JSON")->required();
    solve_cmd->add_option("--perm-out", solve_perm_out, "Also write the bare permutation JSON");
    solve_cmd->add_option("--assignment-out", solve_assignment_out,
                          "Also write the Gray-coded assignment JSON");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Expected SNR loss under single-bit label errors");
    std::string eval_matrix, eval_assignment, eval_path, eval_out;
    double eval_snr_db = 0.0, eval_q = 0.0;
    bool eval_snr_given = false, eval_q_given = false;
    eval_cmd->add_option("--matrix", eval_matrix, "Loss matrix CSV (raw, unsymmetrized)")
        ->required();
    eval_cmd->add_option("--assignment", eval_assignment, "Assignment JSON");
    eval_cmd->add_option("--path", eval_path, "Permutation JSON (Gray labels applied)");
    eval_cmd->add_option("--bsc-snr-db", eval_snr_db, "Feedback channel SNR (dB)")
        ->each([&](const std::string&) { eval_snr_given = true; });
    eval_cmd->add_option("--q", eval_q, "Bit error probability")->each([&](const std::string&) {
        eval_q_given = true;
    });
    eval_cmd->add_option("--out", eval_out, "Output JSON")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic edge-weight matrix");
    std::string synth_dist = "uniform", synth_out;
    std::size_t synth_K = 64;
    synth_cmd->add_option("--dist", synth_dist, "uniform|clustered|exploded");
    synth_cmd->add_option("--K", synth_K, "Matrix size");
    synth_cmd->add_option("--out", synth_out, "Output matrix CSV")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark campaign from a config file");
    std::string bench_config, bench_out;
    bench_cmd->add_option("--config", bench_config, "Campaign config JSON")->required();
    bench_cmd->add_option("--out", bench_out, "Result CSV (default <out_dir>/<experiment>.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidArgs;
    }

    try {
        if (*gen) {
            const auto ch = risia::generate_channels(gen_K, gen_N, gen_M, global.seed, gen_P,
                                                     gen_sigma2);
            const auto cb = risia::build_codebook(ch, gen_b, risia::mix_seed(global.seed, 1));
            risia::write_instance(gen_out, ch, cb);
            info(global, "wrote instance " + gen_out);
        } else if (*loss_cmd) {
            const auto [ch, cb] = risia::load_instance(loss_instance);
            const auto m = risia::build_loss_matrix(ch, cb, loss_symmetrize, global.threads);
            risia::write_matrix(loss_out, m);
            info(global, "wrote matrix " + loss_out);
        } else if (*solve_cmd) {
            const auto m = risia::load_matrix(solve_matrix);
            const std::uint64_t seed = solve_seed_given ? solve_seed : global.seed;
            risia::SolverReport report;
            const auto t0 = std::chrono::steady_clock::now();
            if (solve_solver == "tsp") {
                risia::SolverParams params = solve_params.empty()
                                                 ? risia::SolverParams::defaults_for(m.K)
                                                 : risia::load_solver_params(solve_params);
                if (solve_seed_given || solve_params.empty()) params.seed = seed;
                report = risia::solve(m, params, global.threads);
            } else {
                risia::Permutation pi;
                if (solve_solver == "natural") {
                    pi = risia::natural_order(m.K);
                } else if (solve_solver == "random") {
                    pi = risia::random_order(m.K, seed);
                } else if (solve_solver == "greedy") {
                    pi = risia::greedy_order(m, 0);
                } else if (solve_solver == "2opt") {
                    pi = risia::two_opt(m, risia::random_order(m.K, seed));
                } else if (solve_solver == "3opt") {
                    pi = risia::three_opt(m, risia::random_order(m.K, seed));
                } else if (solve_solver == "exact") {
                    pi = risia::exact_optimum(m).first;
                } else {
                    throw std::invalid_argument("unknown solver: " + solve_solver);
                }
                report.best_pi = std::move(pi);
                report.best_cost = risia::path_cost(m, report.best_pi);
                report.cost_trace = {report.best_cost};
                report.wall_time_ms = std::chrono::duration<double, std::milli>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count();
            }
            risia::write_report(solve_out, report);
            if (!solve_perm_out.empty()) risia::write_permutation(solve_perm_out, report.best_pi);
            if (!solve_assignment_out.empty()) {
                const auto assignment = risia::assign_from_path(report.best_pi);
                risia::write_assignment(solve_assignment_out, assignment);
                if (!global.quiet) {
                    const unsigned bits = assignment.bits();
                    for (std::size_t k = 0; k < report.best_pi.size(); ++k) {
                        std::string label(bits, '0');
                        const auto g = assignment.label_of[static_cast<std::size_t>(
                            report.best_pi[k])];
                        for (unsigned b = 0; b < bits; ++b)
                            if (g & (1u << (bits - 1 - b))) label[b] = '1';
                        std::cerr << label << " -> codeword " << report.best_pi[k] << '\n';
                    }
                }
            }
            info(global, "best cost " + risia::format_shortest(report.best_cost));
        } else if (*eval_cmd) {
            const auto m = risia::load_matrix(eval_matrix);
            risia::Assignment assignment;
            if (!eval_assignment.empty()) {
                assignment = risia::load_assignment(eval_assignment);
            } else if (!eval_path.empty()) {
                assignment = risia::assign_from_path(risia::load_permutation(eval_path));
            } else {
                throw std::invalid_argument("eval: need --assignment or --path");
            }
            risia::EvalResult result;
            result.K = m.K;
            if (eval_q_given) {
                result.q = eval_q;
                if (eval_snr_given)
                    std::cerr << "warning: both --q and --bsc-snr-db given; using explicit --q\n";
            } else if (eval_snr_given) {
                result.q = risia::ber_from_snr_db(eval_snr_db);
                result.has_snr_db = true;
                result.snr_db = eval_snr_db;
            } else {
                throw std::invalid_argument("eval: need --q or --bsc-snr-db");
            }
            result.expected_loss = risia::expected_loss(m, assignment, result.q);
            risia::write_eval(eval_out, result);
            info(global, "expected loss " + risia::format_shortest(result.expected_loss));
        } else if (*synth_cmd) {
            const auto m = risia::synth_matrix(risia::synth_dist_from_name(synth_dist), synth_K,
                                               global.seed);
            risia::write_matrix(synth_out, m);
            info(global, "wrote matrix " + synth_out);
        } else if (*bench_cmd) {
            auto config = risia::load_campaign_config(bench_config);
            if (config.out_dir.empty()) config.out_dir = ".";
            const auto rows = risia::run_campaign(config, global.threads);
            std::string out = bench_out;
            if (out.empty()) {
                std::filesystem::create_directories(config.out_dir);
                out = config.out_dir + "/" + config.experiment + ".csv";
            }
            risia::write_result_csv(out, rows);
            info(global, "wrote " + std::to_string(rows.size()) + " rows to " + out);
        }
    } catch (const risia::DegenerateInstanceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const risia::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
