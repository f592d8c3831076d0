#include "risia/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "risia/assignment.hpp"
#include "risia/baselines.hpp"
#include "risia/codebook.hpp"
#include "risia/errors.hpp"
#include "risia/io.hpp"
#include "risia/loss.hpp"
#include "risia/parallel.hpp"
#include "risia/rng.hpp"
#include "risia/solver.hpp"

namespace risia {

using nlohmann::json;

void CampaignConfig::validate() const {
    if (experiment.empty()) throw std::invalid_argument("campaign: experiment id required");
    if (K.empty()) throw std::invalid_argument("campaign: K grid must be nonempty");
    if (dist.empty() && (N.empty() || M.empty() || b.empty()))
        throw std::invalid_argument("campaign: N, M, b grids must be nonempty");
    if (!dist.empty()) synth_dist_from_name(dist);  // throws on unknown names
    if (bsc_snr_db.empty()) throw std::invalid_argument("campaign: bsc_snr_db must be nonempty");
    if (solvers.empty()) throw std::invalid_argument("campaign: solver list must be nonempty");
    for (const auto& s : solvers) {
        const auto& known = known_solvers();
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw std::invalid_argument("campaign: unknown solver: " + s);
    }
    for (std::size_t k : K) {
        if (!std::has_single_bit(k))
            throw std::invalid_argument("campaign: K must be a power of two");
    }
    if (runs < 1) throw std::invalid_argument("campaign: runs must be >= 1");
}

namespace {

struct GridPoint {
    std::size_t K, N, M;
    int b;
};

struct SolverOutcome {
    std::vector<double> loss_at_snr;
    double path_cost = 0.0;
    double time_ms = 0.0;
};

// One strategy applied to one instance: returns the permutation it induces
// and the label assignment used for evaluation.
std::pair<Permutation, Assignment> apply_solver(const std::string& name, const LossMatrix& sym,
                                                std::uint64_t run_seed) {
    const std::size_t K = sym.K;
    if (name == "natural") {
        return {natural_order(K), natural_assignment(K)};
    }
    if (name == "random") {
        Assignment a = random_assignment(K, mix_seed(run_seed, 0x7a2du));
        return {order_by_label(a), std::move(a)};
    }
    Permutation pi;
    if (name == "greedy") {
        pi = greedy_order(sym, 0);
    } else if (name == "2opt") {
        pi = two_opt(sym, random_order(K, mix_seed(run_seed, 0x201u)));
    } else if (name == "3opt") {
        pi = three_opt(sym, random_order(K, mix_seed(run_seed, 0x301u)));
    } else if (name == "tsp") {
        SolverParams p = SolverParams::defaults_for(K);
        p.seed = mix_seed(run_seed, 0x75bu);
        pi = solve(sym, p, 1).best_pi;
    } else if (name == "exact") {
        pi = exact_optimum(sym).first;
    } else {
        throw std::invalid_argument("unknown solver: " + name);
    }
    return {pi, assign_from_path(pi)};
}

} // namespace

std::vector<ResultRow> run_campaign(const CampaignConfig& config, unsigned threads) {
    config.validate();
    const bool synthetic = !config.dist.empty();
    const SynthDist dist = synthetic ? synth_dist_from_name(config.dist) : SynthDist::Uniform;

    std::vector<GridPoint> grid;
    if (synthetic) {
        for (std::size_t k : config.K) grid.push_back({k, 0, 0, 0});
    } else {
        for (std::size_t k : config.K)
            for (std::size_t n : config.N)
                for (std::size_t m : config.M)
                    for (int b : config.b) grid.push_back({k, n, m, b});
    }

    std::vector<double> qs(config.bsc_snr_db.size());
    for (std::size_t i = 0; i < qs.size(); ++i) qs[i] = ber_from_snr_db(config.bsc_snr_db[i]);

    // outcomes[grid][run][solver]
    const std::size_t items = grid.size() * config.runs;
    std::vector<std::vector<SolverOutcome>> outcomes(items);

    parallel_for(items, threads, [&](std::size_t item) {
        const std::size_t g = item / config.runs;
        const std::size_t run = item % config.runs;
        const GridPoint& pt = grid[g];
        const std::uint64_t run_seed = mix_seed(config.seed, g, run);

        LossMatrix raw, sym;
        if (synthetic) {
            sym = synth_matrix(dist, pt.K, mix_seed(run_seed, 0x9e1u));
            raw = sym;
        } else {
            const ChannelSet ch = generate_channels(pt.K, pt.N, pt.M, mix_seed(run_seed, 0xc4au));
            const Codebook cb = build_codebook(ch, pt.b, mix_seed(run_seed, 0xcb00u));
            raw = build_loss_matrix(ch, cb, false);
            sym = raw.symmetrize();
        }

        auto& per_solver = outcomes[item];
        per_solver.resize(config.solvers.size());
        for (std::size_t s = 0; s < config.solvers.size(); ++s) {
            const auto start = std::chrono::steady_clock::now();
            const auto [pi, assignment] = apply_solver(config.solvers[s], sym, run_seed);
            per_solver[s].time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
            per_solver[s].path_cost = path_cost(sym, pi);
            per_solver[s].loss_at_snr.resize(qs.size());
            for (std::size_t qi = 0; qi < qs.size(); ++qi)
                per_solver[s].loss_at_snr[qi] = expected_loss(raw, assignment, qs[qi]);
        }
    });

    std::vector<ResultRow> rows;
    rows.reserve(grid.size() * config.bsc_snr_db.size() * config.solvers.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t qi = 0; qi < config.bsc_snr_db.size(); ++qi) {
            for (std::size_t s = 0; s < config.solvers.size(); ++s) {
                double sum = 0.0, sum_sq = 0.0, sum_pc = 0.0, sum_ms = 0.0;
                for (std::size_t run = 0; run < config.runs; ++run) {
                    const auto& o = outcomes[g * config.runs + run][s];
                    sum += o.loss_at_snr[qi];
                    sum_pc += o.path_cost;
                    sum_ms += o.time_ms;
                }
                const auto n = static_cast<double>(config.runs);
                const double mean = sum / n;
                for (std::size_t run = 0; run < config.runs; ++run) {
                    const double v = outcomes[g * config.runs + run][s].loss_at_snr[qi] - mean;
                    sum_sq += v * v;
                }
                ResultRow row;
                row.experiment = config.experiment;
                row.K = grid[g].K;
                row.N = grid[g].N;
                row.M = grid[g].M;
                row.b = grid[g].b;
                row.bsc_snr_db = config.bsc_snr_db[qi];
                row.solver = config.solvers[s];
                row.mean_loss = mean;
                row.std_loss = config.runs > 1 ? std::sqrt(sum_sq / (n - 1.0)) : 0.0;
                row.mean_path_cost = sum_pc / n;
                row.mean_time_ms = sum_ms / n;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    CampaignConfig c;
    c.experiment = doc.at("experiment").get<std::string>();
    c.K = doc.at("K").get<std::vector<std::size_t>>();
    if (doc.contains("N")) c.N = doc.at("N").get<std::vector<std::size_t>>();
    if (doc.contains("M")) c.M = doc.at("M").get<std::vector<std::size_t>>();
    if (doc.contains("b")) c.b = doc.at("b").get<std::vector<int>>();
    c.bsc_snr_db = doc.at("bsc_snr_db").get<std::vector<double>>();
    c.solvers = doc.at("solvers").get<std::vector<std::string>>();
    c.runs = doc.at("runs").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("out_dir")) c.out_dir = doc.at("out_dir").get<std::string>();
    if (doc.contains("dist")) c.dist = doc.at("dist").get<std::string>();
    c.validate();
    return c;
}

void write_campaign_config(const std::string& path, const CampaignConfig& c) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    json doc;
    doc["experiment"] = c.experiment;
    doc["K"] = c.K;
    doc["N"] = c.N;
    doc["M"] = c.M;
    doc["b"] = c.b;
    doc["bsc_snr_db"] = c.bsc_snr_db;
    doc["solvers"] = c.solvers;
    doc["runs"] = c.runs;
    doc["seed"] = c.seed;
    doc["out_dir"] = c.out_dir;
    if (!c.dist.empty()) doc["dist"] = c.dist;
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_result_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "experiment,K,N,M,b,bsc_snr_db,solver,mean_loss,std_loss,mean_path_cost,"
           "mean_time_ms\n";
    for (const auto& r : rows) {
        out << r.experiment << ',' << r.K << ',' << r.N << ',' << r.M << ',' << r.b << ','
            << format_shortest(r.bsc_snr_db) << ',' << r.solver << ','
            << format_shortest(r.mean_loss) << ',' << format_shortest(r.std_loss) << ','
            << format_shortest(r.mean_path_cost) << ',' << format_shortest(r.mean_time_ms)
            << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

std::vector<ResultRow> load_result_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty result csv: " + path);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        ResultRow r;
        auto next = [&]() -> std::string {
            if (!std::getline(ss, cell, ',')) throw IoError("short result row: " + path);
            return cell;
        };
        r.experiment = next();
        r.K = std::stoull(next());
        r.N = std::stoull(next());
        r.M = std::stoull(next());
        r.b = std::stoi(next());
        r.bsc_snr_db = std::stod(next());
        r.solver = next();
        r.mean_loss = std::stod(next());
        r.std_loss = std::stod(next());
        r.mean_path_cost = std::stod(next());
        r.mean_time_ms = std::stod(next());
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace risia
