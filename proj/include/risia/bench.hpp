#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace risia {

// One experiment campaign: a grid of instance dimensions, a list of feedback
// SNR points, the assignment strategies to compare, and a Monte Carlo run
// count. An empty dist runs full MISO-RIS instances; "uniform", "clustered"
// or "exploded" runs synthetic matrices instead (N, M, b recorded as 0).
struct CampaignConfig {
    std::string experiment;
    std::vector<std::size_t> K;
    std::vector<std::size_t> N;
    std::vector<std::size_t> M;
    std::vector<int> b;
    std::vector<double> bsc_snr_db;
    std::vector<std::string> solvers;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string dist;

    void validate() const;
};

struct ResultRow {
    std::string experiment;
    std::size_t K = 0, N = 0, M = 0;
    int b = 0;
    double bsc_snr_db = 0.0;
    std::string solver;
    double mean_loss = 0.0;
    double std_loss = 0.0;
    double mean_path_cost = 0.0;
    double mean_time_ms = 0.0;
};

inline const std::vector<std::string>& known_solvers() {
    static const std::vector<std::string> names{"natural", "random", "greedy", "2opt",
                                                "3opt",    "tsp",    "exact"};
    return names;
}

// Runs every grid point x run x solver with seeds derived deterministically
// from the master seed; results are independent of the thread count.
std::vector<ResultRow> run_campaign(const CampaignConfig& config, unsigned threads = 1);

CampaignConfig load_campaign_config(const std::string& path);
void write_campaign_config(const std::string& path, const CampaignConfig& config);

void write_result_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> load_result_csv(const std::string& path);

} // namespace risia
