#pragma once

#include <string>
#include <utility>

#include "risia/assignment.hpp"
#include "risia/codebook.hpp"
#include "risia/loss.hpp"
#include "risia/solver.hpp"

namespace risia {

// 17 significant digits: enough for exact double round-trips.
std::string format_g17(double v);
// Shortest decimal that round-trips (used in result CSVs).
std::string format_shortest(double v);

struct EvalResult {
    std::size_t K = 0;
    double q = 0.0;
    bool has_snr_db = false;
    double snr_db = 0.0;
    double expected_loss = 0.0;
};

// Instance document: {meta:{K,N,M,b,P,sigma2,seed}, G, h_r, codewords} with
// G a row-major list of [re, im] pairs.
void write_instance(const std::string& path, const ChannelSet& channels,
                    const Codebook& codebook);
std::pair<ChannelSet, Codebook> load_instance(const std::string& path);

// K rows of K comma-separated values, plus a "<path>.meta.json" sidecar
// {K, symmetrized, source, seed}.
void write_matrix(const std::string& csv_path, const LossMatrix& matrix);
LossMatrix load_matrix(const std::string& csv_path);

void write_solver_params(const std::string& path, const SolverParams& params);
SolverParams load_solver_params(const std::string& path);

void write_report(const std::string& path, const SolverReport& report);
SolverReport load_report(const std::string& path);

void write_permutation(const std::string& path, std::span<const int> pi);
Permutation load_permutation(const std::string& path);

void write_assignment(const std::string& path, const Assignment& assignment);
Assignment load_assignment(const std::string& path);

void write_eval(const std::string& path, const EvalResult& result);
EvalResult load_eval(const std::string& path);

} // namespace risia
