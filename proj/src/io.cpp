#include "risia/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "risia/errors.hpp"

namespace risia {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_shortest(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return doc;
}

void write_complex_pair(std::ostream& out, const cplx& v) {
    out << '[' << format_g17(v.real()) << ',' << format_g17(v.imag()) << ']';
}

cplx read_complex_pair(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

void write_instance(const std::string& path, const ChannelSet& ch, const Codebook& cb) {
    if (cb.size() != ch.num_users || cb.num_units != ch.num_units)
        throw std::invalid_argument("write_instance: channels/codebook mismatch");
    auto out = open_out(path);
    out << "{\n\"meta\":{\"K\":" << ch.num_users << ",\"N\":" << ch.num_units
        << ",\"M\":" << ch.num_antennas << ",\"b\":" << cb.bits
        << ",\"P\":" << format_g17(ch.tx_power) << ",\"sigma2\":" << format_g17(ch.noise_power)
        << ",\"seed\":" << ch.seed << "},\n";
    out << "\"G\":[";
    for (std::size_t i = 0; i < ch.bs_ris.size(); ++i) {
        if (i) out << ',';
        write_complex_pair(out, ch.bs_ris[i]);
    }
    out << "],\n\"h_r\":[";
    for (std::size_t k = 0; k < ch.num_users; ++k) {
        if (k) out << ',';
        out << '[';
        for (std::size_t n = 0; n < ch.num_units; ++n) {
            if (n) out << ',';
            write_complex_pair(out, ch.ris_ue[k][n]);
        }
        out << ']';
    }
    out << "],\n\"codewords\":[";
    for (std::size_t k = 0; k < cb.size(); ++k) {
        if (k) out << ',';
        out << '[';
        for (std::size_t n = 0; n < cb.num_units; ++n) {
            if (n) out << ',';
            out << cb.codewords[k].levels[n];
        }
        out << ']';
    }
    out << "]\n}\n";
    finish_out(out, path);
}

std::pair<ChannelSet, Codebook> load_instance(const std::string& path) {
    const json doc = parse_file(path);
    const json& meta = doc.at("meta");
    ChannelSet ch;
    ch.num_users = meta.at("K").get<std::size_t>();
    ch.num_units = meta.at("N").get<std::size_t>();
    ch.num_antennas = meta.at("M").get<std::size_t>();
    ch.tx_power = meta.at("P").get<double>();
    ch.noise_power = meta.at("sigma2").get<double>();
    ch.seed = meta.at("seed").get<std::uint64_t>();
    const int bits = meta.at("b").get<int>();

    const json& g = doc.at("G");
    if (g.size() != ch.num_units * ch.num_antennas)
        throw std::invalid_argument("load_instance: G size mismatch");
    ch.bs_ris.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) ch.bs_ris[i] = read_complex_pair(g[i]);

    const json& hr = doc.at("h_r");
    if (hr.size() != ch.num_users) throw std::invalid_argument("load_instance: h_r size mismatch");
    ch.ris_ue.resize(ch.num_users);
    for (std::size_t k = 0; k < ch.num_users; ++k) {
        if (hr[k].size() != ch.num_units)
            throw std::invalid_argument("load_instance: h_r vector length mismatch");
        ch.ris_ue[k].resize(ch.num_units);
        for (std::size_t n = 0; n < ch.num_units; ++n)
            ch.ris_ue[k][n] = read_complex_pair(hr[k][n]);
    }

    Codebook cb;
    cb.num_units = ch.num_units;
    cb.bits = bits;
    const json& cws = doc.at("codewords");
    if (cws.size() != ch.num_users)
        throw std::invalid_argument("load_instance: codeword count mismatch");
    cb.codewords.resize(cws.size());
    for (std::size_t k = 0; k < cws.size(); ++k) {
        auto& cw = cb.codewords[k];
        cw.bits = bits;
        if (cws[k].size() != ch.num_units)
            throw std::invalid_argument("load_instance: codeword length mismatch");
        cw.levels.resize(ch.num_units);
        for (std::size_t n = 0; n < ch.num_units; ++n) {
            const auto level = cws[k][n].get<long long>();
            if (level < 0 || level >= (1ll << bits))
                throw std::invalid_argument("load_instance: level out of range");
            cw.levels[n] = static_cast<std::uint16_t>(level);
        }
    }
    return {std::move(ch), std::move(cb)};
}

void write_matrix(const std::string& csv_path, const LossMatrix& m) {
    auto out = open_out(csv_path);
    for (std::size_t i = 0; i < m.K; ++i) {
        for (std::size_t j = 0; j < m.K; ++j) {
            if (j) out << ',';
            out << format_g17(m.at(i, j));
        }
        out << '\n';
    }
    finish_out(out, csv_path);

    auto meta = open_out(csv_path + ".meta.json");
    meta << "{\"K\":" << m.K << ",\"symmetrized\":" << (m.symmetrized ? "true" : "false")
         << ",\"source\":\"" << m.source << "\",\"seed\":" << m.seed << "}\n";
    finish_out(meta, csv_path + ".meta.json");
}

LossMatrix load_matrix(const std::string& csv_path) {
    const json meta = parse_file(csv_path + ".meta.json");
    LossMatrix m;
    m.K = meta.at("K").get<std::size_t>();
    m.symmetrized = meta.at("symmetrized").get<bool>();
    m.source = meta.at("source").get<std::string>();
    m.seed = meta.at("seed").get<std::uint64_t>();

    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open: " + csv_path);
    m.d.assign(m.K * m.K, 0.0);
    std::string line;
    for (std::size_t i = 0; i < m.K; ++i) {
        if (!std::getline(in, line)) throw IoError("matrix file truncated: " + csv_path);
        std::size_t pos = 0;
        for (std::size_t j = 0; j < m.K; ++j) {
            const std::size_t next = line.find(',', pos);
            const std::string cell =
                line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            try {
                m.at(i, j) = std::stod(cell);
            } catch (const std::exception&) {
                throw IoError("bad matrix cell at row " + std::to_string(i) + ": " + csv_path);
            }
            if (next == std::string::npos && j + 1 < m.K)
                throw IoError("matrix row too short: " + csv_path);
            pos = next + 1;
        }
    }

    for (std::size_t i = 0; i < m.K; ++i) {
        if (m.at(i, i) != 0.0) throw std::invalid_argument("load_matrix: nonzero diagonal");
        for (std::size_t j = 0; j < m.K; ++j) {
            if (m.at(i, j) < 0.0) throw std::invalid_argument("load_matrix: negative entry");
            if (m.symmetrized && m.at(i, j) != m.at(j, i))
                throw std::invalid_argument("load_matrix: symmetrized flag but asymmetric data");
        }
    }
    return m;
}

void write_solver_params(const std::string& path, const SolverParams& p) {
    auto out = open_out(path);
    out << "{\"l1\":" << p.l1 << ",\"l2\":" << p.l2 << ",\"l3\":" << p.l3 << ",\"f\":" << p.f
        << ",\"n_shot\":" << p.n_shot << ",\"k_shot\":" << p.k_shot << ",\"n_cate\":" << p.n_cate
        << ",\"k_cate0\":" << p.k_cate0 << ",\"mu0\":" << format_g17(p.mu0)
        << ",\"sigma\":" << format_g17(p.sigma) << ",\"mu_min\":" << format_g17(p.mu_min)
        << ",\"z\":" << p.z << ",\"k_min\":" << p.k_min << ",\"T\":" << p.T
        << ",\"seed\":" << p.seed << ",\"stagnation_rounds\":" << p.stagnation_rounds << "}\n";
    finish_out(out, path);
}

SolverParams load_solver_params(const std::string& path) {
    const json doc = parse_file(path);
    SolverParams p;
    p.l1 = doc.at("l1").get<int>();
    p.l2 = doc.at("l2").get<int>();
    p.l3 = doc.at("l3").get<int>();
    p.f = doc.at("f").get<int>();
    p.n_shot = doc.at("n_shot").get<long long>();
    p.k_shot = doc.at("k_shot").get<long long>();
    p.n_cate = doc.at("n_cate").get<long long>();
    p.k_cate0 = doc.at("k_cate0").get<long long>();
    p.mu0 = doc.at("mu0").get<double>();
    p.sigma = doc.at("sigma").get<double>();
    p.mu_min = doc.at("mu_min").get<double>();
    p.z = doc.at("z").get<long long>();
    p.k_min = doc.at("k_min").get<long long>();
    p.T = doc.at("T").get<int>();
    p.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("stagnation_rounds"))
        p.stagnation_rounds = doc.at("stagnation_rounds").get<int>();
    return p;
}

void write_report(const std::string& path, const SolverReport& r) {
    auto out = open_out(path);
    out << "{\"best_pi\":[";
    for (std::size_t i = 0; i < r.best_pi.size(); ++i) {
        if (i) out << ',';
        out << r.best_pi[i];
    }
    out << "],\"best_cost\":" << format_g17(r.best_cost) << ",\"cost_trace\":[";
    for (std::size_t i = 0; i < r.cost_trace.size(); ++i) {
        if (i) out << ',';
        out << format_g17(r.cost_trace[i]);
    }
    out << "],\"iterations_run\":" << r.iterations_run
        << ",\"mode_switches\":" << r.mode_switches
        << ",\"wall_time_ms\":" << format_g17(r.wall_time_ms) << "}\n";
    finish_out(out, path);
}

SolverReport load_report(const std::string& path) {
    const json doc = parse_file(path);
    SolverReport r;
    r.best_pi = doc.at("best_pi").get<std::vector<int>>();
    r.best_cost = doc.at("best_cost").get<double>();
    r.cost_trace = doc.at("cost_trace").get<std::vector<double>>();
    r.iterations_run = doc.at("iterations_run").get<int>();
    r.mode_switches = doc.at("mode_switches").get<int>();
    r.wall_time_ms = doc.at("wall_time_ms").get<double>();
    return r;
}

void write_permutation(const std::string& path, std::span<const int> pi) {
    auto out = open_out(path);
    out << '[';
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (i) out << ',';
        out << pi[i];
    }
    out << "]\n";
    finish_out(out, path);
}

Permutation load_permutation(const std::string& path) {
    const json doc = parse_file(path);
    auto pi = doc.get<Permutation>();
    if (!is_permutation_of_range(pi, pi.size()))
        throw std::invalid_argument("load_permutation: not a permutation of 0..K-1");
    return pi;
}

void write_assignment(const std::string& path, const Assignment& a) {
    a.validate();
    auto out = open_out(path);
    out << "{\"K\":" << a.K << ",\"labels\":[";
    for (std::size_t i = 0; i < a.label_of.size(); ++i) {
        if (i) out << ',';
        out << a.label_of[i];
    }
    out << "]}\n";
    finish_out(out, path);
}

Assignment load_assignment(const std::string& path) {
    const json doc = parse_file(path);
    Assignment a;
    a.K = doc.at("K").get<std::size_t>();
    a.label_of = doc.at("labels").get<std::vector<std::uint32_t>>();
    a.validate();
    return a;
}

void write_eval(const std::string& path, const EvalResult& e) {
    auto out = open_out(path);
    out << "{\"K\":" << e.K << ",\"q\":" << format_g17(e.q);
    if (e.has_snr_db) out << ",\"bsc_snr_db\":" << format_g17(e.snr_db);
    out << ",\"expected_loss\":" << format_g17(e.expected_loss) << "}\n";
    finish_out(out, path);
}

EvalResult load_eval(const std::string& path) {
    const json doc = parse_file(path);
    EvalResult e;
    e.K = doc.at("K").get<std::size_t>();
    e.q = doc.at("q").get<double>();
    e.has_snr_db = doc.contains("bsc_snr_db");
    if (e.has_snr_db) e.snr_db = doc.at("bsc_snr_db").get<double>();
    e.expected_loss = doc.at("expected_loss").get<double>();
    return e;
}

} // namespace risia
