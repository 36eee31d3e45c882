#pragma once

#include "quatsieve/criteria.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

namespace quatsieve {

// Batch pair sieve: every ordered pair (M, N) of distinct odd primes in the
// given inclusive ranges, one CSV row per pair, plus a trailing summary line.
// Output is independent of the worker count: pairs are scheduled dynamically
// but rows are assembled in input order.
struct SieveJob {
    Int m_lo = 3, m_hi = 3;
    Int n_lo = 3, n_hi = 3;
    Int ell_bound = 100;
    unsigned parallelism = 1;
    std::string output_path; // empty: caller prints the returned text
};

inline std::string sieve_csv_row(const Int& M, const Int& N, const Verdict& v) {
    std::string row = M.get_str() + "," + N.get_str() + "," + status_name(v.status) + ",";
    if (v.witness) {
        row += v.witness->criterion;
        row += ",";
        if (v.witness->ell) row += v.witness->ell->get_str();
    } else {
        row += ",";
    }
    return row;
}

inline std::string run_pair_sieve(const SieveJob& job) {
    if (job.m_lo > job.m_hi || job.n_lo > job.n_hi)
        throw std::invalid_argument("run_pair_sieve: empty range");
    if (job.ell_bound < 2)
        throw std::invalid_argument("run_pair_sieve: ell_bound must be >= 2");
    std::vector<Int> Ms, Ns;
    for (const Int& p : primes_in_range(job.m_lo, job.m_hi))
        if (p != 2) Ms.push_back(p);
    for (const Int& p : primes_in_range(job.n_lo, job.n_hi))
        if (p != 2) Ns.push_back(p);
    std::vector<std::pair<Int, Int>> pairs;
    for (const Int& M : Ms)
        for (const Int& N : Ns)
            if (M != N) pairs.emplace_back(M, N);

    std::vector<Verdict> results(pairs.size());
    unsigned workers = std::max(1u, job.parallelism);
    workers = std::min<unsigned>(workers, pairs.size() ? pairs.size() : 1);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= pairs.size()) break;
            results[i] = check_modular_pair(pairs[i].first, pairs[i].second, job.ell_bound);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    std::string out = "M,N,status,witness_criterion,witness_ell\n";
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (results[i].excluded()) ++excluded;
        out += sieve_csv_row(pairs[i].first, pairs[i].second, results[i]);
        out += "\n";
    }
    out += "# pairs=" + std::to_string(pairs.size()) + " excluded=" + std::to_string(excluded) +
           " no_obstruction=" + std::to_string(pairs.size() - excluded) + "\n";
    return out;
}

// atomic file write: temp file in the target directory, then rename
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::string tmp = path + ".tmp";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open " + tmp);
            out << content;
            out.flush();
            if (!out) throw std::runtime_error("short write to " + tmp);
        }
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

} // namespace quatsieve
