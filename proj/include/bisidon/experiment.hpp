#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "extractor.hpp"
#include "rational.hpp"

namespace bisidon {

struct ExperimentRow {
    std::string kind;
    uint64_t n = 0;
    unsigned trial = 0;
    uint64_t seed = 0;
    Branch branch = Branch::additive_first;
    uint64_t p = 0;
    size_t size_a2 = 0;
    size_t size_b = 0;
    size_t size_btilde = 0;
    size_t size_s = 0;
    double wall_ms = 0.0;
};

inline std::string branch_name(Branch b) {
    return b == Branch::additive_first ? "add-first" : "mul-first";
}

inline Branch branch_from_name(const std::string& s) {
    if (s == "add-first") return Branch::additive_first;
    if (s == "mul-first") return Branch::multiplicative_first;
    throw input_error("unknown branch '" + s + "'");
}

struct ExperimentSpec {
    std::vector<DatasetKind> kinds;
    std::vector<uint64_t> n_list;
    unsigned trials = 1;
    Rat gamma = Rat(2);       // geometric datasets
    uint64_t random_scale = 10; // random datasets draw from [1, scale * N]
};

// One extract call per (kind, N, trial). Datasets and row seeds derive from
// cfg.seed through fixed substream indices, so a rerun with the same seed
// reproduces every row. The automatic branch decision is resolved once per
// dataset (it does not depend on the trial seed) and pinned for the rows.
inline std::vector<ExperimentRow> scaling_experiment(
    const ExperimentSpec& spec, const ExtractorConfig& cfg) {
    if (spec.n_list.empty() || spec.trials < 1)
        throw precondition_error("scaling_experiment: need N values and trials >= 1");
    std::vector<ExperimentRow> rows;
    for (const auto kind : spec.kinds) {
        const uint64_t kind_stream =
            derive_stream(cfg.seed, static_cast<uint64_t>(kind));
        for (const uint64_t n : spec.n_list) {
            const uint64_t n_stream = derive_stream(kind_stream, n);
            Dataset data;
            switch (kind) {
                case DatasetKind::interval:
                    data = gen_interval(n);
                    break;
                case DatasetKind::geometric:
                    data = gen_geometric(spec.gamma, n);
                    break;
                case DatasetKind::random:
                    data = gen_random(n, Int(static_cast<unsigned long>(
                                              spec.random_scale * n)),
                                      Rng(derive_stream(n_stream, 0)));
                    break;
                case DatasetKind::pds:
                    data = gen_pds(n);
                    break;
                case DatasetKind::file:
                    throw precondition_error(
                        "scaling_experiment: kind 'file' is not generable");
            }
            ExtractorConfig row_cfg = cfg;
            if (row_cfg.branch == BranchChoice::automatic) {
                auto [positive, negated] = preprocess(data.elements);
                (void)negated;
                if (positive.size() > 2)
                    row_cfg.branch =
                        choose_branch(positive) == Branch::additive_first
                            ? BranchChoice::additive_first
                            : BranchChoice::multiplicative_first;
            }
            for (unsigned t = 0; t < spec.trials; ++t) {
                row_cfg.seed = derive_stream(n_stream, 1 + t);
                const auto start = std::chrono::steady_clock::now();
                const auto result = extract(data.elements, row_cfg);
                ExperimentRow row;
                row.kind = dataset_kind_name(kind);
                row.n = n;
                row.trial = t;
                row.seed = row_cfg.seed;
                row.branch = result.trace.branch_chosen;
                row.p = result.trace.p;
                row.size_a2 = result.trace.size_embedded;
                row.size_b = result.trace.size_B;
                row.size_btilde = result.trace.size_Btilde;
                row.size_s = result.trace.size_S;
                row.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

// Least-squares slope of log(median |S|) against log N; per-N medians over
// all rows. N values whose median is zero carry no size signal on the log
// scale and are skipped.
inline Rat fit_exponent(const std::vector<ExperimentRow>& rows) {
    std::map<uint64_t, std::vector<double>> by_n;
    for (const auto& r : rows)
        by_n[r.n].push_back(static_cast<double>(r.size_s));
    std::vector<std::pair<double, double>> pts;
    for (auto& [n, sizes] : by_n) {
        std::sort(sizes.begin(), sizes.end());
        const size_t k = sizes.size();
        const double median = (k % 2 == 1)
                                  ? sizes[k / 2]
                                  : 0.5 * (sizes[k / 2 - 1] + sizes[k / 2]);
        if (median > 0)
            pts.emplace_back(std::log(static_cast<double>(n)),
                             std::log(median));
    }
    if (pts.size() < 2)
        throw precondition_error("fit_exponent: need at least two usable N values");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    return rat_from_double((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

// ---------------------------------------------------------------------------
// CSV serialization, columns fixed:
// kind,N,trial,seed,branch,p,size_A2,size_B,size_Btilde,size_S,wall_ms
// ---------------------------------------------------------------------------

inline const char* csv_header() {
    return "kind,N,trial,seed,branch,p,size_A2,size_B,size_Btilde,size_S,wall_ms";
}

inline std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const auto& r : rows) {
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
        out << r.kind << ',' << r.n << ',' << r.trial << ',' << r.seed << ','
            << branch_name(r.branch) << ',' << r.p << ',' << r.size_a2 << ','
            << r.size_b << ',' << r.size_btilde << ',' << r.size_s << ','
            << wall << '\n';
    }
    return out.str();
}

inline std::vector<ExperimentRow> rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw input_error("csv: missing or unexpected header");
    std::vector<ExperimentRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) f.push_back(field);
        if (f.size() != 11) throw input_error("csv: bad row '" + line + "'");
        ExperimentRow r;
        r.kind = f[0];
        r.n = std::stoull(f[1]);
        r.trial = static_cast<unsigned>(std::stoul(f[2]));
        r.seed = std::stoull(f[3]);
        r.branch = branch_from_name(f[4]);
        r.p = std::stoull(f[5]);
        r.size_a2 = std::stoull(f[6]);
        r.size_b = std::stoull(f[7]);
        r.size_btilde = std::stoull(f[8]);
        r.size_s = std::stoull(f[9]);
        r.wall_ms = std::stod(f[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace bisidon
