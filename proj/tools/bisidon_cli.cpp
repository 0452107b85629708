// bisidon: bi-Sidon subset extraction toolkit command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bisidon/dataset.hpp"
#include "bisidon/energy.hpp"
#include "bisidon/experiment.hpp"
#include "bisidon/extractor.hpp"
#include "bisidon/io.hpp"
#include "bisidon/oracle.hpp"
#include "bisidon/parabola.hpp"
#include "bisidon/rational.hpp"

namespace {

using nlohmann::json;
using namespace bisidon;

json rat_json(const Rat& r) { return rat_to_string(r); }

json subset_json(const std::vector<Rat>& set) {
    json out = json::array();
    for (const auto& v : set) out.push_back(rat_json(v));
    return out;
}

json trace_json(const ExtractionTrace& t) {
    json out;
    out["branch"] = t.branch_chosen == Branch::additive_first ? "add-first"
                                                              : "mul-first";
    if (t.additive_energy) out["additive_energy"] = *t.additive_energy;
    if (t.multiplicative_energy)
        out["multiplicative_energy"] = *t.multiplicative_energy;
    out["p"] = t.p;
    out["size_A"] = t.size_input;
    out["size_A2"] = t.size_embedded;
    out["size_B"] = t.size_B;
    out["size_Btilde"] = t.size_Btilde;
    out["size_S"] = t.size_S;
    out["removed_e0"] = t.removed_e0;
    out["removed_e1"] = t.removed_e1;
    out["q"] = rat_json(t.q_used);
    out["seed"] = t.seed;
    out["negated"] = t.negated;
    out["wall_ms"] = t.wall_ms;
    return out;
}

json quadruple_json(const Quadruple& q) {
    json out;
    out["elements"] = {rat_json(q.elements[0]), rat_json(q.elements[1]),
                       rat_json(q.elements[2]), rat_json(q.elements[3])};
    out["operation"] = q.operation == Op::sum ? "sum" : "product";
    out["kind"] = q.kind == Quadruple::Kind::E0 ? "E0" : "E1";
    return out;
}

std::vector<FpPoint> parse_points(const std::string& text, uint64_t p) {
    std::vector<FpPoint> out;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) {
        const auto comma = part.find(',');
        if (comma == std::string::npos)
            throw input_error("points: expected x,y pairs separated by ';'");
        const uint64_t x = std::stoull(part.substr(0, comma));
        const uint64_t y = std::stoull(part.substr(comma + 1));
        if (x >= p || y >= p) throw input_error("points: coordinate >= p");
        out.push_back({x, y, p});
    }
    return out;
}

void emit(const json& out) { std::cout << out.dump(2) << std::endl; }

int run(int argc, char** argv) {
    CLI::App app{"bi-Sidon subset extraction toolkit"};
    app.require_subcommand(1);

    // --- gen -------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a dataset file");
    std::string gen_kind, gen_gamma = "2", gen_out;
    uint64_t gen_n = 0, gen_p = 0, gen_seed = 0;
    std::string gen_max = "1000000";
    gen->add_option("--kind", gen_kind, "interval|geometric|random|pds")
        ->required();
    gen->add_option("--n", gen_n, "set size N");
    gen->add_option("--gamma", gen_gamma, "geometric ratio (rational)");
    gen->add_option("--max", gen_max, "random draw bound M");
    gen->add_option("--p", gen_p, "pds prime power");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("-o,--output", gen_out, "output file")->required();

    // --- energy ----------------------------------------------------------
    auto* energy_cmd = app.add_subcommand("energy", "additive/multiplicative energy");
    std::string energy_input;
    bool energy_oracle = false;
    energy_cmd->add_option("--input", energy_input)->required();
    energy_cmd->add_flag("--oracle", energy_oracle,
                         "use the O(N^4) enumeration oracle");

    // --- verify ----------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "Sidon predicates");
    std::string verify_input;
    verify_cmd->add_option("--input", verify_input)->required();

    // --- extract ---------------------------------------------------------
    auto* extract_cmd = app.add_subcommand("extract", "extract a bi-Sidon subset");
    std::string ex_input, ex_c, ex_q, ex_branch = "auto";
    uint64_t ex_trials = 32, ex_seed = 0, ex_p = 0, ex_d = 2;
    bool ex_no_adaptive = false, ex_json = false;
    extract_cmd->add_option("--input", ex_input)->required();
    extract_cmd->add_option("--trials", ex_trials);
    extract_cmd->add_option("--seed", ex_seed);
    extract_cmd->add_option("--c", ex_c, "sparsification constant (rational)");
    extract_cmd->add_option("--q", ex_q, "fixed sparsification probability");
    extract_cmd->add_option("--p", ex_p, "prime override");
    extract_cmd->add_option("--d", ex_d, "embedding dimension");
    extract_cmd->add_option("--branch", ex_branch, "auto|add-first|mul-first");
    extract_cmd->add_flag("--no-adaptive", ex_no_adaptive);
    extract_cmd->add_flag("--json", ex_json);

    // --- oracle ----------------------------------------------------------
    auto* oracle_cmd = app.add_subcommand("oracle", "exact maximum bi-Sidon subset");
    std::string oracle_input;
    uint64_t oracle_limit = 24;
    oracle_cmd->add_option("--input", oracle_input)->required();
    oracle_cmd->add_option("--limit", oracle_limit);

    // --- parabola --------------------------------------------------------
    auto* parabola_cmd = app.add_subcommand("parabola", "containment probabilities");
    uint64_t par_p = 0, par_trials = 100000, par_seed = 0;
    bool par_exact = false, par_mc = false;
    std::string par_points;
    parabola_cmd->add_option("--p", par_p)->required();
    parabola_cmd->add_flag("--exact", par_exact);
    parabola_cmd->add_flag("--mc", par_mc);
    parabola_cmd->add_option("--trials", par_trials);
    parabola_cmd->add_option("--points", par_points, "x,y;x,y;...");
    parabola_cmd->add_option("--seed", par_seed);

    // --- experiment ------------------------------------------------------
    auto* experiment_cmd = app.add_subcommand("experiment", "experiment harness");
    auto* scaling_cmd = experiment_cmd->add_subcommand("scaling", "scaling runs");
    std::string sc_kind = "interval", sc_out;
    uint64_t sc_nmin = 0, sc_nmax = 0, sc_factor = 2, sc_trials = 1, sc_seed = 0;
    scaling_cmd->add_option("--kind", sc_kind)->required();
    scaling_cmd->add_option("--nmin", sc_nmin)->required();
    scaling_cmd->add_option("--nmax", sc_nmax)->required();
    scaling_cmd->add_option("--factor", sc_factor);
    scaling_cmd->add_option("--trials", sc_trials)->required();
    scaling_cmd->add_option("--seed", sc_seed);
    scaling_cmd->add_option("-o,--output", sc_out)->required();

    CLI11_PARSE(app, argc, argv);

    if (*gen) {
        Dataset data;
        if (gen_kind == "interval") {
            data = gen_interval(gen_n);
        } else if (gen_kind == "geometric") {
            data = gen_geometric(parse_rational(gen_gamma), gen_n);
        } else if (gen_kind == "random") {
            data = gen_random(gen_n, Int(gen_max), Rng(gen_seed));
        } else if (gen_kind == "pds") {
            data = gen_pds(gen_p);
        } else {
            throw input_error("unknown dataset kind '" + gen_kind + "'");
        }
        std::ostringstream comment;
        comment << "kind=" << dataset_kind_name(data.kind) << " n=" << data.n
                << " seed=" << gen_seed;
        write_value_file(gen_out, data.elements, comment.str());
        return 0;
    }

    if (*energy_cmd) {
        const auto set = read_input_file(energy_input);
        json out;
        out["n"] = set.size();
        if (energy_oracle) {
            out["additive_energy"] = energy_by_enumeration(set, Op::sum);
            out["multiplicative_energy"] =
                energy_by_enumeration(set, Op::product);
        } else {
            out["additive_energy"] = additive_energy(set);
            out["multiplicative_energy"] = multiplicative_energy(set);
        }
        emit(out);
        return 0;
    }

    if (*verify_cmd) {
        const auto set = read_input_file(verify_input);
        json out;
        std::optional<Quadruple> witness;
        const bool add_ok = is_additive_sidon(set);
        if (!add_ok) witness = nontrivial_quadruples(set, Op::sum).front();
        bool mul_ok;
        const bool has_zero =
            std::find(set.begin(), set.end(), Rat(0)) != set.end();
        if (has_zero) {
            mul_ok = set.size() <= 1;
            if (!mul_ok && add_ok) {
                Quadruple q;
                const Rat other = set.front() == 0 ? set.back() : set.front();
                q.elements = {Rat(0), Rat(0), Rat(0), other};
                q.operation = Op::product;
                q.kind = Quadruple::Kind::E1;
                witness = q;
            }
        } else {
            mul_ok = is_multiplicative_sidon(set);
            if (!mul_ok && add_ok)
                witness = nontrivial_quadruples(set, Op::product).front();
        }
        out["additive_sidon"] = add_ok;
        out["multiplicative_sidon"] = mul_ok;
        out["bi_sidon"] = add_ok && mul_ok;
        if (witness) out["witness"] = quadruple_json(*witness);
        emit(out);
        return 0;
    }

    if (*extract_cmd) {
        const auto set = read_input_file(ex_input);
        ExtractorConfig cfg;
        cfg.trials = static_cast<unsigned>(ex_trials);
        cfg.seed = ex_seed;
        cfg.d = static_cast<unsigned>(ex_d);
        cfg.adaptive_c = !ex_no_adaptive;
        if (!ex_c.empty()) cfg.c = parse_rational(ex_c);
        if (!ex_q.empty()) cfg.q_override = parse_rational(ex_q);
        if (ex_p != 0) cfg.p_override = ex_p;
        if (ex_branch == "auto")
            cfg.branch = BranchChoice::automatic;
        else if (ex_branch == "add-first")
            cfg.branch = BranchChoice::additive_first;
        else if (ex_branch == "mul-first")
            cfg.branch = BranchChoice::multiplicative_first;
        else
            throw input_error("unknown branch '" + ex_branch + "'");
        const auto result = extract(set, cfg);
        if (ex_json) {
            json out;
            out["subset"] = subset_json(result.subset);
            out["trace"] = trace_json(result.trace);
            out["verified"] = result.verified;
            emit(out);
        } else {
            std::cout << "bi-Sidon subset of size " << result.subset.size()
                      << " (input " << set.size() << ", branch "
                      << branch_name(result.trace.branch_chosen) << ", p "
                      << result.trace.p << "):\n";
            for (const auto& v : result.subset)
                std::cout << "  " << rat_to_string(v) << '\n';
        }
        return 0;
    }

    if (*oracle_cmd) {
        const auto set = read_input_file(oracle_input);
        const auto best = max_bi_sidon_exact(set, oracle_limit);
        json out;
        out["max_size"] = best.size();
        out["subset"] = subset_json(best);
        emit(out);
        return 0;
    }

    if (*parabola_cmd) {
        if (par_exact == par_mc)
            throw input_error("parabola: pass exactly one of --exact, --mc");
        json out;
        out["p"] = par_p;
        if (par_exact) {
            out["probability"] =
                rat_json(triple_containment_probability_exact(par_p));
        } else {
            if (par_points.empty())
                throw input_error("parabola --mc requires --points");
            const auto pts = parse_points(par_points, par_p);
            const auto est = estimate_containment_probability(pts, par_trials,
                                                              Rng(par_seed));
            out["estimate"] = rat_json(est.estimate);
            out["stderr"] = rat_json(est.stderr_value);
            out["estimate_double"] = mpq_get_d(est.estimate.get_mpq_t());
            out["stderr_double"] = mpq_get_d(est.stderr_value.get_mpq_t());
            out["hits"] = est.hits;
            out["trials"] = est.trials;
        }
        emit(out);
        return 0;
    }

    if (*scaling_cmd) {
        ExperimentSpec spec;
        if (sc_kind == "interval")
            spec.kinds = {DatasetKind::interval};
        else if (sc_kind == "geometric")
            spec.kinds = {DatasetKind::geometric};
        else if (sc_kind == "random")
            spec.kinds = {DatasetKind::random};
        else if (sc_kind == "pds")
            spec.kinds = {DatasetKind::pds};
        else
            throw input_error("unknown dataset kind '" + sc_kind + "'");
        if (sc_factor < 2) throw input_error("factor must be >= 2");
        for (uint64_t n = sc_nmin; n <= sc_nmax; n *= sc_factor)
            spec.n_list.push_back(n);
        spec.trials = static_cast<unsigned>(sc_trials);
        ExtractorConfig cfg;
        cfg.seed = sc_seed;
        const auto rows = scaling_experiment(spec, cfg);
        std::ofstream out(sc_out);
        if (!out) throw input_error("cannot open output '" + sc_out + "'");
        out << rows_to_csv(rows);
        std::cerr << "fitted exponent: "
                  << mpq_get_d(fit_exponent(rows).get_mpq_t()) << '\n';
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bisidon::precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const bisidon::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
