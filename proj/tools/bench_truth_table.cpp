// Times the truth-table sweep three ways on the same random inputs: the
// naive per-valuation reference walk, the bitsliced kernel single-threaded,
// and the bitsliced kernel under OpenMP. Verdicts are cross-checked on
// every run.
#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "la/formula.hpp"
#include "la/semantics.hpp"
#include "la/truth_table.hpp"
#include "random_formula.hpp"

namespace {

struct Case {
    std::vector<la::Formula> premises;
    la::Formula hypothesis;
    std::vector<std::string> order;
};

std::vector<std::string> atom_pool(int n) {
    std::vector<std::string> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.push_back("A" + std::to_string(i));
    return pool;
}

// Forces every pool atom to occur so the sweep really covers 2^n rows.
Case make_case(la::testing::FormulaGen& gen, const std::vector<std::string>& pool) {
    std::vector<la::Formula> anchor;
    anchor.reserve(pool.size());
    for (const std::string& name : pool) anchor.push_back(la::atom(name));
    Case c{{la::disj(anchor), gen.propositional(5), gen.propositional(5)},
           gen.implication(4),
           {}};
    for (const la::Formula& p : c.premises) {
        for (const std::string& a : la::atoms(p)) {
            if (std::find(c.order.begin(), c.order.end(), a) == c.order.end()) {
                c.order.push_back(a);
            }
        }
    }
    for (const std::string& a : la::atoms(c.hypothesis)) {
        if (std::find(c.order.begin(), c.order.end(), a) == c.order.end()) {
            c.order.push_back(a);
        }
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark: reference truth-table sweep vs bitsliced kernel"};
    int reps = 5;
    unsigned seed = 7;
    std::vector<int> sizes = {12, 16, 20};
    app.add_option("--reps", reps, "Sweeps per measurement")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--atoms", sizes, "Atom counts to benchmark");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-8s %14s %14s %14s %10s %10s\n", "atoms", "reference(ms)",
                "bitsliced(ms)", "openmp(ms)", "vs-ref", "vs-serial");

    for (int n : sizes) {
        la::testing::FormulaGen gen(seed + static_cast<unsigned>(n), atom_pool(n));
        const Case c = make_case(gen, atom_pool(n));
        const auto num_atoms = static_cast<std::uint32_t>(c.order.size());

        std::vector<la::CompiledFormula> compiled;
        for (const la::Formula& p : c.premises) {
            compiled.push_back(la::compile(p, c.order));
        }
        const la::CompiledFormula hyp = la::compile(c.hypothesis, c.order);

        const la::EntailmentVerdict expect =
            la::reference::classify_entailment(c.premises, c.hypothesis);

        double t_ref = 0.0;
        double t_serial = 0.0;
        double t_omp = 0.0;
        la::EntailmentCounts serial_counts{};
        la::EntailmentCounts omp_counts{};
        for (int r = 0; r < reps; ++r) {
            double t0 = omp_get_wtime();
            const la::EntailmentVerdict got =
                la::reference::classify_entailment(c.premises, c.hypothesis);
            t_ref += omp_get_wtime() - t0;
            if (got != expect) {
                std::printf("reference self-disagreement at n=%d\n", n);
                return 1;
            }

            t0 = omp_get_wtime();
            serial_counts = la::scan_entailment_serial(compiled, hyp, num_atoms);
            t_serial += omp_get_wtime() - t0;

            t0 = omp_get_wtime();
            omp_counts = la::scan_entailment(compiled, hyp, num_atoms);
            t_omp += omp_get_wtime() - t0;

            if (serial_counts.premise_sat != omp_counts.premise_sat ||
                serial_counts.hypothesis_true != omp_counts.hypothesis_true) {
                std::printf("kernel disagreement at n=%d\n", n);
                return 1;
            }
        }
        const la::EntailmentVerdict kernel_verdict =
            la::classify_entailment(c.premises, c.hypothesis);
        if (kernel_verdict != expect) {
            std::printf("kernel verdict disagrees with reference at n=%d\n", n);
            return 1;
        }

        const double ms_ref = 1000.0 * t_ref / reps;
        const double ms_serial = 1000.0 * t_serial / reps;
        const double ms_omp = 1000.0 * t_omp / reps;
        std::printf("%-8d %14.3f %14.3f %14.3f %9.1fx %9.1fx\n", n, ms_ref, ms_serial,
                    ms_omp, ms_ref / ms_omp, ms_serial / ms_omp);
    }
    return 0;
}
