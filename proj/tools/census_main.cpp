#include <CLI11.hpp>

#include <iostream>

#include "qcensus/census.hpp"
#include "qcensus/rep_verifier.hpp"
#include "qcensus/subfields.hpp"

using namespace qc;

namespace {

// exit codes: 0 ok, 2 invalid arguments, 3 data conflict, 4 inconclusive
constexpr int kOk = 0, kInvalid = 2, kConflict = 3, kInconclusive = 4;

struct CliOverrides {
    std::string config_path;
    std::optional<long> max_disc;
    std::optional<double> max_regulator;
    std::optional<int> coeff_bound;
    std::optional<std::string> set_S;
    std::optional<double> ceiling;
    std::optional<std::string> cache_dir;
    std::optional<int> threads;
    std::optional<int> max_conductor_index;
};

CensusConfig resolve_config(const CliOverrides& o) {
    CensusConfig cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    if (o.max_disc) cfg.max_disc = *o.max_disc;
    if (o.max_regulator) cfg.max_regulator = *o.max_regulator;
    if (o.coeff_bound) cfg.coeff_bound = *o.coeff_bound;
    if (o.set_S) apply_config_line(cfg, "set_S", *o.set_S);
    if (o.ceiling) cfg.class_bound_ceiling = *o.ceiling;
    if (o.cache_dir) cfg.cache_dir = *o.cache_dir;
    if (o.threads) cfg.threads = *o.threads;
    if (o.max_conductor_index) cfg.max_conductor_index = *o.max_conductor_index;
    return cfg;
}

void print_table(const CensusTable& t) {
    for (auto& [k, v] : t.metadata) std::cout << "# " << k << "=" << v << "\n";
    std::cout << "x,partial_sum,target,ratio,lower_bound\n";
    for (auto& r : t.rows)
        std::cout << format_real(r.x) << "," << format_real(r.partial_sum) << ","
                  << format_real(r.target) << "," << format_real(r.ratio) << ","
                  << (r.lower_bound ? 1 : 0) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"census of class numbers, regulators and unit invariants of quadratic and "
                 "totally complex quartic orders"};
    app.require_subcommand(1);

    CliOverrides ov;
    app.add_option("--config", ov.config_path, "key=value config file");
    app.add_option("--max-disc", ov.max_disc, "quadratic discriminant ceiling");
    app.add_option("--max-regulator", ov.max_regulator, "regulator ceiling");
    app.add_option("--coeff-bound", ov.coeff_bound, "quartic coefficient box");
    app.add_option("--set-S", ov.set_S, "comma-separated primes, |S| even");
    app.add_option("--class-bound-ceiling", ov.ceiling, "Minkowski bound ceiling for h");
    app.add_option("--cache-dir", ov.cache_dir, "append-only invariants cache directory");
    app.add_option("--threads", ov.threads, "worker threads (output is thread-count invariant)");
    app.add_option("--max-conductor-index", ov.max_conductor_index,
                   "also enumerate suborders up to this index (coprime to S)");

    auto* census = app.add_subcommand("census", "run a counting function");
    std::string out_path;
    census->add_option("--out", out_path, "write the table as CSV");
    auto* gs = census->add_subcommand("quadratic-gs", "Gauss-Siegel sums of h R over D <= x");
    auto* sar = census->add_subcommand("quadratic-sarnak", "sums of h over R(O_D) <= x");
    auto* quartic = census->add_subcommand("quartic", "quartic corpus and pi_S / pi-tilde_S");
    census->require_subcommand(1);

    auto* inv = app.add_subcommand("invariants", "invariants of a single order");
    std::string minpoly, inv_set;
    inv->add_option("--minpoly", minpoly, "c0:c1:c2:c3:1 (or c0:c1:1)")->required();
    inv->add_option("--set", inv_set, "comma-separated primes for S")->required();

    auto* verify = app.add_subcommand("verify", "verification suites");
    auto* vrep = verify->add_subcommand("rep", "representation-theoretic identities");
    verify->require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "read and validate an invariants CSV");
    std::string ingest_path, ingest_check, ingest_out;
    ingest->add_option("path", ingest_path, "CSV to ingest")->required();
    ingest->add_option("--check-against", ingest_check,
                       "computed CSV to cross-check the ingested rows against");
    ingest->add_option("--out", ingest_out, "re-emit the validated rows");

    auto* emit = app.add_subcommand("emit", "canonical re-emission of an invariants CSV");
    std::string emit_in, emit_out;
    emit->add_option("--in", emit_in, "input CSV")->required();
    emit->add_option("--out", emit_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (census->parsed()) {
            CensusConfig cfg = resolve_config(ov);
            if (gs->parsed()) {
                CensusTable t = gauss_siegel_census(cfg);
                if (!out_path.empty()) emit_census_csv(t, out_path);
                print_table(t);
                return kOk;
            }
            if (sar->parsed()) {
                CensusTable t = sarnak_census(cfg);
                if (!out_path.empty()) emit_census_csv(t, out_path);
                print_table(t);
                return kOk;
            }
            if (quartic->parsed()) {
                CorpusDiagnostics diag;
                auto corpus = quartic_corpus(cfg, &diag);
                std::vector<double> checkpoints;
                for (double x = 0.5; x <= cfg.max_regulator + 1e-9; x += 0.5)
                    checkpoints.push_back(x);
                CensusTable pis = pi_s_census(corpus, cfg.set_S, checkpoints);
                CensusTable pit = pi_tilde_s_census(corpus, cfg.set_S, checkpoints);
                std::cerr << "# polynomials=" << diag.polynomials_scanned
                          << " candidates=" << diag.candidates << " fields=" << diag.fields
                          << " Cc=" << diag.cc << " Cr=" << diag.cr
                          << " quarantined=" << diag.quarantined.size() << "\n";
                for (auto& [k, why] : diag.quarantined)
                    std::cerr << "# quarantined " << k << ": " << why << "\n";
                if (!out_path.empty()) {
                    emit_invariants_csv(corpus, out_path);
                    emit_census_csv(pis, out_path + ".pi_S.csv");
                    emit_census_csv(pit, out_path + ".pi_tilde_S.csv");
                }
                emit_invariants_csv(corpus, std::cout);
                print_table(pis);
                print_table(pit);
                return diag.quarantined.empty() ? kOk : kInconclusive;
            }
        }
        if (inv->parsed()) {
            CensusConfig cfg = resolve_config(ov);
            apply_config_line(cfg, "set_S", inv_set);
            IntPoly f = IntPoly::from_key(minpoly);
            auto F = make_field(f);
            std::vector<OrderInvariants> rows;
            OrderInvariants row;
            row.field_key = f.canonical().key();
            row.r = F->real_embeddings();
            row.s = F->complex_pairs();
            if (F->degree() == 2) {
                OrderHandle o = make_order_handle(order_maximal_at(F, {}, true));
                row.disc = o->disc();
                UnitData u = fundamental_unit(o);
                row.regulator = u.regulator.mid_double();
                row.mu = u.mu;
                row.h = class_number(o).h;
                row.cls = FieldClass::NotInC;
            } else {
                row.cls = classify_field(F, cfg.set_S);
                OrderHandle o = make_order_handle(order_maximal_at(F, cfg.set_S, true));
                row.disc = o->disc();
                if (row.cls != FieldClass::NotInC) row.lambda_s = lambda_S(o, cfg.set_S);
                UnitData u = fundamental_unit(o);
                row.regulator = u.regulator.mid_double();
                row.mu = u.mu;
                row.kappa_val = kappa(o, u);
                row.nu = nu_invariant(o, u).mid_double();
                ClassGroupBudget cb;
                cb.ceiling = cfg.class_bound_ceiling;
                row.h = class_number(o, cb).h;
            }
            rows.push_back(row);
            emit_invariants_csv(rows, std::cout);
            return kOk;
        }
        if (vrep->parsed()) {
            auto rep = verify_ak_identity();
            std::cout << "a_k identity (k = 0..4): " << (rep.ok ? "ok" : "FAILED")
                      << ", grid residual " << format_real(rep.grid_residual) << "\n";
            double w4 = weyl_integral(4), w64 = weyl_integral(64);
            std::cout << "weyl integral: grid 4 -> " << format_real(w4) << ", grid 64 -> "
                      << format_real(w64) << "\n";
            for (int n = 0; n <= 4; ++n) {
                auto d = decompose_exterior(ExteriorSpace::pM, n);
                std::cout << "Lambda^" << n << " p_M =";
                for (auto& [t, m] : d) std::cout << " " << m << "*" << t.str();
                std::cout << "\n";
            }
            for (int n = 0; n <= 4; ++n) {
                auto d = decompose_exterior(ExteriorSpace::m, n);
                std::cout << "Lambda^" << n << " m =";
                for (auto& [t, m] : d) std::cout << " " << m << "*" << t.str();
                std::cout << "\n";
            }
            bool ok = rep.ok && std::abs(w4 - 2) < 1e-12 && std::abs(w64 - 2) < 1e-12;
            std::cout << (ok ? "PASS" : "FAIL") << "\n";
            return ok ? kOk : kInconclusive;
        }
        if (ingest->parsed()) {
            auto rows = ingest_table(ingest_path);
            if (!ingest_check.empty()) {
                auto computed = ingest_table(ingest_check);
                cross_check(rows, computed);
            }
            std::cout << "# ingested " << rows.size() << " rows\n";
            if (!ingest_out.empty()) emit_invariants_csv(rows, ingest_out);
            return kOk;
        }
        if (emit->parsed()) {
            auto rows = ingest_table(emit_in);
            emit_invariants_csv(rows, emit_out);
            return kOk;
        }
    } catch (const data_conflict_error& e) {
        std::cerr << "data conflict: " << e.what() << "\n";
        return kConflict;
    } catch (const inconclusive_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kInconclusive;
    } catch (const parse_error& e) {
        std::cerr << "parse error (line " << e.line << "): " << e.what() << "\n";
        return kInvalid;
    } catch (const invalid_argument_error& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kInvalid;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInconclusive;
    }
    return kInvalid;
}
