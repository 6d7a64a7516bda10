#include "qcensus/census.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qcensus/num_util.hpp"
#include "qcensus/quadratic.hpp"
#include "qcensus/subfields.hpp"

namespace qc {

namespace {

constexpr double kPi = 3.14159265358979323846;
// zeta(3), Apery's constant
constexpr double kZeta3 = 1.2020569031595942854;

// deterministic parallel map over [0, n): workers own contiguous slices and
// results are combined in slice order so thread count never changes output
template <typename Fn>
void parallel_slices(long n, int threads, Fn per_slice) {
    int t = std::max(1, threads);
    long chunk = (n + t - 1) / std::max<long>(1, t);
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w) {
        long lo = w * chunk, hi = std::min(n, (w + 1) * chunk);
        if (lo >= hi) break;
        pool.emplace_back([=] { per_slice(w, lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

CensusConfig load_config(const std::string& path) {
    CensusConfig cfg;
    std::ifstream in(path);
    if (!in) throw invalid_argument_error("config file not readable: " + path);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto notspace = line.find_first_not_of(" \t\r\n");
        if (notspace == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw parse_error("config line missing '='", lineno);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r\n");
            auto b = s.find_last_not_of(" \t\r\n");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void apply_config_line(CensusConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "max_disc")
            cfg.max_disc = std::stol(value);
        else if (key == "max_regulator")
            cfg.max_regulator = std::stod(value);
        else if (key == "coeff_bound")
            cfg.coeff_bound = std::stoi(value);
        else if (key == "set_S") {
            cfg.set_S.clear();
            std::istringstream is(value);
            std::string tok;
            while (std::getline(is, tok, ','))
                if (!tok.empty()) cfg.set_S.insert(std::stoul(tok));
        } else if (key == "class_bound_ceiling")
            cfg.class_bound_ceiling = std::stod(value);
        else if (key == "cache_dir")
            cfg.cache_dir = value;
        else if (key == "threads")
            cfg.threads = std::stoi(value);
        else if (key == "max_conductor_index")
            cfg.max_conductor_index = std::stoi(value);
        else
            throw invalid_argument_error("unknown config key: " + key);
    } catch (const std::logic_error&) {
        throw invalid_argument_error("bad value for config key " + key + ": " + value);
    }
}

double integral_log(double x) {
    if (x <= 2) return 0;
    // adaptive Simpson on 1/log t
    std::function<double(double, double, double, double, double, double)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole) -> double {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = 1.0 / std::log(lm), frm = 1.0 / std::log(rm);
        double left = (m - a) / 6 * (fa + 4 * flm + fm);
        double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (std::abs(left + right - whole) < 1e-12 * (1 + std::abs(whole)))
            return left + right;
        return rec(a, m, fa, flm, fm, left) + rec(m, b, fm, frm, fb, right);
    };
    double fa = 1.0 / std::log(2.0), fb = 1.0 / std::log(x), fm = 1.0 / std::log(0.5 * (2 + x));
    double whole = (x - 2) / 6 * (fa + 4 * fm + fb);
    return rec(2, x, fa, fm, fb, whole);
}

double big_l_function(double x) {
    if (x <= 1) return 0;
    std::function<double(double, double, double, double, double, double)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole) -> double {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = std::exp(lm) / lm, frm = std::exp(rm) / rm;
        double left = (m - a) / 6 * (fa + 4 * flm + fm);
        double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (std::abs(left + right - whole) < 1e-13 * (1 + std::abs(whole)))
            return left + right;
        return rec(a, m, fa, flm, fm, left) + rec(m, b, fm, frm, fb, right);
    };
    double fa = std::exp(1.0), fb = std::exp(x) / x, fm = std::exp(0.5 * (1 + x)) / (0.5 * (1 + x));
    double whole = (x - 1) / 6 * (fa + 4 * fm + fb);
    return rec(1, x, fa, fm, fb, whole);
}

double big_l_series(double x) {
    // L(x) = Ei(x) - Ei(1), Ei(x) = gamma + log x + sum_{k>=1} x^k/(k k!)
    auto ei = [](double v) {
        double gamma = 0.57721566490153286061;
        double sum = 0, term = 1;
        for (int k = 1; k < 200; ++k) {
            term *= v / k;
            double add = term / k;
            sum += add;
            if (std::abs(add) < 1e-17 * (1 + std::abs(sum)) && k > 4) break;
        }
        return gamma + std::log(v) + sum;
    };
    return ei(x) - ei(1.0);
}

void enumerate_quadratic(long limit_D,
                         const std::function<void(long, unsigned long, double)>& sink) {
    if (limit_D < 5) throw invalid_argument_error("enumerate_quadratic: limit must be >= 5");
    SpfTable spf(static_cast<std::uint32_t>(limit_D / 4 + 2));
    for (long D = 5; D <= limit_D; ++D) {
        if (!is_quadratic_discriminant(D)) continue;
        QuadUnit u = quadratic_fundamental_unit(D);
        unsigned long h = quadratic_class_number_fast(D, spf, u.norm);
        sink(D, h, u.log_value);
    }
}

CensusTable gauss_siegel_census(const CensusConfig& cfg) {
    long limit = cfg.max_disc;
    if (limit < 5) throw invalid_argument_error("gauss_siegel_census: max_disc >= 5 required");
    // geometric checkpoints 10^{2 + k/4} capped at limit, plus the limit
    std::vector<double> checkpoints;
    for (double e = 2.0; ; e += 0.25) {
        double x = std::pow(10.0, e);
        if (x >= static_cast<double>(limit)) break;
        if (x >= 100) checkpoints.push_back(x);
    }
    checkpoints.push_back(static_cast<double>(limit));

    // deterministic parallel partial sums of h R over D-slices
    int t = std::max(1, cfg.threads);
    std::vector<std::vector<double>> partials(t, std::vector<double>(checkpoints.size(), 0.0));
    SpfTable spf(static_cast<std::uint32_t>(limit / 4 + 2));
    long span = limit - 4;
    parallel_slices(span, t, [&](int w, long lo, long hi) {
        std::vector<double> local(checkpoints.size(), 0.0);
        std::vector<double> comp(checkpoints.size(), 0.0);
        for (long off = lo; off < hi; ++off) {
            long D = 5 + off;
            if (!is_quadratic_discriminant(D)) continue;
            double reg = quadratic_regulator(D);
            unsigned long h = quadratic_class_number_fast(D, spf, quadratic_unit_norm(D));
            // the classical x^{3/2} constant belongs to the form-normalised
            // sum h+ R+ = 2 h R (both unit-norm cases)
            double hr = 2.0 * static_cast<double>(h) * reg;
            for (size_t c = 0; c < checkpoints.size(); ++c) {
                if (static_cast<double>(D) <= checkpoints[c]) {
                    double y = hr - comp[c];
                    double s = local[c] + y;
                    comp[c] = (s - local[c]) - y;
                    local[c] = s;
                }
            }
        }
        partials[w] = local;
    });
    CensusTable out;
    out.metadata.emplace_back("census", "gauss-siegel");
    out.metadata.emplace_back("max_disc", std::to_string(limit));
    out.metadata.emplace_back("target", "pi^2 x^(3/2) / (18 zeta(3))");
    out.metadata.emplace_back("sum", "form-normalised h+ R+ = 2 h R");
    for (size_t c = 0; c < checkpoints.size(); ++c) {
        double sum = 0;
        for (int w = 0; w < t; ++w) sum += partials[w][c];
        CensusRow row;
        row.x = checkpoints[c];
        row.partial_sum = sum;
        row.target = kPi * kPi * std::pow(row.x, 1.5) / (18 * kZeta3);
        row.ratio = row.partial_sum / row.target;
        out.rows.push_back(row);
    }
    return out;
}

CensusTable sarnak_census(const CensusConfig& cfg) {
    double limit_R = cfg.max_regulator;
    if (!(limit_R > 0.4)) throw invalid_argument_error("sarnak_census: max_regulator too small");
    // completeness: R(O_D) <= x forces D <= 4 e^{2x}
    double dmax_d = 4.0 * std::exp(2.0 * limit_R) + 16;
    long dmax = static_cast<long>(dmax_d);
    std::vector<double> checkpoints;
    for (double x = 1.0; x < limit_R - 1e-9; x += 0.5) checkpoints.push_back(x);
    checkpoints.push_back(limit_R);

    int t = std::max(1, cfg.threads);
    // collect (R, h) pairs per slice, then merge in slice order
    std::vector<std::vector<std::pair<double, unsigned long>>> found(t);
    SpfTable spf(static_cast<std::uint32_t>(dmax / 4 + 2));
    parallel_slices(dmax - 4, t, [&](int w, long lo, long hi) {
        for (long off = lo; off < hi; ++off) {
            long D = 5 + off;
            if (!is_quadratic_discriminant(D)) continue;
            auto reg = quadratic_regulator_leq(D, limit_R);
            if (!reg) continue;
            unsigned long h = quadratic_class_number_fast(D, spf, quadratic_unit_norm(D));
            found[w].emplace_back(*reg, h);
        }
    });
    CensusTable out;
    out.metadata.emplace_back("census", "sarnak");
    out.metadata.emplace_back("max_regulator", format_real(limit_R));
    out.metadata.emplace_back("enumeration_bound_D", std::to_string(dmax));
    out.metadata.emplace_back("target", "L(2x)");
    for (double x : checkpoints) {
        double sum = 0;
        for (int w = 0; w < t; ++w)
            for (auto& [r, h] : found[w])
                if (r <= x) sum += static_cast<double>(h);
        CensusRow row;
        row.x = x;
        row.partial_sum = sum;
        row.target = big_l_function(2 * x);
        row.ratio = row.partial_sum / row.target;
        out.rows.push_back(row);
        double alt = std::exp(2 * x) / (2 * x);
        out.metadata.emplace_back("ratio_to_exp_target_at_" + format_real(x),
                                  format_real(sum / alt));
    }
    return out;
}

namespace {

struct FieldWork {
    IntPoly poly;
    mpz_class field_disc;
    std::string fingerprint;
};

std::string splitting_fingerprint(const OrderHandle& omax) {
    std::ostringstream os;
    os << omax->disc().get_str();
    OrderHandle h = omax;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        if (!h->maximal_at().count(p)) h = make_order_handle(p_maximal_order(*h, p));
        auto st = splitting_type(h, p);
        os << "|" << p << ":";
        for (auto& [e, f] : st.ef) os << e << "," << f << ";";
    }
    return os.str();
}

}  // namespace

std::vector<OrderInvariants> quartic_corpus(const CensusConfig& cfg, CorpusDiagnostics* diag) {
    if (cfg.set_S.empty() || cfg.set_S.size() % 2 != 0)
        throw invalid_argument_error("quartic_corpus: |S| must be even and nonzero");
    int B = cfg.coeff_bound;
    long side = 2ul * B + 1;
    long total = side * side * side * side;
    int t = std::max(1, cfg.threads);

    // stage 1: irreducible, squarefree, totally complex candidates
    std::vector<std::vector<IntPoly>> cand_slices(t);
    parallel_slices(total, t, [&](int w, long lo, long hi) {
        for (long idx = lo; idx < hi; ++idx) {
            long rest = idx;
            long c3 = rest % side - B;
            rest /= side;
            long c2 = rest % side - B;
            rest /= side;
            long c1 = rest % side - B;
            rest /= side;
            long c0 = rest % side - B;
            if (c0 == 0) continue;  // x divides
            IntPoly f({c0, c1, c2, c3, 1});
            if (!f.is_squarefree()) continue;
            if (!is_irreducible_monic(f)) continue;
            if (count_real_roots(f) != 0) continue;
            cand_slices[w].push_back(f);
        }
    });
    std::vector<IntPoly> candidates;
    for (auto& s : cand_slices)
        for (auto& f : s) candidates.push_back(f);
    // deterministic order regardless of slicing: sort by coefficient tuple
    std::sort(candidates.begin(), candidates.end(), [](const IntPoly& a, const IntPoly& b) {
        for (int i = 4; i >= 0; --i)
            if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
        return false;
    });
    if (diag) {
        diag->polynomials_scanned = total;
        diag->candidates = static_cast<long>(candidates.size());
    }

    // stage 2: fingerprints (parallel), then group and dedupe by isomorphism
    std::vector<FieldWork> work(candidates.size());
    parallel_slices(static_cast<long>(candidates.size()), t, [&](int, long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            FieldWork fw;
            fw.poly = candidates[i];
            auto F = make_field(fw.poly);
            OrderHandle om = make_order_handle(order_maximal_at(F, {}, true));
            fw.field_disc = om->disc();
            fw.fingerprint = splitting_fingerprint(om);
            work[i] = std::move(fw);
        }
    });
    std::map<std::string, std::vector<const FieldWork*>> groups;
    for (auto& fw : work) groups[fw.fingerprint].push_back(&fw);
    std::vector<IntPoly> fields;  // canonical representative per isomorphism class
    for (auto& [fp, members] : groups) {
        std::vector<const FieldWork*> reps;
        for (auto* m : members) {
            bool dup = false;
            for (auto* r : reps) {
                if (fields_isomorphic(make_field(r->poly), make_field(m->poly))) {
                    dup = true;
                    break;
                }
            }
            if (!dup) reps.push_back(m);
        }
        for (auto* r : reps) fields.push_back(r->poly);
    }
    std::sort(fields.begin(), fields.end(), [](const IntPoly& a, const IntPoly& b) {
        for (int i = 4; i >= 0; --i)
            if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
        return false;
    });
    if (diag) diag->fields = static_cast<long>(fields.size());

    // stage 3: classify and compute invariants per field (parallel, ordered)
    InvariantsCache cache(cfg.cache_dir, cfg.set_S);
    std::vector<std::optional<OrderInvariants>> rows(fields.size());
    std::vector<std::pair<std::string, std::string>> quarantine;
    std::mutex qmu;
    parallel_slices(static_cast<long>(fields.size()), t, [&](int, long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            const IntPoly& f = fields[i];
            std::string key = f.key();
            try {
                if (auto hit = cache.lookup(key)) {
                    // cheap re-validation: the cached disc must divide the
                    // equation-order disc by a square
                    mpz_class q;
                    mpz_class df = poly_discriminant(f);
                    if (hit->disc != 0 && df % hit->disc == 0) {
                        rows[i] = *hit;
                        continue;
                    }
                }
                auto F = make_field(f);
                FieldClass cls = classify_field(F, cfg.set_S);
                if (cls == FieldClass::NotInC) {
                    OrderInvariants row;
                    row.field_key = key;
                    row.cls = cls;
                    row.r = F->real_embeddings();
                    row.s = F->complex_pairs();
                    row.disc = 0;
                    rows[i] = row;
                    continue;
                }
                OrderHandle o = make_order_handle(order_maximal_at(F, cfg.set_S, true));
                OrderInvariants row;
                row.field_key = key;
                row.disc = o->disc();
                row.r = F->real_embeddings();
                row.s = F->complex_pairs();
                row.cls = cls;
                row.lambda_s = lambda_S(o, cfg.set_S);
                UnitData u = fundamental_unit(o);
                row.regulator = u.regulator.mid_double();
                row.mu = u.mu;
                row.kappa_val = kappa(o, u);
                row.nu = nu_invariant(o, u).mid_double();
                ClassGroupBudget cb;
                cb.ceiling = cfg.class_bound_ceiling;
                row.h = class_number(o, cb).h;
                rows[i] = row;
            } catch (const error& e) {
                std::lock_guard<std::mutex> lk(qmu);
                quarantine.emplace_back(key, e.what());
            }
        }
    });
    std::vector<OrderInvariants> out;
    for (auto& r : rows)
        if (r) out.push_back(*r);

    // optional suborder enumeration (conductor index > 1, coprime to S)
    if (cfg.max_conductor_index > 1) {
        std::vector<OrderInvariants> extra;
        for (auto& base : out) {
            if (base.cls == FieldClass::NotInC || base.field_key.find('#') != std::string::npos)
                continue;
            IntPoly f = IntPoly::from_key(base.field_key);
            auto F = make_field(f);
            OrderHandle omax = make_order_handle(order_maximal_at(F, cfg.set_S, true));
            auto auts = field_automorphisms(F);
            std::vector<ZMat> seen;
            for (int idx = 2; idx <= cfg.max_conductor_index; ++idx) {
                bool coprime = true;
                for (auto p : cfg.set_S)
                    if (idx % static_cast<int>(p) == 0) coprime = false;
                if (!coprime) continue;
                int ordinal = 0;
                // upper-triangular HNF matrices with det = idx: pick the
                // diagonal first, then each entry (r, c) above it runs over
                // [0, diag_c)
                std::vector<ZMat> cands;
                std::vector<long> diag(4, 1);
                std::function<void(int, long)> pick_diag = [&](int row, long rem) {
                    if (row == 4) {
                        if (rem != 1) return;
                        ZMat m(4, ZVec(4, mpz_class(0)));
                        for (int i = 0; i < 4; ++i) m[i][i] = diag[i];
                        std::vector<std::pair<int, int>> slots;
                        for (int r2 = 0; r2 < 4; ++r2)
                            for (int c2 = r2 + 1; c2 < 4; ++c2)
                                if (diag[c2] > 1) slots.emplace_back(r2, c2);
                        std::function<void(size_t)> fill = [&](size_t k) {
                            if (k == slots.size()) {
                                cands.push_back(m);
                                return;
                            }
                            auto [r2, c2] = slots[k];
                            for (long v = 0; v < diag[c2]; ++v) {
                                m[r2][c2] = v;
                                fill(k + 1);
                            }
                            m[r2][c2] = 0;
                        };
                        fill(0);
                        return;
                    }
                    for (long d = 1; d <= rem; ++d) {
                        if (rem % d) continue;
                        diag[row] = d;
                        pick_diag(row + 1, rem / d);
                        diag[row] = 1;
                    }
                };
                pick_diag(0, idx);
                for (auto& H : cands) {
                    // lattice basis in power coordinates
                    QMat nb(4, QVec(4, mpq_class(0)));
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b)
                            for (int c = 0; c < 4; ++c)
                                nb[a][c] += mpq_class(H[a][b]) * omax->basis()[b][c];
                    std::optional<Order> sub;
                    try {
                        sub.emplace(F, nb, cfg.set_S);
                    } catch (const internal_error&) {
                        continue;  // not closed under multiplication or no 1
                    }
                    // dedupe up to Aut(F)
                    ZMat canon = hnf_full_rank(H, 4);
                    bool dup = false;
                    for (auto& sg : seen)
                        if (sg == canon) dup = true;
                    if (!dup) {
                        for (auto& a : auts) {
                            if (a.is_identity) continue;
                            ZMat img;
                            bool ok = true;
                            for (auto& row2 : nb) {
                                QVec ipw = apply_automorphism(F, a, row2);
                                ZVec coords;
                                if (!omax->from_power_basis(ipw, coords)) {
                                    ok = false;
                                    break;
                                }
                                img.push_back(coords);
                            }
                            if (!ok) continue;
                            ZMat h2 = hnf_full_rank(std::move(img), 4);
                            for (auto& sg : seen)
                                if (sg == h2) dup = true;
                        }
                    }
                    if (dup) continue;
                    seen.push_back(canon);
                    try {
                        OrderHandle oh = make_order_handle(Order(*sub));
                        OrderInvariants row;
                        row.field_key =
                            base.field_key + "#c" + std::to_string(idx) + "-" +
                            std::to_string(ordinal++);
                        row.disc = oh->disc();
                        row.r = base.r;
                        row.s = base.s;
                        row.cls = base.cls;
                        row.lambda_s = base.lambda_s;
                        UnitData u = fundamental_unit(oh);
                        row.regulator = u.regulator.mid_double();
                        row.mu = u.mu;
                        row.kappa_val = kappa(oh, u);
                        row.nu = nu_invariant(oh, u).mid_double();
                        ClassGroupBudget cb;
                        cb.ceiling = cfg.class_bound_ceiling;
                        row.h = class_number(oh, cb).h;
                        extra.push_back(row);
                    } catch (const error& e) {
                        std::lock_guard<std::mutex> lk(qmu);
                        quarantine.emplace_back(base.field_key + "#c" + std::to_string(idx),
                                                e.what());
                    }
                }
            }
        }
        for (auto& r : extra) out.push_back(r);
    }

    if (diag) {
        for (auto& r : out) {
            if (r.cls == FieldClass::Cc) ++diag->cc;
            else if (r.cls == FieldClass::Cr) ++diag->cr;
            else ++diag->not_in_c;
        }
        diag->quarantined = quarantine;
    }
    // drop NotInC rows from the table itself (they carry no invariants)
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const OrderInvariants& r) { return r.cls == FieldClass::NotInC; }),
              out.end());
    for (auto& r : out) cache.store(r);
    return out;
}

namespace {

CensusTable pi_census_common(const std::vector<OrderInvariants>& corpus,
                             const std::set<unsigned long>& S,
                             const std::vector<double>& checkpoints, bool with_nu) {
    CensusTable out;
    out.metadata.emplace_back("census", with_nu ? "pi_tilde_S" : "pi_S");
    {
        std::ostringstream os;
        bool first = true;
        for (auto p : S) {
            if (!first) os << ",";
            os << p;
            first = false;
        }
        out.metadata.emplace_back("S", os.str());
    }
    out.metadata.emplace_back("note", "corpus enumeration is coefficient-bounded; every row is a lower bound");
    for (double x : checkpoints) {
        CensusRow row;
        row.x = x;
        double sum = 0;
        for (auto& r : corpus) {
            if (r.cls != FieldClass::Cc || r.h == 0) continue;
            if (r.regulator <= x) {
                double term = static_cast<double>(r.h) * r.lambda_s.get_d();
                if (with_nu) term *= r.nu;
                sum += term;
            }
        }
        row.partial_sum = sum;
        row.target = std::exp(4 * x) / ((with_nu ? 2 : 8) * x);
        row.ratio = row.partial_sum / row.target;
        row.lower_bound = true;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace

CensusTable pi_s_census(const std::vector<OrderInvariants>& corpus,
                        const std::set<unsigned long>& S,
                        const std::vector<double>& checkpoints) {
    return pi_census_common(corpus, S, checkpoints, false);
}

CensusTable pi_tilde_s_census(const std::vector<OrderInvariants>& corpus,
                              const std::set<unsigned long>& S,
                              const std::vector<double>& checkpoints) {
    return pi_census_common(corpus, S, checkpoints, true);
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {
const char* kHeader = "field_key,disc,r,s,h,regulator,mu,kappa,lambda_S,nu,class";
}

void emit_invariants_csv(const std::vector<OrderInvariants>& rows, std::ostream& os) {
    std::vector<OrderInvariants> sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const OrderInvariants& a, const OrderInvariants& b) {
                  if (a.field_key != b.field_key) return a.field_key < b.field_key;
                  return a.disc < b.disc;
              });
    os << kHeader << "\n";
    for (auto& r : sorted) {
        os << r.field_key << "," << r.disc.get_str() << "," << r.r << "," << r.s << "," << r.h
           << "," << format_real(r.regulator) << "," << r.mu << "," << r.kappa_val << ","
           << r.lambda_s.get_str() << "," << format_real(r.nu) << "," << field_class_name(r.cls)
           << "\n";
    }
}

void emit_invariants_csv(const std::vector<OrderInvariants>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_argument_error("cannot write " + path);
    emit_invariants_csv(rows, out);
}

std::vector<OrderInvariants> parse_invariants_csv(std::istream& is) {
    std::string line;
    long lineno = 0;
    std::vector<OrderInvariants> out;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kHeader) throw parse_error("bad header: expected '" + std::string(kHeader) + "'", lineno);
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        if (cols.size() != 11) throw parse_error("expected 11 columns", lineno);
        OrderInvariants r;
        try {
            r.field_key = cols[0];
            r.disc = mpz_class(cols[1]);
            r.r = std::stoi(cols[2]);
            r.s = std::stoi(cols[3]);
            r.h = std::stoul(cols[4]);
            r.regulator = std::stod(cols[5]);
            r.mu = std::stoul(cols[6]);
            r.kappa_val = std::stoi(cols[7]);
            r.lambda_s = mpz_class(cols[8]);
            r.nu = std::stod(cols[9]);
            if (cols[10] == "Cc") r.cls = FieldClass::Cc;
            else if (cols[10] == "Cr") r.cls = FieldClass::Cr;
            else if (cols[10] == "NotInC") r.cls = FieldClass::NotInC;
            else throw parse_error("unknown class '" + cols[10] + "'", lineno);
        } catch (const std::logic_error&) {
            throw parse_error("malformed row", lineno);
        }
        r.prov = OrderInvariants::Provenance::ingested;
        out.push_back(r);
    }
    if (!header_seen) throw parse_error("missing header", 0);
    return out;
}

std::vector<OrderInvariants> ingest_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_argument_error("cannot read " + path);
    auto rows = parse_invariants_csv(in);
    // validate: reparse the min poly, recompute signature and irreducibility
    long lineno = 1;
    for (auto& r : rows) {
        ++lineno;
        std::string base = r.field_key;
        auto hashpos = base.find('#');
        if (hashpos != std::string::npos) base = base.substr(0, hashpos);
        IntPoly f = IntPoly::from_key(base);
        if (f.degree() != 2 && f.degree() != 4)
            throw parse_error("field_key degree not 2 or 4", lineno);
        if (!is_irreducible_monic(f.canonical()))
            throw parse_error("field_key polynomial reducible", lineno);
        int nr = count_real_roots(f.canonical());
        if (nr != r.r || (f.degree() - nr) / 2 != r.s)
            throw parse_error("signature mismatch for " + r.field_key, lineno);
        if (r.disc != 0) {
            mpz_class df = poly_discriminant(f.canonical());
            mpq_class ratio(df, r.disc);
            ratio.canonicalize();
            if (!is_square(ratio.get_num()) || !is_square(ratio.get_den()))
                throw parse_error("disc not related to the polynomial by a square", lineno);
        }
    }
    return rows;
}

void emit_census_csv(const CensusTable& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_argument_error("cannot write " + path);
    for (auto& [k, v] : t.metadata) out << "# " << k << "=" << v << "\n";
    out << "x,partial_sum,target,ratio,lower_bound\n";
    for (auto& r : t.rows)
        out << format_real(r.x) << "," << format_real(r.partial_sum) << ","
            << format_real(r.target) << "," << format_real(r.ratio) << ","
            << (r.lower_bound ? 1 : 0) << "\n";
}

void cross_check(std::vector<OrderInvariants>& ingested,
                 const std::vector<OrderInvariants>& computed) {
    std::map<std::string, const OrderInvariants*> by_key;
    for (auto& c : computed) by_key[c.field_key + "/" + c.disc.get_str()] = &c;
    for (auto& r : ingested) {
        auto it = by_key.find(r.field_key + "/" + r.disc.get_str());
        if (it == by_key.end()) continue;
        const OrderInvariants& c = *it->second;
        auto fail = [&](const std::string& col) {
            throw data_conflict_error("cross_check: " + r.field_key + " column " + col);
        };
        if (r.h != c.h) fail("h");
        if (r.mu != c.mu) fail("mu");
        if (r.kappa_val != c.kappa_val) fail("kappa");
        if (r.lambda_s != c.lambda_s) fail("lambda_S");
        if (std::abs(r.regulator - c.regulator) > 1e-9 * (1 + std::abs(c.regulator)))
            fail("regulator");
        if (std::abs(r.nu - c.nu) > 1e-9 * (1 + std::abs(c.nu))) fail("nu");
        if (r.cls != c.cls) fail("class");
        r.prov = OrderInvariants::Provenance::cross_checked;
    }
}

InvariantsCache::InvariantsCache(const std::string& dir, const std::set<unsigned long>& S) {
    if (dir.empty()) return;
    std::ostringstream os;
    os << dir << "/invariants_cache_S";
    bool first = true;
    for (auto p : S) {
        os << (first ? "" : "-") << p;
        first = false;
    }
    os << ".csv";
    path_ = os.str();
    std::ifstream in(path_, std::ios::binary);
    if (in) {
        try {
            for (auto& r : parse_invariants_csv(in)) rows_[r.field_key] = r;
        } catch (const parse_error&) {
            rows_.clear();  // corrupt cache: ignore
        }
    }
}

std::optional<OrderInvariants> InvariantsCache::lookup(const std::string& field_key) const {
    auto it = rows_.find(field_key);
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

void InvariantsCache::store(const OrderInvariants& row) {
    if (path_.empty()) return;
    if (rows_.count(row.field_key)) return;
    bool existed = !rows_.empty();
    rows_[row.field_key] = row;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) return;
    if (!existed) {
        std::ostringstream hdr;
        out << kHeader << "\n";
    }
    std::ostringstream line;
    std::vector<OrderInvariants> one{row};
    std::ostringstream tmp;
    emit_invariants_csv(one, tmp);
    std::string s = tmp.str();
    out << s.substr(s.find('\n') + 1);
}

}  // namespace qc
