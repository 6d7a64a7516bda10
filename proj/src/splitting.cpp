#include "qcensus/splitting.hpp"

#include <algorithm>

#include "qcensus/subfields.hpp"
#include "qcensus/zmod_poly.hpp"

namespace qc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 invmod_u64(u64 a, u64 p) {
    u64 e = p - 2, acc = 1;
    a %= p;
    while (e) {
        if (e & 1) acc = static_cast<u64>((u128)acc * a % p);
        a = static_cast<u64>((u128)a * a % p);
        e >>= 1;
    }
    return acc;
}

// O/pO as an F_p algebra in the order basis
struct FpAlgebra {
    u64 p;
    int n;
    std::vector<std::vector<std::vector<u64>>> t;
    std::vector<u64> one;

    std::vector<u64> mul(const std::vector<u64>& a, const std::vector<u64>& b) const {
        std::vector<u64> out(n, 0);
        for (int i = 0; i < n; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (!b[j]) continue;
                u64 c = static_cast<u64>((u128)a[i] * b[j] % p);
                for (int k = 0; k < n; ++k) out[k] = (out[k] + (u128)c * t[i][j][k]) % p;
            }
        }
        return out;
    }
};

FpAlgebra algebra_mod_p(const Order& o, u64 p) {
    int n = o.degree();
    FpAlgebra A{p, n, {}, {}};
    A.t.assign(n, std::vector<std::vector<u64>>(n, std::vector<u64>(n, 0)));
    mpz_class pz(p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ZVec a(n, mpz_class(0)), b(n, mpz_class(0));
            a[i] = 1;
            b[j] = 1;
            ZVec prod = o.mul(a, b);
            for (int k = 0; k < n; ++k) {
                mpz_class r = prod[k] % pz;
                if (r < 0) r += pz;
                A.t[i][j][k] = r.get_ui();
            }
        }
    A.one.assign(n, 0);
    ZVec e = o.one();
    for (int i = 0; i < n; ++i) {
        mpz_class r = e[i] % pz;
        if (r < 0) r += pz;
        A.one[i] = r.get_ui();
    }
    return A;
}

// the semisimple quotient B = A / rad(A), with explicit projection/lift
struct QuotientAlgebra {
    const FpAlgebra* A;
    int m;                                   // dim B
    std::vector<std::vector<u64>> rad_rref;  // RREF of the radical, by rows
    std::vector<int> rad_pivot;              // pivot column of each RREF row
    std::vector<int> free_cols;              // complement columns = B coords

    std::vector<u64> project(std::vector<u64> x) const {
        u64 p = A->p;
        for (size_t r = 0; r < rad_rref.size(); ++r) {
            int c = rad_pivot[r];
            if (x[c]) {
                u64 f = x[c];  // rref pivot is 1
                for (int j = 0; j < A->n; ++j)
                    x[j] = (x[j] + p - static_cast<u64>((u128)f * rad_rref[r][j] % p)) % p;
            }
        }
        std::vector<u64> out(m);
        for (int k = 0; k < m; ++k) out[k] = x[free_cols[k]];
        return out;
    }
    std::vector<u64> lift(const std::vector<u64>& xb) const {
        std::vector<u64> x(A->n, 0);
        for (int k = 0; k < m; ++k) x[free_cols[k]] = xb[k];
        return x;
    }
    std::vector<u64> mul(const std::vector<u64>& a, const std::vector<u64>& b) const {
        return project(A->mul(lift(a), lift(b)));
    }
    std::vector<u64> one() const { return project(A->one); }
};

// RREF over F_p; returns pivot columns
void rref_mod_p(std::vector<std::vector<u64>>& rows, u64 p, std::vector<int>& pivots) {
    pivots.clear();
    if (rows.empty()) return;
    int ncols = static_cast<int>(rows[0].size());
    int r = 0;
    for (int c = 0; c < ncols && r < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][c]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[piv], rows[r]);
        u64 inv = invmod_u64(rows[r][c], p);
        for (int j = 0; j < ncols; ++j) rows[r][j] = static_cast<u64>((u128)rows[r][j] * inv % p);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || !rows[i][c]) continue;
            u64 f = rows[i][c];
            for (int j = 0; j < ncols; ++j)
                rows[i][j] = (rows[i][j] + p - static_cast<u64>((u128)f * rows[r][j] % p)) % p;
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
}

// minimal polynomial of b in the unital algebra (unit = `unit`), via linear
// dependency of its powers; mul = algebra multiplication
template <typename MulFn>
ZpPoly minpoly_generic(u64 p, const std::vector<u64>& unit, std::vector<u64> b, MulFn mul,
                       int dim_bound) {
    std::vector<std::vector<u64>> pows;
    std::vector<u64> cur = unit;
    for (int d = 0; d <= dim_bound; ++d) {
        std::vector<std::vector<u64>> m = pows;
        m.push_back(cur);
        PMat pm{p, m};
        auto ker = pmat_left_kernel(pm);
        for (auto& k : ker) {
            if (k.back() != 0) {
                u64 inv = invmod_u64(k.back(), p);
                std::vector<u64> c(d + 1);
                for (int i = 0; i <= d; ++i) c[i] = static_cast<u64>((u128)k[i] * inv % p);
                return ZpPoly(p, c);
            }
        }
        pows.push_back(cur);
        cur = mul(cur, b);
    }
    throw internal_error("minpoly_generic: no dependency found");
}

}  // namespace

std::vector<PrimeFactor> prime_ideals_above(const OrderHandle& order, unsigned long p) {
    if (!order->maximal_at().count(p))
        throw invalid_argument_error("prime_ideals_above: order not certified p-maximal");
    const Order& o = *order;
    int n = o.degree();
    FpAlgebra A = algebra_mod_p(o, p);

    // radical = kernel of Frobenius iterated so that p^k >= n
    int kk = 1;
    {
        unsigned long pk = p;
        while (pk < static_cast<unsigned long>(n)) {
            pk *= p;
            ++kk;
        }
    }
    PMat frob{p, std::vector<std::vector<u64>>(n)};
    for (int i = 0; i < n; ++i) {
        std::vector<u64> e(n, 0);
        e[i] = 1;
        std::vector<u64> acc = A.one, base = e;
        unsigned long ee = p;
        while (ee) {
            if (ee & 1) acc = A.mul(acc, base);
            base = A.mul(base, base);
            ee >>= 1;
        }
        frob.m[i] = acc;
    }
    PMat frob_k = pmat_pow(frob, kk);
    auto radbasis = pmat_left_kernel(frob_k);

    QuotientAlgebra B;
    B.A = &A;
    B.rad_rref = radbasis;
    rref_mod_p(B.rad_rref, p, B.rad_pivot);
    {
        std::vector<bool> is_pivot(n, false);
        for (int c : B.rad_pivot) is_pivot[c] = true;
        for (int c = 0; c < n; ++c)
            if (!is_pivot[c]) B.free_cols.push_back(c);
    }
    B.m = static_cast<int>(B.free_cols.size());

    // deterministic candidate pool in B coordinates
    std::vector<std::vector<u64>> cands;
    {
        for (int i = 0; i < B.m; ++i) {
            std::vector<u64> e(B.m, 0);
            e[i] = 1;
            cands.push_back(e);
        }
        for (int i = 0; i < B.m; ++i)
            for (int j = i + 1; j < B.m; ++j)
                for (u64 c = 1; c <= std::min<u64>(p - 1, 4); ++c) {
                    std::vector<u64> e(B.m, 0);
                    e[i] = 1;
                    e[j] = c % p;
                    cands.push_back(e);
                }
        // products of basis pairs as a last resort
        for (int i = 0; i < B.m; ++i)
            for (int j = i; j < B.m; ++j) {
                std::vector<u64> a(B.m, 0), b(B.m, 0);
                a[i] = 1;
                b[j] = 1;
                cands.push_back(B.mul(a, b));
            }
    }

    // split B into certified field components via idempotents
    struct Comp {
        std::vector<u64> idem;  // B coords
        int dim;                // dim of idem * B
        int f = -1;             // certified residue degree once known
    };
    auto comp_dim = [&](const std::vector<u64>& e) {
        std::vector<std::vector<u64>> rows;
        for (int i = 0; i < B.m; ++i) {
            std::vector<u64> bi(B.m, 0);
            bi[i] = 1;
            rows.push_back(B.mul(bi, e));
        }
        std::vector<int> piv;
        rref_mod_p(rows, p, piv);
        return static_cast<int>(rows.size());
    };
    std::vector<Comp> done;
    std::vector<Comp> work{{B.one(), B.m, -1}};
    while (!work.empty()) {
        Comp comp = work.back();
        work.pop_back();
        if (comp.dim == 1) {
            comp.f = 1;
            done.push_back(comp);
            continue;
        }
        bool resolved = false;
        for (auto& c0 : cands) {
            std::vector<u64> b = B.mul(comp.idem, c0);
            ZpPoly mp = minpoly_generic(
                p, comp.idem, b, [&](const std::vector<u64>& x, const std::vector<u64>& y) {
                    return B.mul(x, y);
                },
                comp.dim + 1);
            auto fac = factor_mod_p(mp.lift(), p);
            if (fac.size() == 1 && fac[0].second == 1) {
                if (fac[0].first.degree() == comp.dim) {
                    // irreducible of full degree: certified field
                    comp.f = comp.dim;
                    done.push_back(comp);
                    resolved = true;
                    break;
                }
                continue;  // irreducible but small: try another element
            }
            if (fac.size() == 1) continue;  // primary power: no information
            // split: CRT idempotents for each factor g^mult of mp
            for (auto& [gz, mult] : fac) {
                ZpPoly g = ZpPoly::from_int_poly(gz, p);
                ZpPoly gm(p, {1});
                for (int t2 = 0; t2 < mult; ++t2) gm = gm * g;
                ZpPoly q, r;
                mp.divrem(gm, q, r);
                if (!r.is_zero()) throw internal_error("splitting: exact division failed");
                ZpPoly u, v;
                ZpPoly gg = xgcd(q, gm, u, v);
                if (gg.degree() != 0) throw internal_error("splitting: factors not coprime");
                ZpPoly uq = (u * q).mod(mp);
                // evaluate uq at b with unit comp.idem
                std::vector<u64> acc(B.m, 0);
                for (int k2 = uq.degree(); k2 >= 0; --k2) {
                    acc = B.mul(acc, b);
                    u64 cc = uq.coeff(k2);
                    for (int i = 0; i < B.m; ++i)
                        acc[i] = (acc[i] + (u128)cc * comp.idem[i]) % p;
                }
                Comp sub{acc, comp_dim(acc), -1};
                work.push_back(sub);
            }
            resolved = true;
            break;
        }
        if (!resolved)
            throw internal_error("prime_ideals_above: could not certify component as a field");
    }

    // build the prime ideals
    std::vector<PrimeFactor> out;
    mpz_class pz(p);
    OrderIdeal pO = [&] {
        ZVec o1 = o.one();
        ZVec pgen(n);
        for (int i = 0; i < n; ++i) pgen[i] = o1[i] * pz;
        return ideal_principal(order, pgen);
    }();
    for (auto& comp : done) {
        // kernel of A -> B -> component: x maps to project(x) * idem
        // matrix rows: image of each A-basis vector, in B coords
        PMat mm{p, std::vector<std::vector<u64>>(n)};
        for (int i = 0; i < n; ++i) {
            std::vector<u64> e(n, 0);
            e[i] = 1;
            mm.m[i] = B.mul(B.project(e), comp.idem);
        }
        auto ker = pmat_left_kernel(mm);
        ZMat gens;
        for (int i = 0; i < n; ++i) {
            ZVec row(n, mpz_class(0));
            row[i] = pz;
            gens.push_back(row);
        }
        for (auto& v : ker) {
            ZVec row(n);
            for (int j = 0; j < n; ++j) row[j] = mpz_class(static_cast<unsigned long>(v[j]));
            gens.push_back(row);
        }
        OrderIdeal P = ideal_from_generators(order, gens);
        mpz_class want_norm;
        mpz_pow_ui(want_norm.get_mpz_t(), pz.get_mpz_t(), comp.f);
        if (P.norm != want_norm) throw internal_error("prime_ideals_above: norm != p^f");
        int ram = ideal_valuation(pO, P, 2 * n);
        out.push_back(PrimeFactor{P, ram, comp.f});
    }
    std::sort(out.begin(), out.end(), [](const PrimeFactor& a, const PrimeFactor& b) {
        if (a.f != b.f) return a.f < b.f;
        if (a.e != b.e) return a.e < b.e;
        return a.ideal.hnf < b.ideal.hnf;
    });
    int total = 0;
    for (auto& pf : out) total += pf.e * pf.f;
    if (total != n) throw internal_error("prime_ideals_above: sum e_i f_i != degree");
    return out;
}

SplittingType splitting_type(const OrderHandle& order, unsigned long p) {
    if (!order->maximal_at().count(p))
        throw invalid_argument_error("splitting_type: order not certified p-maximal");
    const Order& o = *order;
    // index of the equation order inside o: disc(f) = disc(o) * index^2
    mpz_class df = poly_discriminant(o.field()->min_poly());
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), df.get_mpz_t(), o.disc().get_mpz_t());
    mpz_class idx;
    mpz_sqrt(idx.get_mpz_t(), q.get_mpz_t());
    mpz_class pz(p);
    SplittingType st;
    if (idx % pz != 0) {
        for (auto& [g, m] : factor_mod_p(o.field()->min_poly(), p))
            st.ef.emplace_back(m, g.degree());
    } else {
        for (auto& pf : prime_ideals_above(order, p)) st.ef.emplace_back(pf.e, pf.f);
    }
    std::sort(st.ef.begin(), st.ef.end());
    if (st.degree_sum() != o.degree()) throw internal_error("splitting_type: sum e f mismatch");
    return st;
}

bool is_non_decomposed(const OrderHandle& order, unsigned long p) {
    return splitting_type(order, p).ef.size() == 1;
}

mpz_class lambda_S(const OrderHandle& order, const std::set<unsigned long>& S) {
    if (S.empty() || S.size() % 2 != 0)
        throw invalid_argument_error("lambda_S: S must be non-empty of even size");
    mpz_class out = 1;
    for (unsigned long p : S) {
        SplittingType st = splitting_type(order, p);
        if (st.ef.size() != 1)
            throw field_not_in_cs_error("lambda_S: p = " + std::to_string(p) +
                                        " is decomposed in the field");
        out *= st.ef[0].second;
    }
    return out;
}

FieldClass classify_field(const FieldPtr& field, const std::set<unsigned long>& S) {
    if (field->degree() != 4) throw invalid_argument_error("classify_field: degree must be 4");
    if (!field->totally_complex()) return FieldClass::NotInC;
    OrderHandle o = make_order_handle(order_maximal_at(field, S));
    for (unsigned long p : S)
        if (!is_non_decomposed(o, p)) return FieldClass::NotInC;
    for (auto& d : quadratic_subfields(field))
        if (d > 0) return FieldClass::Cr;
    return FieldClass::Cc;
}

const char* field_class_name(FieldClass c) {
    switch (c) {
        case FieldClass::Cc: return "Cc";
        case FieldClass::Cr: return "Cr";
        default: return "NotInC";
    }
}

}  // namespace qc
