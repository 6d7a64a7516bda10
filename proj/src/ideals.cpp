#include "qcensus/ideals.hpp"

#include <sstream>

namespace qc {

namespace {

bool lattice_contains(const ZMat& hnf, ZVec x) {
    // hnf is upper-echelon (pivot of row i strictly right of row i-1's), so
    // eliminate pivot columns top-down; later rows never touch earlier pivots
    int n = static_cast<int>(hnf.size());
    for (int i = 0; i < n; ++i) {
        int pc = -1;
        for (int j = 0; j < static_cast<int>(hnf[i].size()); ++j)
            if (hnf[i][j] != 0) {
                pc = j;
                break;
            }
        if (pc < 0) continue;
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x[pc].get_mpz_t(), hnf[i][pc].get_mpz_t());
        if (r != 0) return false;
        if (q != 0)
            for (int j = 0; j < static_cast<int>(x.size()); ++j) x[j] -= q * hnf[i][j];
    }
    for (auto& v : x)
        if (v != 0) return false;
    return true;
}

}  // namespace

OrderIdeal ideal_from_generators(const OrderHandle& o, const ZMat& gens) {
    int n = o->degree();
    // close under multiplication by the order basis
    ZMat rows = gens;
    for (auto& g : gens) {
        for (int i = 0; i < n; ++i) {
            ZVec e(n, mpz_class(0));
            e[i] = 1;
            rows.push_back(o->mul(g, e));
        }
    }
    ZMat h = hnf_rows(std::move(rows));
    if (static_cast<int>(h.size()) != n) throw internal_error("ideal_from_generators: not full rank");
    // closure fixpoint: multiplying HNF rows by basis elements must stay inside
    while (true) {
        bool stable = true;
        ZMat extra;
        for (auto& r : h) {
            for (int i = 0; i < n; ++i) {
                ZVec e(n, mpz_class(0));
                e[i] = 1;
                ZVec prod = o->mul(r, e);
                if (!lattice_contains(h, prod)) {
                    extra.push_back(prod);
                    stable = false;
                }
            }
        }
        if (stable) break;
        for (auto& r : h) extra.push_back(r);
        h = hnf_rows(std::move(extra));
    }
    OrderIdeal I{o, h, mpz_class(0)};
    ZMat copy = h;
    I.norm = zmat_det(std::move(copy));
    if (I.norm < 0) I.norm = -I.norm;
    return I;
}

OrderIdeal ideal_whole(const OrderHandle& o) {
    int n = o->degree();
    return OrderIdeal{o, zmat_identity(n), mpz_class(1)};
}

OrderIdeal ideal_principal(const OrderHandle& o, const ZVec& gen) {
    int n = o->degree();
    ZMat rows;
    for (int i = 0; i < n; ++i) {
        ZVec e(n, mpz_class(0));
        e[i] = 1;
        rows.push_back(o->mul(gen, e));
    }
    ZMat h = hnf_rows(std::move(rows));
    if (static_cast<int>(h.size()) != n) throw internal_error("ideal_principal: zero generator");
    OrderIdeal I{o, h, mpz_class(0)};
    ZMat copy = h;
    I.norm = zmat_det(std::move(copy));
    if (I.norm < 0) I.norm = -I.norm;
    return I;
}

OrderIdeal ideal_mul(const OrderIdeal& a, const OrderIdeal& b) {
    int n = a.order->degree();
    ZMat rows;
    rows.reserve(n * n);
    for (auto& x : a.hnf)
        for (auto& y : b.hnf) rows.push_back(a.order->mul(x, y));
    ZMat h = hnf_rows(std::move(rows));
    OrderIdeal I{a.order, h, mpz_class(0)};
    ZMat copy = h;
    I.norm = zmat_det(std::move(copy));
    if (I.norm < 0) I.norm = -I.norm;
    return I;
}

OrderIdeal ideal_pow(const OrderIdeal& a, int e) {
    OrderIdeal acc = ideal_whole(a.order);
    OrderIdeal base = a;
    while (e > 0) {
        if (e & 1) acc = ideal_mul(acc, base);
        base = ideal_mul(base, base);
        e >>= 1;
    }
    return acc;
}

bool ideal_contains(const OrderIdeal& I, const ZVec& x) { return lattice_contains(I.hnf, x); }

bool ideal_subset(const OrderIdeal& I, const OrderIdeal& J) {
    for (auto& r : I.hnf)
        if (!lattice_contains(J.hnf, r)) return false;
    return true;
}

bool ideal_equal(const OrderIdeal& I, const OrderIdeal& J) { return I.hnf == J.hnf; }

int ideal_valuation(const OrderIdeal& I, const OrderIdeal& P, int maxk) {
    OrderIdeal pk = ideal_whole(I.order);
    int v = 0;
    while (v < maxk) {
        pk = ideal_mul(pk, P);
        if (!ideal_subset(I, pk)) return v;
        ++v;
    }
    return v;
}

std::string ideal_key(const OrderIdeal& I) {
    std::ostringstream os;
    for (auto& row : I.hnf) {
        for (auto& v : row) os << v.get_str() << ",";
        os << ";";
    }
    return os.str();
}

}  // namespace qc
