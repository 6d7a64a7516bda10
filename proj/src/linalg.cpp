#include "qcensus/linalg.hpp"

#include <algorithm>

#include "qcensus/errors.hpp"

namespace qc {

QMat qmat_identity(int n) {
    QMat m(n, QVec(n, mpq_class(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMat qmat_mul(const QMat& a, const QMat& b) {
    int n = static_cast<int>(a.size());
    int k = static_cast<int>(b.size());
    int mcols = k ? static_cast<int>(b[0].size()) : 0;
    QMat r(n, QVec(mcols, mpq_class(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            if (a[i][j] == 0) continue;
            for (int c = 0; c < mcols; ++c) r[i][c] += a[i][j] * b[j][c];
        }
    return r;
}

QVec qmat_vec_mul(const QVec& v, const QMat& m) {
    int k = static_cast<int>(m.size());
    int cols = k ? static_cast<int>(m[0].size()) : 0;
    QVec r(cols, mpq_class(0));
    for (int j = 0; j < k; ++j) {
        if (v[j] == 0) continue;
        for (int c = 0; c < cols; ++c) r[c] += v[j] * m[j][c];
    }
    return r;
}

mpq_class qmat_det(QMat a) {
    int n = static_cast<int>(a.size());
    mpq_class det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        mpq_class inv = 1 / a[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            mpq_class f = a[r][c] * inv;
            for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

QMat qmat_inverse(const QMat& a) {
    int n = static_cast<int>(a.size());
    QMat m = a;
    QMat inv = qmat_identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw internal_error("qmat_inverse: singular matrix");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        mpq_class d = 1 / m[c][c];
        for (int j = 0; j < n; ++j) {
            m[c][j] *= d;
            inv[c][j] *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            mpq_class f = m[r][c];
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

QVec qmat_solve_left(const QMat& a, const QVec& b) { return qmat_vec_mul(b, qmat_inverse(a)); }

ZMat zmat_identity(int n) {
    ZMat m(n, ZVec(n, mpz_class(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

ZVec zmat_vec_mul(const ZVec& v, const ZMat& m) {
    int k = static_cast<int>(m.size());
    int cols = k ? static_cast<int>(m[0].size()) : 0;
    ZVec r(cols, mpz_class(0));
    for (int j = 0; j < k; ++j) {
        if (v[j] == 0) continue;
        for (int c = 0; c < cols; ++c) r[c] += v[j] * m[j][c];
    }
    return r;
}

mpz_class zmat_det(ZMat a) {
    int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    mpz_class prev = 1, sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                mpz_class t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = t;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

ZMat hnf_rows(ZMat a) {
    int rows = static_cast<int>(a.size());
    if (rows == 0) return a;
    int cols = static_cast<int>(a[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        // reduce column c below row r by gcd steps
        while (true) {
            int piv = -1;
            for (int i = r; i < rows; ++i)
                if (a[i][c] != 0) {
                    if (piv < 0 || abs(a[i][c]) < abs(a[piv][c])) piv = i;
                }
            if (piv < 0) break;
            std::swap(a[piv], a[r]);
            if (a[r][c] < 0)
                for (auto& x : a[r]) x = -x;
            bool clean = true;
            for (int i = r + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                mpz_class q = a[i][c] / a[r][c];  // truncated ok; loop converges
                if (q != 0)
                    for (int j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (a[r][c] != 0) {
            // reduce entries above the pivot
            for (int i = 0; i < r; ++i) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
                if (q != 0)
                    for (int j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
            }
            ++r;
        }
    }
    a.resize(r);
    return a;
}

ZMat hnf_full_rank(ZMat a, int n) {
    ZMat h = hnf_rows(std::move(a));
    if (static_cast<int>(h.size()) != n) throw internal_error("hnf_full_rank: rank deficient");
    return h;
}

ZMat z_left_kernel(const ZMat& a) {
    // kernel via HNF of [A | I]: rows whose A-part is zero give kernel of A
    int m = static_cast<int>(a.size());
    int n = m ? static_cast<int>(a[0].size()) : 0;
    ZMat big(m, ZVec(n + m, mpz_class(0)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) big[i][j] = a[i][j];
        big[i][n + i] = 1;
    }
    ZMat h = hnf_rows(std::move(big));
    ZMat ker;
    for (auto& row : h) {
        bool zero = true;
        for (int j = 0; j < n; ++j)
            if (row[j] != 0) {
                zero = false;
                break;
            }
        if (zero) ker.emplace_back(row.begin() + n, row.end());
    }
    return ker;
}

std::vector<mpz_class> zmat_charpoly(const ZMat& a) {
    int n = static_cast<int>(a.size());
    // Faddeev-LeVerrier: M_0 = I, c_n = 1;
    // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
    std::vector<mpz_class> c(n + 1);
    c[n] = 1;
    ZMat m = zmat_identity(n);
    auto matmul = [n](const ZMat& x, const ZMat& y) {
        ZMat r(n, ZVec(n, mpz_class(0)));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (x[i][k] == 0) continue;
                for (int j = 0; j < n; ++j) r[i][j] += x[i][k] * y[k][j];
            }
        return r;
    };
    for (int k = 1; k <= n; ++k) {
        ZMat am = matmul(a, m);
        mpz_class tr = 0;
        for (int i = 0; i < n; ++i) tr += am[i][i];
        mpz_class ck;
        mpz_class num = -tr;
        mpz_class kk(static_cast<long>(k));
        mpz_divexact(ck.get_mpz_t(), num.get_mpz_t(), kk.get_mpz_t());
        c[n - k] = ck;
        if (k < n) {
            m = am;
            for (int i = 0; i < n; ++i) m[i][i] += ck;
        }
    }
    return c;
}

std::vector<mpz_class> smith_diagonal(ZMat a) {
    // alternate row and column HNF passes until diagonal, then fix the
    // divisibility chain
    auto transpose = [](const ZMat& m) {
        if (m.empty()) return m;
        ZMat t(m[0].size(), ZVec(m.size()));
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
        return t;
    };
    bool diag = false;
    for (int pass = 0; pass < 64 && !diag; ++pass) {
        a = hnf_rows(std::move(a));
        diag = true;
        for (size_t i = 0; i < a.size() && diag; ++i)
            for (size_t j = 0; j < a[i].size() && diag; ++j)
                if (i != j && a[i][j] != 0) diag = false;
        if (!diag) a = transpose(a);
    }
    if (!diag) throw internal_error("smith_diagonal: did not converge");
    // square up: collect nonzero diagonal entries
    std::vector<mpz_class> d;
    for (size_t i = 0; i < a.size(); ++i)
        if (i < a[i].size() && a[i][i] != 0) d.push_back(abs(a[i][i]));
    // enforce divisibility d[i] | d[i+1]
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i + 1] % d[i] != 0) {
                mpz_class g, l;
                mpz_gcd(g.get_mpz_t(), d[i].get_mpz_t(), d[i + 1].get_mpz_t());
                l = d[i] / g * d[i + 1];
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

namespace {
using u64 = std::uint64_t;
using u128 = unsigned __int128;
u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }
u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}
}  // namespace

PMat pmat_mul(const PMat& a, const PMat& b) {
    int n = static_cast<int>(a.m.size());
    int k = static_cast<int>(b.m.size());
    int cols = k ? static_cast<int>(b.m[0].size()) : 0;
    PMat r{a.p, std::vector<std::vector<u64>>(n, std::vector<u64>(cols, 0))};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            if (!a.m[i][j]) continue;
            for (int c = 0; c < cols; ++c)
                r.m[i][c] = (r.m[i][c] + (u128)a.m[i][j] * b.m[j][c]) % a.p;
        }
    return r;
}

PMat pmat_pow(PMat a, unsigned long e) {
    int n = static_cast<int>(a.m.size());
    PMat r{a.p, std::vector<std::vector<u64>>(n, std::vector<u64>(n, 0))};
    for (int i = 0; i < n; ++i) r.m[i][i] = 1;
    while (e) {
        if (e & 1) r = pmat_mul(r, a);
        a = pmat_mul(a, a);
        e >>= 1;
    }
    return r;
}

std::vector<std::vector<u64>> pmat_left_kernel(const PMat& a) {
    // Row-reduce [A^T] to find x with x A = 0  <=>  A^T x^T = 0
    int m = static_cast<int>(a.m.size());
    int n = m ? static_cast<int>(a.m[0].size()) : 0;
    u64 p = a.p;
    // build A^T (n rows, m cols)
    std::vector<std::vector<u64>> t(n, std::vector<u64>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) t[j][i] = a.m[i][j];
    // gaussian elimination on t, tracking pivot columns
    std::vector<int> pivot_of_col(m, -1);
    int rank = 0;
    for (int col = 0; col < m && rank < n; ++col) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (t[r][col]) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(t[piv], t[rank]);
        u64 inv = powmod(t[rank][col], p - 2, p);
        for (int j = 0; j < m; ++j) t[rank][j] = mulmod(t[rank][j], inv, p);
        for (int r = 0; r < n; ++r) {
            if (r == rank || !t[r][col]) continue;
            u64 f = t[r][col];
            for (int j = 0; j < m; ++j)
                t[r][j] = (t[r][j] + p - mulmod(f, t[rank][j], p)) % p;
        }
        pivot_of_col[col] = rank;
        ++rank;
    }
    std::vector<std::vector<u64>> ker;
    for (int col = 0; col < m; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<u64> v(m, 0);
        v[col] = 1;
        for (int c2 = 0; c2 < m; ++c2) {
            int pr = pivot_of_col[c2];
            if (pr >= 0) v[c2] = (p - t[pr][col]) % p;
        }
        ker.push_back(v);
    }
    return ker;
}

}  // namespace qc
