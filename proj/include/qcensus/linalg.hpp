#ifndef QCENSUS_LINALG_HPP
#define QCENSUS_LINALG_HPP

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace qc {

using QMat = std::vector<std::vector<mpq_class>>;
using ZMat = std::vector<std::vector<mpz_class>>;
using QVec = std::vector<mpq_class>;
using ZVec = std::vector<mpz_class>;

QMat qmat_identity(int n);
QMat qmat_mul(const QMat& a, const QMat& b);
QVec qmat_vec_mul(const QVec& v, const QMat& m);  // row vector times matrix
mpq_class qmat_det(QMat a);
QMat qmat_inverse(const QMat& a);  // throws internal_error if singular
// solve x A = b for a row vector x (A square invertible)
QVec qmat_solve_left(const QMat& a, const QVec& b);

ZMat zmat_identity(int n);
mpz_class zmat_det(ZMat a);  // Bareiss
ZVec zmat_vec_mul(const ZVec& v, const ZMat& m);

/* Row Hermite normal form of the lattice generated by the rows of A
 * (rows may be dependent or redundant).  Returns a full-row-rank matrix in
 * upper echelon shape with positive pivots and entries above each pivot
 * reduced into [0, pivot). */
ZMat hnf_rows(ZMat a);

/* HNF restricted to full-rank square lattices in Z^n: always returns n rows. */
ZMat hnf_full_rank(ZMat a, int n);

/* Basis of the left kernel {x in Z^m : x A = 0} of an m x n integer matrix. */
ZMat z_left_kernel(const ZMat& a);

/* Characteristic polynomial coefficients (constant first) of an integer
 * matrix, exact (Faddeev-LeVerrier). */
std::vector<mpz_class> zmat_charpoly(const ZMat& a);

/* Nontrivial diagonal entries of the Smith normal form (divisibility chain,
 * positive, product = |det| for full-rank square input). */
std::vector<mpz_class> smith_diagonal(ZMat a);

/* F_p dense matrices (word-sized p). */
struct PMat {
    std::uint64_t p;
    std::vector<std::vector<std::uint64_t>> m;
};
PMat pmat_mul(const PMat& a, const PMat& b);
PMat pmat_pow(PMat a, unsigned long e);
// basis of the left kernel {x : x M = 0} over F_p
std::vector<std::vector<std::uint64_t>> pmat_left_kernel(const PMat& a);

}  // namespace qc

#endif
