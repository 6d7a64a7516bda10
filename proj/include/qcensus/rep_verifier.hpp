#ifndef QCENSUS_REP_VERIFIER_HPP
#define QCENSUS_REP_VERIFIER_HPP

#include <gmpxx.h>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace qc {

/* Irreducible type of S(O(2) x O(2)): trivial, the determinant character
 * delta, or the two-dimensional delta_{l,k} (identified with
 * delta_{-l,-k}). */
struct KMType {
    enum Kind { Triv, Delta, DeltaLK } kind = Triv;
    int l = 0, k = 0;  // canonical: l > 0, or l == 0 and k > 0

    static KMType triv() { return {Triv, 0, 0}; }
    static KMType delta() { return {Delta, 0, 0}; }
    static KMType delta_lk(int l, int k);

    bool operator<(const KMType& o) const;
    bool operator==(const KMType& o) const;
    std::string str() const;
    int dim() const { return kind == DeltaLK ? 2 : 1; }
};

using VirtualDecomposition = std::map<KMType, int>;

/* Exact class function on the two-component group: integer Fourier
 * coefficients c_{l,k} of e^{i(l theta + k phi)} on the identity component
 * plus a constant value on the swap coset. */
struct KMCharacter {
    std::map<std::pair<int, int>, mpq_class> fourier;
    mpq_class swap_value = 0;

    mpq_class dim() const;
    KMCharacter operator+(const KMCharacter& o) const;
    KMCharacter operator*(const KMCharacter& o) const;
    KMCharacter scaled(const mpq_class& c) const;
    KMCharacter power_substitute(int m) const;  // chi(g^m)
    double eval_identity(double theta, double phi) const;
};

KMCharacter character_of(const KMType& t);
KMCharacter character_of(const VirtualDecomposition& d);

/* Character value of a single type: identity component triv -> 1, delta -> 1,
 * delta_{l,k} -> 2 cos(l theta + k phi); swap coset 1, -1, 0. */
std::complex<double> km_character(const KMType& t, double theta, double phi, bool swap_component);

enum class ExteriorSpace { pM, m };

/* Seed modules: p_M = delta_{2,0} + delta_{0,2};  m = 2 delta + delta_{2,0}
 * + delta_{0,2}.  Exterior powers by Newton's identities on exact Fourier
 * data; decomposition by matching coefficients (all multiplicities must come
 * out integral). */
KMCharacter seed_character(ExteriorSpace space);
KMCharacter exterior_power(const KMCharacter& chi, int n);
VirtualDecomposition decompose_character(const KMCharacter& chi);
VirtualDecomposition decompose_exterior(ExteriorSpace space, int n);

/* sum_{m=0..k} a_{k-m} C(2,m) = (-1)^k for (a_0..a_4) = (1,-3,6,-10,15),
 * plus the virtual-module identity  Lambda*(m/b) = sum_n a_{4-n} Lambda^n m
 * checked at character level on a 12x12 grid.  Residuals returned per k and
 * max grid residual. */
struct AkReport {
    bool ok = false;
    std::vector<long> residuals;  // exact residual of the integer identity
    double grid_residual = 0;
};
AkReport verify_ak_identity();

/* Closed form 4 (1 - cos 2 theta)(1 - cos 2 phi); cross-evaluated against
 * the virtual character sum of sum_n a_{4-n} Lambda^n m to 1e-12. */
double sigma_tilde_trace(double theta, double phi);

/* (1/|W|) integral over B of |D(b)|^2 with D = -4 sin theta sin phi, by the
 * periodic rectangle rule (exact for trig polynomials once grid_size >= 4).
 * Equals 2. */
double weyl_integral(int grid_size);

}  // namespace qc

#endif
