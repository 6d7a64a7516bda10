#include "qcensus/rep_verifier.hpp"

#include <cmath>
#include <sstream>

#include "qcensus/errors.hpp"

namespace qc {

KMType KMType::delta_lk(int l, int k) {
    if (l == 0 && k == 0) throw invalid_argument_error("delta_lk: (l,k) must not be (0,0)");
    if (l < 0 || (l == 0 && k < 0)) {
        l = -l;
        k = -k;
    }
    return {DeltaLK, l, k};
}

bool KMType::operator<(const KMType& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (l != o.l) return l < o.l;
    return k < o.k;
}

bool KMType::operator==(const KMType& o) const {
    return kind == o.kind && l == o.l && k == o.k;
}

std::string KMType::str() const {
    switch (kind) {
        case Triv: return "triv";
        case Delta: return "delta";
        default: {
            std::ostringstream os;
            os << "delta(" << l << "," << k << ")";
            return os.str();
        }
    }
}

mpq_class KMCharacter::dim() const {
    mpq_class d = 0;
    for (auto& [lk, c] : fourier) d += c;
    return d;
}

KMCharacter KMCharacter::operator+(const KMCharacter& o) const {
    KMCharacter r = *this;
    for (auto& [lk, c] : o.fourier) {
        r.fourier[lk] += c;
        if (r.fourier[lk] == 0) r.fourier.erase(lk);
    }
    r.swap_value += o.swap_value;
    return r;
}

KMCharacter KMCharacter::operator*(const KMCharacter& o) const {
    KMCharacter r;
    for (auto& [a, ca] : fourier)
        for (auto& [b, cb] : o.fourier) {
            std::pair<int, int> key{a.first + b.first, a.second + b.second};
            r.fourier[key] += ca * cb;
            if (r.fourier[key] == 0) r.fourier.erase(key);
        }
    r.swap_value = swap_value * o.swap_value;
    return r;
}

KMCharacter KMCharacter::scaled(const mpq_class& c) const {
    KMCharacter r;
    if (c == 0) return r;
    for (auto& [lk, v] : fourier) r.fourier[lk] = v * c;
    r.swap_value = swap_value * c;
    return r;
}

KMCharacter KMCharacter::power_substitute(int m) const {
    KMCharacter r;
    for (auto& [lk, c] : fourier) r.fourier[{lk.first * m, lk.second * m}] += c;
    // swap-coset elements square to the identity, so chi(g^m) is the
    // dimension for even m and the swap value for odd m
    r.swap_value = (m % 2 == 0) ? dim() : swap_value;
    return r;
}

double KMCharacter::eval_identity(double theta, double phi) const {
    double s = 0;
    for (auto& [lk, c] : fourier) s += c.get_d() * std::cos(lk.first * theta + lk.second * phi);
    // imaginary parts cancel because coefficients come in (l,k)/(-l,-k) pairs
    return s;
}

KMCharacter character_of(const KMType& t) {
    KMCharacter c;
    switch (t.kind) {
        case KMType::Triv:
            c.fourier[{0, 0}] = 1;
            c.swap_value = 1;
            break;
        case KMType::Delta:
            c.fourier[{0, 0}] = 1;
            c.swap_value = -1;
            break;
        default:
            c.fourier[{t.l, t.k}] = 1;
            c.fourier[{-t.l, -t.k}] += 1;
            c.swap_value = 0;
            break;
    }
    return c;
}

KMCharacter character_of(const VirtualDecomposition& d) {
    KMCharacter c;
    for (auto& [t, m] : d) c = c + character_of(t).scaled(mpq_class(m));
    return c;
}

std::complex<double> km_character(const KMType& t, double theta, double phi,
                                  bool swap_component) {
    if (swap_component) {
        switch (t.kind) {
            case KMType::Triv: return {1, 0};
            case KMType::Delta: return {-1, 0};
            default: return {0, 0};
        }
    }
    switch (t.kind) {
        case KMType::Triv: return {1, 0};
        case KMType::Delta: return {1, 0};
        default: return {2 * std::cos(t.l * theta + t.k * phi), 0};
    }
}

KMCharacter seed_character(ExteriorSpace space) {
    VirtualDecomposition d;
    if (space == ExteriorSpace::pM) {
        d[KMType::delta_lk(2, 0)] = 1;
        d[KMType::delta_lk(0, 2)] = 1;
    } else {
        d[KMType::delta()] = 2;
        d[KMType::delta_lk(2, 0)] = 1;
        d[KMType::delta_lk(0, 2)] = 1;
    }
    return character_of(d);
}

KMCharacter exterior_power(const KMCharacter& chi, int n) {
    // Newton: n e_n = sum_{m=1..n} (-1)^{m-1} e_{n-m} p_m
    std::vector<KMCharacter> e(n + 1);
    e[0].fourier[{0, 0}] = 1;
    e[0].swap_value = 1;
    std::vector<KMCharacter> p(n + 1);
    for (int m = 1; m <= n; ++m) p[m] = chi.power_substitute(m);
    for (int d = 1; d <= n; ++d) {
        KMCharacter acc;
        for (int m = 1; m <= d; ++m) {
            KMCharacter term = e[d - m] * p[m];
            if (m % 2 == 0) term = term.scaled(mpq_class(-1));
            acc = acc + term;
        }
        e[d] = acc.scaled(mpq_class(1, d));
    }
    return e[n];
}

VirtualDecomposition decompose_character(const KMCharacter& chi) {
    VirtualDecomposition out;
    KMCharacter rest = chi;
    // two-dimensional types first: coefficient at canonical (l,k) != (0,0)
    for (auto& [lk, c] : chi.fourier) {
        auto [l, k] = lk;
        if (l == 0 && k == 0) continue;
        if (l < 0 || (l == 0 && k < 0)) continue;  // canonical representative
        mpq_class other = 0;
        auto it = chi.fourier.find({-l, -k});
        if (it != chi.fourier.end()) other = it->second;
        if (c != other) throw internal_error("decompose_character: uneven conjugate pair");
        if (c.get_den() != 1)
            throw internal_error("decompose_character: non-integral multiplicity");
        if (c != 0) out[KMType::delta_lk(l, k)] = static_cast<int>(c.get_num().get_si());
    }
    // remaining: a triv + b delta with a + b = c00, a - b = swap
    mpq_class c00 = 0;
    auto it = chi.fourier.find({0, 0});
    if (it != chi.fourier.end()) c00 = it->second;
    mpq_class a = (c00 + chi.swap_value) / 2;
    mpq_class b = (c00 - chi.swap_value) / 2;
    if (a.get_den() != 1 || b.get_den() != 1)
        throw internal_error("decompose_character: triv/delta split not integral");
    if (a != 0) out[KMType::triv()] = static_cast<int>(a.get_num().get_si());
    if (b != 0) out[KMType::delta()] = static_cast<int>(b.get_num().get_si());
    // exact reassembly check
    KMCharacter back = character_of(out);
    if (!(back.fourier == chi.fourier) || back.swap_value != chi.swap_value)
        throw internal_error("decompose_character: reassembly mismatch");
    return out;
}

VirtualDecomposition decompose_exterior(ExteriorSpace space, int n) {
    int dim = (space == ExteriorSpace::pM) ? 4 : 6;
    if (n < 0 || n > dim) throw invalid_argument_error("decompose_exterior: n out of range");
    return decompose_character(exterior_power(seed_character(space), n));
}

namespace {

const long kA[5] = {1, -3, 6, -10, 15};

// character of sigma-tilde = sum_n a_{4-n} Lambda^n m
KMCharacter sigma_tilde_character() {
    KMCharacter m = seed_character(ExteriorSpace::m);
    KMCharacter acc;
    for (int n = 0; n <= 4; ++n)
        acc = acc + exterior_power(m, n).scaled(mpq_class(kA[4 - n]));
    return acc;
}

}  // namespace

AkReport verify_ak_identity() {
    AkReport rep;
    rep.ok = true;
    for (int k = 0; k <= 4; ++k) {
        // sum_{m=0..k} a_{k-m} C(2,m), C(2,m) = 1,2,1 for m = 0,1,2
        long sum = 0;
        for (int m = 0; m <= k && m <= 2; ++m) {
            long binom = (m == 1) ? 2 : 1;
            sum += kA[k - m] * binom;
        }
        long want = (k % 2 == 0) ? 1 : -1;
        rep.residuals.push_back(sum - want);
        if (sum != want) rep.ok = false;
    }
    // character identity Lambda*(m/b) = sigma-tilde on a 12x12 grid
    KMCharacter st = sigma_tilde_character();
    double worst = 0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            double th = 2 * 3.14159265358979323846 * (i + 0.33) / 12;
            double ph = 2 * 3.14159265358979323846 * (j + 0.71) / 12;
            // det(1 - b | m/b) with eigenvalues e^{+-2i th}, e^{+-2i ph}
            double lhs = 4.0 * (1 - std::cos(2 * th)) * (1 - std::cos(2 * ph));
            double rhs = st.eval_identity(th, ph);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    rep.grid_residual = worst;
    if (worst > 1e-12) rep.ok = false;
    return rep;
}

double sigma_tilde_trace(double theta, double phi) {
    double closed = 4.0 * (1 - std::cos(2 * theta)) * (1 - std::cos(2 * phi));
    static const KMCharacter st = sigma_tilde_character();
    double virt = st.eval_identity(theta, phi);
    if (std::abs(closed - virt) > 1e-12 * (1 + std::abs(closed)))
        throw numeric_inconsistency_error("sigma_tilde_trace: routes disagree");
    return closed;
}

double weyl_integral(int grid_size) {
    if (grid_size < 4) throw invalid_argument_error("weyl_integral: grid_size >= 4 required");
    double two_pi = 2 * 3.14159265358979323846;
    // (1/2) (1/4pi^2) sum 16 sin^2 sin^2 (2pi/g)^2
    double s = 0;
    for (int i = 0; i < grid_size; ++i) {
        double t = two_pi * i / grid_size;
        s += std::sin(t) * std::sin(t);
    }
    double cell = two_pi / grid_size;
    return 0.5 * (1.0 / (4 * 3.14159265358979323846 * 3.14159265358979323846)) * 16.0 * s * s *
           cell * cell;
}

}  // namespace qc
