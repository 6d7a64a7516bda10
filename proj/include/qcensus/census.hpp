#ifndef QCENSUS_CENSUS_HPP
#define QCENSUS_CENSUS_HPP

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "qcensus/class_group.hpp"
#include "qcensus/geodesic.hpp"
#include "qcensus/splitting.hpp"

namespace qc {

/* One census row: everything the counting functions need about an order. */
struct OrderInvariants {
    std::string field_key;  // canonical min-poly "c0:c1:c2:c3:1"; suborders
                            // carry a "#cN-k" suffix (conductor index, ordinal)
    mpz_class disc;
    int r = 0, s = 0;
    unsigned long h = 0;  // 0 = not computed (quarantined)
    double regulator = 0;
    unsigned long mu = 2;
    int kappa_val = 1;
    mpz_class lambda_s = 1;
    double nu = 0;
    FieldClass cls = FieldClass::NotInC;
    enum class Provenance { computed, ingested, cross_checked } prov = Provenance::computed;
};

struct CensusRow {
    double x = 0;
    double partial_sum = 0;
    double target = 0;
    double ratio = 0;
    bool lower_bound = false;  // enumeration may undercount at this x
};

struct CensusTable {
    std::vector<CensusRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

struct CensusConfig {
    long max_disc = 100000;
    double max_regulator = 6.0;
    int coeff_bound = 8;
    std::set<unsigned long> set_S = {2, 3};
    double class_bound_ceiling = 60.0;
    std::string cache_dir;
    int threads = 1;
    int max_conductor_index = 1;
};

/* Plain key=value file; '#' comments; unknown keys rejected. */
CensusConfig load_config(const std::string& path);
void apply_config_line(CensusConfig& cfg, const std::string& key, const std::string& value);

/* li(x) = int_2^x dt/log t and L(x) = int_1^x e^t/t dt (adaptive Simpson). */
double integral_log(double x);
double big_l_function(double x);
/* Convergent-series route for L (oracle): Ei via gamma + log x + sum x^k/(k k!). */
double big_l_series(double x);

/* Every non-square D = 0,1 mod 4 in [5, limit] with h(O_D) and R(O_D). */
void enumerate_quadratic(long limit_D,
                         const std::function<void(long D, unsigned long h, double R)>& sink);

/* Gauss-Siegel: partial sums of h R over D <= x against pi^2 x^{3/2}/(18 zeta(3)). */
CensusTable gauss_siegel_census(const CensusConfig& cfg);

/* Sarnak: sums of h over R(O_D) <= x against e^{2x}/(2x) and L(2x) (the
 * table carries the L target; the e^{2x}/2x ratio goes into metadata rows). */
CensusTable sarnak_census(const CensusConfig& cfg);

struct CorpusDiagnostics {
    long polynomials_scanned = 0;
    long candidates = 0;
    long fields = 0;
    long cc = 0, cr = 0, not_in_c = 0;
    std::vector<std::pair<std::string, std::string>> quarantined;  // key, reason
};

/* Deduplicated totally complex quartic fields from the coefficient box with
 * all invariants for the members of C(S); deterministic under any thread
 * count. */
std::vector<OrderInvariants> quartic_corpus(const CensusConfig& cfg,
                                            CorpusDiagnostics* diag = nullptr);

CensusTable pi_s_census(const std::vector<OrderInvariants>& corpus,
                        const std::set<unsigned long>& S, const std::vector<double>& checkpoints);
CensusTable pi_tilde_s_census(const std::vector<OrderInvariants>& corpus,
                              const std::set<unsigned long>& S,
                              const std::vector<double>& checkpoints);

/* CSV with header field_key,disc,r,s,h,regulator,mu,kappa,lambda_S,nu,class;
 * reals in 12-significant-digit decimal, LF endings, bit-stable. */
void emit_invariants_csv(const std::vector<OrderInvariants>& rows, std::ostream& os);
void emit_invariants_csv(const std::vector<OrderInvariants>& rows, const std::string& path);
std::vector<OrderInvariants> ingest_table(const std::string& path);
std::vector<OrderInvariants> parse_invariants_csv(std::istream& is);

void emit_census_csv(const CensusTable& t, const std::string& path);
std::string format_real(double v);  // 12 significant digits, bit-stable

/* Cross-check ingested rows against computed ones; matching rows get
 * cross_checked provenance, mismatches raise data_conflict_error naming the
 * field_key and column. */
void cross_check(std::vector<OrderInvariants>& ingested,
                 const std::vector<OrderInvariants>& computed);

/* Append-only cache keyed by field_key (one file per S-convention). */
class InvariantsCache {
  public:
    InvariantsCache(const std::string& dir, const std::set<unsigned long>& S);
    std::optional<OrderInvariants> lookup(const std::string& field_key) const;
    void store(const OrderInvariants& row);
    bool enabled() const { return !path_.empty(); }

  private:
    std::string path_;
    std::map<std::string, OrderInvariants> rows_;
};

}  // namespace qc

#endif
