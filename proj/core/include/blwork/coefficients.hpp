#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace blwork {

enum class Variant { plain, half_shift };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

inline int pair_cap_default() { return 10000; }

// Pair (m, 2n) indexing the model g_{m,n}; N = m + 2n + 1.
struct PairIndex {
    int m = 0;
    int n = 0;

    int N() const { return m + 2 * n + 1; }
    // degree of the numerator polynomial in w = e^z
    int L() const { return 2 * n; }

    friend bool operator==(const PairIndex&, const PairIndex&) = default;
    friend auto operator<=>(const PairIndex&, const PairIndex&) = default;

    std::string str() const;
};

class CapError : public std::length_error {
public:
    using std::length_error::length_error;
};

void check_pair(const PairIndex& p, int cap = pair_cap_default());

// Exact coefficients of g_{m,n}(z) = P(e^z)/Q(e^z) * exp(e^z) with
// Q(w) = sum A_i w^i and P(w) = sum B_j w^j.
//
// P/Q is the (2n, m) Pade approximant of e^{-w}, so P(w)e^w - Q(w) vanishes to
// order N at w = 0 and g' = C w^{N-1} e^w / Q(w)^2 with C = A_m B_{2n}.
struct CoefficientTable {
    PairIndex pair;
    std::vector<mpq_class> A;  // length m+1
    std::vector<mpq_class> B;  // length 2n+1

    // C = A_m * B_{2n} as stored (signed)
    mpq_class leading_product() const;
    // m!(2n)!/((m+2n)!)^2
    static mpq_class identity_value(const PairIndex& p);
    bool identity_holds() const;
};

CoefficientTable build_coefficients(const PairIndex& pair, int cap = pair_cap_default());

mpz_class factorial(unsigned k);
mpz_class binomial(unsigned n, unsigned k);

// Exact Taylor coefficients c_k of D(w) = P(w)e^w - Q(w) for k in [N, N+count).
std::vector<mpq_class> remainder_series(const CoefficientTable& t, int count);

} // namespace blwork
