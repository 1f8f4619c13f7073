#include "blwork/coefficients.hpp"

#include <algorithm>

namespace blwork {

const char* variant_name(Variant v)
{
    return v == Variant::plain ? "plain" : "half-shift";
}

Variant parse_variant(const std::string& s)
{
    if (s == "plain") return Variant::plain;
    if (s == "half-shift" || s == "half_shift" || s == "half") return Variant::half_shift;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

std::string PairIndex::str() const
{
    return "(" + std::to_string(m) + "," + std::to_string(n) + ")";
}

void check_pair(const PairIndex& p, int cap)
{
    if (p.m < 0 || p.n < 0) throw std::invalid_argument("pair indices must be nonnegative");
    if (p.m > cap || p.n > cap)
        throw CapError("pair " + p.str() + " exceeds cap " + std::to_string(cap));
}

mpz_class factorial(unsigned k)
{
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), k);
    return r;
}

mpz_class binomial(unsigned n, unsigned k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

mpq_class CoefficientTable::leading_product() const
{
    return A.back() * B.back();
}

mpq_class CoefficientTable::identity_value(const PairIndex& p)
{
    mpq_class v(factorial(p.m) * factorial(p.L()), 1);
    mpz_class d = factorial(p.m + p.L());
    v /= mpq_class(d * d, 1);
    v.canonicalize();
    return v;
}

bool CoefficientTable::identity_holds() const
{
    // B_{2n} carries the sign (-1)^{2n} = +1
    return leading_product() == identity_value(pair);
}

CoefficientTable build_coefficients(const PairIndex& pair, int cap)
{
    check_pair(pair, cap);
    const unsigned m = pair.m, L = pair.L(), s = m + L;
    CoefficientTable t;
    t.pair = pair;
    t.A.resize(m + 1);
    t.B.resize(L + 1);

    // Ratios avoid recomputing factorials:
    //   A_{i+1}/A_i = (m-i) / ((i+1)(s-i))
    //   B_{j+1}/B_j = -(L-j) / ((j+1)(s-j))
    t.A[0] = 1;
    for (unsigned i = 0; i < m; ++i) {
        t.A[i + 1] = t.A[i] * mpq_class(m - i, (i + 1) * mpz_class(s - i));
        t.A[i + 1].canonicalize();
    }
    t.B[0] = 1;
    for (unsigned j = 0; j < L; ++j) {
        t.B[j + 1] = -t.B[j] * mpq_class(L - j, (j + 1) * mpz_class(s - j));
        t.B[j + 1].canonicalize();
    }
    return t;
}

std::vector<mpq_class> remainder_series(const CoefficientTable& t, int count)
{
    const int N = t.pair.N(), L = t.pair.L();
    std::vector<mpq_class> out;
    out.reserve(count);
    // 1/(k-j)! for j = 0..L, updated incrementally in k
    std::vector<mpq_class> inv_fact(N + count + 1);
    inv_fact[0] = 1;
    for (int k = 1; k < (int)inv_fact.size(); ++k) {
        inv_fact[k] = inv_fact[k - 1] / k;
    }
    for (int k = N; k < N + count; ++k) {
        mpq_class c = 0;
        for (int j = 0; j <= std::min(L, k); ++j) c += t.B[j] * inv_fact[k - j];
        // A_k = 0 for k > m and k >= N > m
        c.canonicalize();
        out.push_back(c);
    }
    return out;
}

} // namespace blwork
