#pragma once

#include <functional>
#include <string>
#include <vector>

namespace blwork {

inline int sequence_cap_default() { return 100000; }

enum class SeqKind { lemma_a, lemma_1, lemma_2, ones, zeros };
const char* seq_kind_name(SeqKind k);

// Integer slope data indexed from k = 1; entries[1..3] vanish.
struct SlopeSequence {
    SeqKind kind = SeqKind::zeros;
    double p1 = 0.0, p2 = 0.0;   // lambda, or (gamma, delta)
    std::vector<int> entries;     // entries[k-1]
    std::vector<int> marked;      // k with a unit entry, for 0/1 kinds
    bool remainder_carry = false; // rounding rule flag for reports

    int size() const { return int(entries.size()); }
    int at(int k) const;
};

SlopeSequence build_lemma_a(double lambda, int kcap = sequence_cap_default());
SlopeSequence build_lemma_1(double gamma, double delta, int kcap = sequence_cap_default());
// n_k with N_k = m_k + 2n_k + 1 following gamma (2 pi k)^{gamma-1}
SlopeSequence build_lemma_2(double gamma, const SlopeSequence& m_seq);
SlopeSequence unit_from(int k0, int kcap = sequence_cap_default());
SlopeSequence zero_sequence(int kcap = sequence_cap_default());

// alpha(x) = log(x + 2 pi)^{-3}
double lemma1_alpha(double x);

// Continuous piecewise-linear function on [0, inf) with integer slopes on
// [2 pi (k-1), 2 pi k]; values at breakpoints are 2 pi times integer sums.
class StepProfile {
public:
    StepProfile() = default;
    explicit StepProfile(std::vector<long long> slopes);

    double operator()(double x) const;
    // exact breakpoint value / (2 pi)
    long long cum(int k) const { return cum_.at(k); }
    long long slope(int k) const { return slopes_.at(k - 1); }
    int size() const { return int(slopes_.size()); }
    // inverse for strictly positive slopes
    double inverse(double y) const;

private:
    std::vector<long long> slopes_, cum_;
};

struct ProfileBundle {
    std::vector<long long> N;     // N[k-1] = N_k
    std::vector<long long> calN;  // calN[k] = N_1 + ... + N_k, calN[0] = 0
    StepProfile h1, h2, H;        // slopes m_k, n_k, N_k
    std::function<double(double)> target;   // H(g(x)) = target(x)

    double omega(double x) const { return H(x) - x; }
    double g(double x) const { return H.inverse(target(x)); }
    long long Nk(int k) const { return N.at(k - 1); }
    // k with 2 pi calN[k-1] <= y < 2 pi calN[k]
    int strip_of_height(double y) const;
};

// target = identity when gamma == 1, else x^gamma.
ProfileBundle build_profiles(const SlopeSequence& m, const SlopeSequence& n, double gamma = 1.0);

struct CaseSelection {
    int case_id = 1;  // I, II, III
    int l = 1;
    SlopeSequence m_seq, n_seq;
};

CaseSelection select_case(double lambda1, double lambda2, int kcap = sequence_cap_default());

std::string sequences_csv(const SlopeSequence& m, const SlopeSequence& n, int kmax);

} // namespace blwork
