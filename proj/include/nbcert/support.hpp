#pragma once

#include <string>

#include <gmpxx.h>

namespace nbcert {

// Exact support value S(l|t) = N/n * prod_j(numer_j / N), stored as the
// integer product of the d numerators together with N, n and d. The value it
// denotes is prod / (n * N^(d-1)). No floating point anywhere: with d in the
// dozens the product underflows double and strict-inequality verdicts flip.
struct Support {
    mpz_class prod = 0;
    long long label_count = 0;  // N_i
    long long total = 0;        // n
    int dim = 0;                // d

    bool is_zero() const { return prod == 0 || label_count == 0; }
};

// Three-way exact comparison via cross-multiplication:
//   a <=> b  ==  prod_a * N_b^(d-1)  <=>  prod_b * N_a^(d-1)
// (the common factor n cancels; both sides must come from the same dataset).
int compare(const Support& a, const Support& b);

// Reduced exact fraction "p/q".
std::string to_fraction(const Support& s);

}  // namespace nbcert
