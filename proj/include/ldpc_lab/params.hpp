#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ldpc_lab {

// Exact rational, used for the design rate.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rational&) const = default;

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// Parameters of the (l, r=kl, L, M) coupled ensemble.
struct EnsembleParams {
    int l = 3;       // variable degree, odd, >= 3
    int k = 2;       // checks-to-variables ratio, r = k*l
    long L = 1;      // chain has 2L+1 sections
    long M = 2;      // variables per section, divisible by k

    int r() const { return k * l; }
    int lhat() const { return (l - 1) / 2; }
    long num_sections() const { return 2 * L + 1; }
    long num_check_positions() const { return 2 * (L + lhat()) + 1; }
    long num_variables() const { return M * num_sections(); }
    long num_checks() const { return num_check_positions() * (M / k); }
    long copies() const { return M / k; }

    void validate() const {
        if (l < 3 || l % 2 == 0)
            throw std::invalid_argument("variable degree l must be odd and >= 3, got " +
                                        std::to_string(l));
        if (k < 2)
            throw std::invalid_argument("ratio parameter k must be >= 2, got " + std::to_string(k));
        if (L < 1)
            throw std::invalid_argument("half chain length L must be >= 1, got " + std::to_string(L));
        if (M < 1 || M % k != 0)
            throw std::invalid_argument("M must be positive and divisible by k, got M=" +
                                        std::to_string(M) + " k=" + std::to_string(k));
    }
};

// R = (k-1)/k - 2*lhat / (k*(2L+1)), exact.
inline Rational design_rate(const EnsembleParams& p) {
    p.validate();
    std::int64_t sections = 2 * static_cast<std::int64_t>(p.L) + 1;
    Rational r{(p.k - 1) * sections - 2 * p.lhat(), p.k * sections};
    r.reduce();
    return r;
}

}  // namespace ldpc_lab
