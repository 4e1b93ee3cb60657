#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace walkoff {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

// sinc(x) = sin(x)/x with sinc(0) = 1; even; |sinc| <= 1.
// Taylor branch keeps full double accuracy through the removable singularity.
inline double sinc(double x) {
    double ax = std::abs(x);
    if (ax < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

// d/dx sinc(x) = (cos x - sinc x)/x, odd, 0 at x = 0.
inline double sinc_prime(double x) {
    double ax = std::abs(x);
    if (ax < 1e-4) {
        double x2 = x * x;
        return -x / 3.0 * (1.0 - x2 / 10.0);
    }
    return (std::cos(x) - std::sin(x) / x) / x;
}

// Pairwise (cascade) summation: O(log n) error growth and a fixed evaluation
// tree, so results are independent of caller threading.
double pairwise_sum(const double* v, std::size_t n);

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

// Streaming accumulator with the same fixed binary-tree reduction order as
// pairwise_sum over the pushed sequence. Used so that a streaming pass and a
// materialize-then-reduce pass produce bit-identical sums.
class PairwiseAccumulator {
public:
    explicit PairwiseAccumulator(std::size_t vector_len);
    void push(const double* v);            // adds one length-vector_len term
    std::vector<double> finish() const;    // collapses partial sums (low rank first)
    std::size_t count() const { return count_; }

private:
    std::size_t len_;
    std::size_t count_ = 0;
    // level[r] holds the sum of a complete block of 2^r consecutive terms.
    std::vector<std::vector<double>> levels_;
    std::vector<bool> occupied_;
};

// Top-two singular values of a dense row-major complex matrix via power
// iteration with one deflation step. Deterministic fixed starting vector and
// iteration count; accuracy is ample for rank-gap threshold tests.
struct TopSingularValues {
    double sigma1;
    double sigma2;
    double frobenius_sq;
};
TopSingularValues top_two_singular_values(const std::complex<double>* a, std::size_t rows,
                                          std::size_t cols);

// FNV-1a 64-bit, used for output manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace walkoff
