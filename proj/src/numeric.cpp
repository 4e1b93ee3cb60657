#include "walkoff/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "walkoff/errors.hpp"

namespace walkoff {

namespace {

constexpr std::size_t kPairwiseBase = 8;

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= kPairwiseBase) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

double pairwise_sum(const double* v, std::size_t n) { return pairwise_sum_impl(v, n); }

PairwiseAccumulator::PairwiseAccumulator(std::size_t vector_len) : len_(vector_len) {
    if (len_ == 0) throw InvalidParameter("PairwiseAccumulator: vector length must be positive");
}

void PairwiseAccumulator::push(const double* v) {
    // Binary-counter merge: rank r holds the sum of a complete block of 2^r
    // consecutive terms, so the reduction tree depends only on the push index.
    std::vector<double> carry(v, v + len_);
    std::size_t r = 0;
    while (r < occupied_.size() && occupied_[r]) {
        const std::vector<double>& old = levels_[r];
        for (std::size_t i = 0; i < len_; ++i) carry[i] = old[i] + carry[i];
        occupied_[r] = false;
        ++r;
    }
    if (r >= levels_.size()) {
        levels_.resize(r + 1);
        occupied_.resize(r + 1, false);
    }
    levels_[r] = std::move(carry);
    occupied_[r] = true;
    ++count_;
}

std::vector<double> PairwiseAccumulator::finish() const {
    std::vector<double> acc(len_, 0.0);
    bool first = true;
    for (std::size_t r = 0; r < occupied_.size(); ++r) {
        if (!occupied_[r]) continue;
        if (first) {
            acc = levels_[r];
            first = false;
        } else {
            for (std::size_t i = 0; i < len_; ++i) acc[i] = levels_[r][i] + acc[i];
        }
    }
    return acc;
}

namespace {

using cd = std::complex<double>;

// y = A x (rows x cols, row-major).
void apply(const cd* a, std::size_t rows, std::size_t cols, const std::vector<cd>& x,
           std::vector<cd>& y) {
    y.assign(rows, cd{});
    for (std::size_t r = 0; r < rows; ++r) {
        cd s{};
        const cd* row = a + r * cols;
        for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
        y[r] = s;
    }
}

// z = A^H y.
void apply_adjoint(const cd* a, std::size_t rows, std::size_t cols, const std::vector<cd>& y,
                   std::vector<cd>& z) {
    z.assign(cols, cd{});
    for (std::size_t r = 0; r < rows; ++r) {
        const cd* row = a + r * cols;
        cd yr = y[r];
        for (std::size_t c = 0; c < cols; ++c) z[c] += std::conj(row[c]) * yr;
    }
}

double norm2(const std::vector<cd>& v) {
    double s = 0.0;
    for (const cd& x : v) s += std::norm(x);
    return std::sqrt(s);
}

void normalize(std::vector<cd>& v) {
    double n = norm2(v);
    if (n == 0.0) return;
    for (cd& x : v) x /= n;
}

void project_out(std::vector<cd>& v, const std::vector<cd>& u) {
    // Two Gram-Schmidt passes: when v is nearly parallel to u a single pass
    // leaves a residual whose relative overlap with u is still O(1), which
    // would keep a deflated power iteration trapped in span{u}.
    for (int pass = 0; pass < 2; ++pass) {
        cd dot{};
        for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(u[i]) * v[i];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * u[i];
    }
}

// Dominant right singular vector of A restricted to the complement of
// `deflate` (when non-null), by power iteration on A^H A.
double power_singular(const cd* a, std::size_t rows, std::size_t cols, std::vector<cd> start,
                      const std::vector<cd>* deflate, std::vector<cd>& v_out) {
    std::vector<cd> y, z;
    if (deflate) project_out(start, *deflate);
    normalize(start);
    std::vector<cd> v = std::move(start);
    for (int it = 0; it < 200; ++it) {
        apply(a, rows, cols, v, y);
        apply_adjoint(a, rows, cols, y, z);
        if (deflate) project_out(z, *deflate);
        double n = norm2(z);
        if (n == 0.0) break;  // start landed in the null space
        for (cd& x : z) x /= n;
        v.swap(z);
    }
    apply(a, rows, cols, v, y);
    v_out = std::move(v);
    return norm2(y);
}

}  // namespace

TopSingularValues top_two_singular_values(const cd* a, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw InvalidParameter("top_two_singular_values: empty matrix");
    double frob = 0.0;
    for (std::size_t i = 0; i < rows * cols; ++i) frob += std::norm(a[i]);

    // Fixed deterministic starts; incommensurate phases avoid accidental
    // orthogonality to the dominant subspace.
    std::vector<cd> s1(cols), s2(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        double x = static_cast<double>(c + 1);
        s1[c] = cd(1.0 + 0.25 * std::sin(0.7 * x), 0.25 * std::cos(1.3 * x));
        s2[c] = cd(std::cos(2.1 * x), std::sin(0.9 * x + 0.5));
    }

    std::vector<cd> v1, v2;
    double sigma1 = power_singular(a, rows, cols, std::move(s1), nullptr, v1);
    double sigma2 = power_singular(a, rows, cols, std::move(s2), &v1, v2);
    if (sigma2 > sigma1) std::swap(sigma1, sigma2);
    return TopSingularValues{sigma1, sigma2, frob};
}

}  // namespace walkoff
