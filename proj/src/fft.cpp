#include "walkoff/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "walkoff/numeric.hpp"

namespace walkoff {

namespace {

using cd = std::complex<double>;

// FFTW planner is not thread-safe; execution via fftw_execute_dft is. Plans
// are created out-of-place with FFTW_UNALIGNED so they can run on any pair of
// distinct buffers of the right shape.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan get_plan(int na, int nb, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto key = std::make_tuple(na, nb, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::size_t len = static_cast<std::size_t>(na) * static_cast<std::size_t>(nb > 0 ? nb : 1);
    fftw_complex* in = fftw_alloc_complex(len);
    fftw_complex* out = fftw_alloc_complex(len);
    fftw_plan plan = nb > 0 ? fftw_plan_dft_2d(na, nb, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                            : fftw_plan_dft_1d(na, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    cache.emplace(key, plan);
    return plan;
}

void run_plan(fftw_plan plan, const std::vector<cd>& in, std::vector<cd>& out) {
    out.resize(in.size());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

// Twiddles mapping the index-space DFT onto arbitrary axis offsets:
//   F(w_m) = C * t_out[m] * DFT_m[ f_j * t_in[j] ]
// with t_in[j] = e^{-is w0 j dx}, t_out[m] = e^{-is m dw x0}, C *= e^{-is w0 x0}
// per dimension, s = +1 forward, -1 inverse.
struct AxisTwiddle {
    std::vector<cd> in, out;
    cd constant;
    Axis conj;
};

AxisTwiddle make_twiddle(const Axis& axis, double s, double measure_scale) {
    AxisTwiddle tw;
    tw.conj = axis.conjugate();
    double dx = axis.spacing(), x0 = axis.point(0);
    double dw = tw.conj.spacing(), w0 = tw.conj.point(0);
    tw.in.resize(static_cast<std::size_t>(axis.n));
    tw.out.resize(static_cast<std::size_t>(axis.n));
    for (int j = 0; j < axis.n; ++j) tw.in[static_cast<std::size_t>(j)] = std::polar(1.0, -s * w0 * j * dx);
    for (int m = 0; m < axis.n; ++m) tw.out[static_cast<std::size_t>(m)] = std::polar(1.0, -s * m * dw * x0);
    tw.constant = measure_scale * std::polar(1.0, -s * w0 * x0);
    return tw;
}

}  // namespace

ComplexGrid2D fourier_pair(const ComplexGrid2D& grid, FourierDirection direction) {
    const Axis& a = grid.axis_a;
    const Axis& b = grid.axis_b;
    double s = direction == FourierDirection::Forward ? 1.0 : -1.0;
    // (da/sqrt(2pi)) per dimension makes the round trip and Parseval exact.
    AxisTwiddle ta = make_twiddle(a, s, a.spacing() / std::sqrt(kTwoPi));
    AxisTwiddle tb = make_twiddle(b, s, b.spacing() / std::sqrt(kTwoPi));

    std::vector<cd> work(grid.values.size());
    for (int ia = 0; ia < a.n; ++ia)
        for (int ib = 0; ib < b.n; ++ib)
            work[static_cast<std::size_t>(ia) * b.n + ib] =
                grid.values[static_cast<std::size_t>(ia) * b.n + ib] * ta.in[static_cast<std::size_t>(ia)] *
                tb.in[static_cast<std::size_t>(ib)];

    fftw_plan plan = get_plan(a.n, b.n, s > 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    std::vector<cd> out;
    run_plan(plan, work, out);

    cd c = ta.constant * tb.constant;
    for (int ma = 0; ma < a.n; ++ma)
        for (int mb = 0; mb < b.n; ++mb)
            out[static_cast<std::size_t>(ma) * b.n + mb] *=
                c * ta.out[static_cast<std::size_t>(ma)] * tb.out[static_cast<std::size_t>(mb)];

    return ComplexGrid2D(ta.conj, tb.conj, std::move(out));
}

std::vector<cd> fourier_pair_1d(const std::vector<cd>& f, const Axis& axis, FourierDirection direction,
                                Axis* out_axis) {
    if (f.size() != static_cast<std::size_t>(axis.n))
        throw DomainMismatch("fourier_pair_1d: value count does not match axis");
    double s = direction == FourierDirection::Forward ? 1.0 : -1.0;
    AxisTwiddle tw = make_twiddle(axis, s, axis.spacing() / std::sqrt(kTwoPi));

    std::vector<cd> work(f.size());
    for (int j = 0; j < axis.n; ++j)
        work[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(j)] * tw.in[static_cast<std::size_t>(j)];

    fftw_plan plan = get_plan(axis.n, 0, s > 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    std::vector<cd> out;
    run_plan(plan, work, out);
    for (int m = 0; m < axis.n; ++m)
        out[static_cast<std::size_t>(m)] *= tw.constant * tw.out[static_cast<std::size_t>(m)];
    if (out_axis) *out_axis = tw.conj;
    return out;
}

}  // namespace walkoff
