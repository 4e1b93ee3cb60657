#include "walkoff/wigner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "walkoff/fft.hpp"
#include "walkoff/numeric.hpp"
#include "walkoff/outputs.hpp"

namespace walkoff {

namespace {

using cd = std::complex<double>;

// Above this pump exponent the two pump factors multiply to exactly 0.0 in
// double precision, so the whole slice vanishes and can be skipped.
constexpr double kUnderflowExponent = 750.0;

constexpr double kSupportThreshold = 1e-4;
constexpr std::size_t kStreamBatch = 64;

void check_engine_sizes(int m, double window, const Axis& p_outer) {
    if (m < 4 || m % 2 != 0) throw InvalidParameter("phase-space resolution m must be even and >= 4");
    if (!(window > 0.0)) throw InvalidParameter("window must be positive");
    p_outer.validate();
}

Axis relative_axis(int m, double window) { return Axis::centered_integer(2.0 * window / m, m); }

// Static chunking; bodies write disjoint outputs, so results are independent
// of the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::size_t chunk = (n + t - 1) / t;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

double max_abs_estimate(const MomentumAmplitude& amp, const Axis& q_axis, const Axis& p_outer) {
    double m = 0.0;
    for (int a = 0; a < q_axis.n; ++a)
        for (int b = 0; b < q_axis.n; ++b)
            m = std::max(m, std::abs(amp.eval(q_axis.point(a), q_axis.point(b))));
    for (int a = 0; a < p_outer.n; ++a)
        for (int b = 0; b < p_outer.n; ++b)
            m = std::max(m, std::abs(amp.eval(p_outer.point(a), p_outer.point(b))));
    return m;
}

// One phase-space slice at outer node (ps, pi): Hermitian relative-momentum
// correlation, row/column without a mirror partner zeroed, inverse transform,
// 1/(2 pi) measure. out has q_axis.n^2 entries.
void compute_slice(const MomentumAmplitude& amp, double ps, double pi, const Axis& q_axis,
                   double* out) {
    int m = q_axis.n;
    ComplexGrid2D r(q_axis, q_axis);
    for (int a = 0; a < m; ++a) {
        double qs = q_axis.point(a);
        for (int b = 0; b < m; ++b) {
            if (a == 0 || b == 0) {
                r.at(a, b) = cd{};
                continue;
            }
            double qi = q_axis.point(b);
            r.at(a, b) = amp.eval(ps + qs / 2.0, pi + qi / 2.0) *
                         std::conj(amp.eval(ps - qs / 2.0, pi - qi / 2.0));
        }
    }
    ComplexGrid2D w = fourier_pair(r, FourierDirection::Inverse);
    const std::size_t len = static_cast<std::size_t>(m) * m;
    for (std::size_t i = 0; i < len; ++i) out[i] = w.values[i].real() / kTwoPi;
}

struct SliceShift {
    // Source index = dest index + base (+1), blended with constant weights.
    int base_a = 0, base_b = 0;
    double frac_a = 0.0, frac_b = 0.0;
};

SliceShift make_shift(double mu, double ps, double pi, double dx) {
    SliceShift s;
    double sa = mu * ps / dx, sb = mu * pi / dx;
    s.base_a = static_cast<int>(std::floor(-sa));
    s.base_b = static_cast<int>(std::floor(-sb));
    s.frac_a = -sa - s.base_a;
    s.frac_b = -sb - s.base_b;
    return s;
}

inline double src_at(const double* src, int m, int a, int b) {
    if (a < 0 || b < 0 || a >= m || b >= m) return 0.0;
    return src[static_cast<std::size_t>(a) * m + b];
}

void translate_bilinear(const double* src, int m, const SliceShift& s, double* out) {
    double wa1 = s.frac_a, wa0 = 1.0 - wa1;
    double wb1 = s.frac_b, wb0 = 1.0 - wb1;
    for (int a = 0; a < m; ++a) {
        int sa = a + s.base_a;
        double* row = out + static_cast<std::size_t>(a) * m;
        if (sa < -1 || sa >= m) {
            std::fill(row, row + m, 0.0);
            continue;
        }
        for (int b = 0; b < m; ++b) {
            int sb = b + s.base_b;
            row[b] = wa0 * (wb0 * src_at(src, m, sa, sb) + wb1 * src_at(src, m, sa, sb + 1)) +
                     wa1 * (wb0 * src_at(src, m, sa + 1, sb) + wb1 * src_at(src, m, sa + 1, sb + 1));
        }
    }
}

inline void catmull_rom_weights(double t, double w[4]) {
    double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

void translate_catmull_rom(const double* src, int m, const SliceShift& s, double* out) {
    double wa[4], wb[4];
    catmull_rom_weights(s.frac_a, wa);
    catmull_rom_weights(s.frac_b, wb);
    for (int a = 0; a < m; ++a) {
        int sa = a + s.base_a;
        double* row = out + static_cast<std::size_t>(a) * m;
        if (sa < -2 || sa >= m + 1) {
            std::fill(row, row + m, 0.0);
            continue;
        }
        for (int b = 0; b < m; ++b) {
            int sb = b + s.base_b;
            double acc = 0.0;
            for (int da = 0; da < 4; ++da) {
                double r = 0.0;
                for (int db = 0; db < 4; ++db) r += wb[db] * src_at(src, m, sa - 1 + da, sb - 1 + db);
                acc += wa[da] * r;
            }
            row[b] = acc;
        }
    }
}

void translate_slice(const double* src, int m, const SliceShift& s, ShearInterpolation interp,
                     double* out) {
    if (interp == ShearInterpolation::CatmullRom)
        translate_catmull_rom(src, m, s, out);
    else
        translate_bilinear(src, m, s, out);
}

Marginal finalize_marginal(RealGrid2D grid, bool shear_warning) {
    Marginal out;
    double neg = 0.0, total = 0.0;
    for (double& v : grid.values) {
        total += std::abs(v);
        if (v < 0.0) {
            neg += -v;
            v = 0.0;
        }
    }
    out.clipped_fraction = total > 0.0 ? neg / total : 0.0;
    out.integrity_warning = out.clipped_fraction > 0.01;
    out.shear_warning = shear_warning;
    out.grid = std::move(grid);
    return out;
}

}  // namespace

bool ClosedFormAmplitude::slice_underflows(double p_s, double p_i) const {
    double p_plus = (p_s + p_i) / kSqrt2;
    return params_.w_p * params_.w_p * p_plus * p_plus / 2.0 >= kUnderflowExponent;
}

double WignerTensor::total_mass() const {
    std::size_t n_slices = static_cast<std::size_t>(np()) * np();
    std::vector<double> sums(n_slices);
    for (std::size_t s = 0; s < n_slices; ++s)
        sums[s] = pairwise_sum(values.data() + s * slice_len(), slice_len());
    return pairwise_sum(sums) * cell_volume();
}

bool window_support_ok(const MomentumAmplitude& amp, int m, double window, const Axis& p_outer,
                       double* worst_ratio) {
    check_engine_sizes(m, window, p_outer);
    Axis q_axis = relative_axis(m, window);
    double peak = max_abs_estimate(amp, q_axis, p_outer);
    if (peak == 0.0) throw InvalidParameter("amplitude is identically zero on the sampling lattices");
    double peak2 = peak * peak;

    // Boundary ring of the relative-momentum lattice.
    std::vector<std::pair<double, double>> ring;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a == 0 || b == 0 || a == m - 1 || b == m - 1)
                ring.emplace_back(q_axis.point(a), q_axis.point(b));

    double worst = 0.0;
    for (int a = 0; a < p_outer.n; ++a) {
        double ps = p_outer.point(a);
        for (int b = 0; b < p_outer.n; ++b) {
            double pi = p_outer.point(b);
            for (const auto& [qs, qi] : ring) {
                double prod = std::abs(amp.eval(ps + qs / 2.0, pi + qi / 2.0)) *
                              std::abs(amp.eval(ps - qs / 2.0, pi - qi / 2.0));
                if (prod > worst) worst = prod;
            }
        }
    }
    worst /= peak2;
    if (worst_ratio) *worst_ratio = worst;
    return worst <= kSupportThreshold;
}

double choose_window(const MomentumAmplitude& amp, int m, const Axis& p_outer) {
    double hi = 0.1;
    int guard = 0;
    while (!window_support_ok(amp, m, hi, p_outer)) {
        hi *= 1.2;
        if (++guard > 120) throw WindowTooSmall("no window up to " + format_double(hi) + " passes the boundary-support check");
    }
    double lo = guard == 0 ? 0.0 : hi / 1.2;
    for (int it = 0; it < 30 && hi - lo > 1e-3 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= 0.0) break;
        if (window_support_ok(amp, m, mid, p_outer))
            hi = mid;
        else
            lo = mid;
    }
    double rounded = std::ceil(hi / 0.1 - 1e-12) * 0.1;
    // The check is not guaranteed monotone in the window; verify the rounding.
    while (!window_support_ok(amp, m, rounded, p_outer)) rounded += 0.1;
    return rounded;
}

WignerTensor compute_wigner(const MomentumAmplitude& amp, int m, double window, const Axis& p_outer,
                            const WignerOptions& opts) {
    check_engine_sizes(m, window, p_outer);
    if (opts.enforce_support) {
        double worst = 0.0;
        if (!window_support_ok(amp, m, window, p_outer, &worst))
            throw WindowTooSmall("boundary product " + format_double(worst) + " exceeds " +
                                 format_double(kSupportThreshold) + " of peak; enlarge the window");
    }

    Axis q_axis = relative_axis(m, window);
    WignerTensor w;
    w.x_axis = q_axis.conjugate();
    w.p_axis = p_outer;
    w.values.assign(static_cast<std::size_t>(p_outer.n) * p_outer.n * m * m, 0.0);

    std::size_t n_slices = static_cast<std::size_t>(p_outer.n) * p_outer.n;
    parallel_for(n_slices, opts.threads, [&](std::size_t s) {
        int a = static_cast<int>(s) / p_outer.n;
        int b = static_cast<int>(s) % p_outer.n;
        double ps = p_outer.point(a), pi = p_outer.point(b);
        double* out = w.values.data() + s * w.slice_len();
        if (amp.slice_underflows(ps, pi)) return;  // buffer already zero
        compute_slice(amp, ps, pi, q_axis, out);
    });
    return w;
}

WignerTensor compute_wigner(const BiphotonMomentumState& state, const Axis& p_outer, double window,
                            const WignerOptions& opts) {
    ClosedFormAmplitude amp(state.params);
    return compute_wigner(amp, state.grid.axis_a.n, window, p_outer, opts);
}

WignerTensor propagate_wigner(const WignerTensor& w, double mu, const WignerOptions& opts) {
    WignerTensor out;
    out.x_axis = w.x_axis;
    out.p_axis = w.p_axis;
    out.mu = w.mu + mu;
    out.shear_warning = w.shear_warning;
    if (mu == 0.0) {
        out.values = w.values;
        return out;
    }
    out.values.assign(w.values.size(), 0.0);
    int m = w.m();
    double dx = w.x_axis.spacing();
    std::size_t n_slices = static_cast<std::size_t>(w.np()) * w.np();
    parallel_for(n_slices, opts.threads, [&](std::size_t s) {
        int a = static_cast<int>(s) / w.np();
        int b = static_cast<int>(s) % w.np();
        SliceShift shift = make_shift(mu, w.p_axis.point(a), w.p_axis.point(b), dx);
        translate_slice(w.values.data() + s * w.slice_len(), m, shift, opts.interpolation,
                        out.values.data() + s * out.slice_len());
    });
    double before = w.total_mass(), after = out.total_mass();
    if (std::abs(after) < 0.1 * std::abs(before)) out.shear_warning = true;
    return out;
}

Marginal position_marginal(const WignerTensor& w) {
    std::size_t n_slices = static_cast<std::size_t>(w.np()) * w.np();
    PairwiseAccumulator acc(w.slice_len());
    for (std::size_t s = 0; s < n_slices; ++s) acc.push(w.values.data() + s * w.slice_len());
    std::vector<double> sums = acc.finish();
    double dp2 = w.p_axis.spacing() * w.p_axis.spacing();
    for (double& v : sums) v *= dp2;
    return finalize_marginal(RealGrid2D(w.x_axis, w.x_axis, std::move(sums)), w.shear_warning);
}

Marginal momentum_marginal(const WignerTensor& w) {
    RealGrid2D grid(w.p_axis, w.p_axis);
    double dx2 = w.x_axis.spacing() * w.x_axis.spacing();
    std::size_t n_slices = static_cast<std::size_t>(w.np()) * w.np();
    for (std::size_t s = 0; s < n_slices; ++s)
        grid.values[s] = pairwise_sum(w.values.data() + s * w.slice_len(), w.slice_len()) * dx2;
    return finalize_marginal(std::move(grid), w.shear_warning);
}

std::vector<Marginal> streamed_position_marginals(const MomentumAmplitude& amp, int m, double window,
                                                  const Axis& p_outer, const std::vector<double>& mu_list,
                                                  const WignerOptions& opts) {
    check_engine_sizes(m, window, p_outer);
    if (mu_list.empty()) throw InvalidParameter("mu list must not be empty");
    if (opts.enforce_support) {
        double worst = 0.0;
        if (!window_support_ok(amp, m, window, p_outer, &worst))
            throw WindowTooSmall("boundary product " + format_double(worst) + " exceeds " +
                                 format_double(kSupportThreshold) + " of peak; enlarge the window");
    }

    Axis q_axis = relative_axis(m, window);
    Axis x_axis = q_axis.conjugate();
    std::size_t n_mu = mu_list.size();
    std::size_t n_slices = static_cast<std::size_t>(p_outer.n) * p_outer.n;
    std::size_t slice_len = static_cast<std::size_t>(m) * m;
    double dx = x_axis.spacing();

    // Accumulation in slice-index order with the same pairwise tree as the
    // materialized path, so both routes agree bit for bit.
    std::vector<PairwiseAccumulator> acc;
    acc.reserve(n_mu);
    for (std::size_t k = 0; k < n_mu; ++k) acc.emplace_back(slice_len);
    std::vector<std::vector<double>> base_sums(n_mu), shifted_sums(n_mu);
    for (std::size_t k = 0; k < n_mu; ++k) {
        base_sums[k].resize(n_slices);
        shifted_sums[k].resize(n_slices);
    }

    std::vector<double> base(kStreamBatch * slice_len);
    std::vector<double> shifted(kStreamBatch * n_mu * slice_len);

    for (std::size_t lo = 0; lo < n_slices; lo += kStreamBatch) {
        std::size_t batch = std::min(kStreamBatch, n_slices - lo);
        parallel_for(batch, opts.threads, [&](std::size_t j) {
            std::size_t s = lo + j;
            int a = static_cast<int>(s) / p_outer.n;
            int b = static_cast<int>(s) % p_outer.n;
            double ps = p_outer.point(a), pi = p_outer.point(b);
            double* base_slice = base.data() + j * slice_len;
            if (amp.slice_underflows(ps, pi))
                std::fill(base_slice, base_slice + slice_len, 0.0);
            else
                compute_slice(amp, ps, pi, q_axis, base_slice);
            for (std::size_t k = 0; k < n_mu; ++k) {
                double* out = shifted.data() + (j * n_mu + k) * slice_len;
                if (mu_list[k] == 0.0) {
                    std::memcpy(out, base_slice, slice_len * sizeof(double));
                } else {
                    SliceShift shift = make_shift(mu_list[k], ps, pi, dx);
                    translate_slice(base_slice, m, shift, opts.interpolation, out);
                }
                base_sums[k][s] = pairwise_sum(base_slice, slice_len);
                shifted_sums[k][s] = pairwise_sum(out, slice_len);
            }
        });
        for (std::size_t j = 0; j < batch; ++j)
            for (std::size_t k = 0; k < n_mu; ++k)
                acc[k].push(shifted.data() + (j * n_mu + k) * slice_len);
    }

    double dp2 = p_outer.spacing() * p_outer.spacing();
    std::vector<Marginal> out;
    out.reserve(n_mu);
    for (std::size_t k = 0; k < n_mu; ++k) {
        std::vector<double> sums = acc[k].finish();
        for (double& v : sums) v *= dp2;
        double before = pairwise_sum(base_sums[k]) * dx * dx * dp2;
        double after = pairwise_sum(shifted_sums[k]) * dx * dx * dp2;
        bool warn = std::abs(after) < 0.1 * std::abs(before);
        out.push_back(finalize_marginal(RealGrid2D(x_axis, x_axis, std::move(sums)), warn));
    }
    return out;
}

namespace {

void write_axis_line(std::ostream& os, const char* name, const Axis& a) {
    os << name << ": " << format_double(a.min) << " " << format_double(a.max) << " " << a.n << "\n";
}

Axis parse_axis_line(const std::string& line, const char* name, long line_no) {
    std::istringstream ss(line);
    std::string label;
    ss >> label;
    if (label != std::string(name) + ":") throw ParseError("expected '" + std::string(name) + ":'", line_no);
    std::string smin, smax;
    int n = 0;
    if (!(ss >> smin >> smax >> n)) throw ParseError("malformed axis line", line_no);
    double mn, mx;
    if (!parse_double(smin, mn) || !parse_double(smax, mx)) throw ParseError("malformed axis bound", line_no);
    return Axis(mn, mx, n);
}

}  // namespace

void save_tensor(const WignerTensor& w, const std::string& path_base) {
    static_assert(std::endian::native == std::endian::little, "checkpoint format is little-endian");
    int m = w.m(), np = w.np();

    std::ofstream bin(path_base + ".bin", std::ios::binary | std::ios::trunc);
    if (!bin) throw IoError("cannot open " + path_base + ".bin for writing");
    // On disk the tensor is (x_s, x_i, p_s, p_i) row-major; storage is
    // slice-major, so gather one (x_s, x_i) plane of outer nodes at a time.
    std::vector<double> plane(static_cast<std::size_t>(np) * np);
    for (int xs = 0; xs < m; ++xs) {
        for (int xi = 0; xi < m; ++xi) {
            std::size_t off = static_cast<std::size_t>(xs) * m + xi;
            for (int ps = 0; ps < np; ++ps)
                for (int pi = 0; pi < np; ++pi)
                    plane[static_cast<std::size_t>(ps) * np + pi] = w.slice(ps, pi)[off];
            bin.write(reinterpret_cast<const char*>(plane.data()),
                      static_cast<std::streamsize>(plane.size() * sizeof(double)));
        }
    }
    if (!bin) throw IoError("short write to " + path_base + ".bin");
    bin.close();

    std::ostringstream side;
    write_axis_line(side, "x_axis", w.x_axis);
    write_axis_line(side, "p_axis", w.p_axis);
    side << "mu: " << format_double(w.mu) << "\n";
    atomic_write(path_base + ".txt", side.str());
}

WignerTensor load_tensor(const std::string& path_base) {
    static_assert(std::endian::native == std::endian::little, "checkpoint format is little-endian");
    std::ifstream side(path_base + ".txt");
    if (!side) throw IoError("cannot open " + path_base + ".txt");
    std::string l1, l2, l3;
    std::getline(side, l1);
    std::getline(side, l2);
    std::getline(side, l3);

    WignerTensor w;
    w.x_axis = parse_axis_line(l1, "x_axis", 1);
    w.p_axis = parse_axis_line(l2, "p_axis", 2);
    {
        std::istringstream ss(l3);
        std::string label, val;
        ss >> label >> val;
        if (label != "mu:" || !parse_double(val, w.mu)) throw ParseError("expected 'mu:'", 3);
    }

    int m = w.x_axis.n, np = w.p_axis.n;
    std::size_t count = static_cast<std::size_t>(m) * m * np * np;
    std::ifstream bin(path_base + ".bin", std::ios::binary);
    if (!bin) throw IoError("cannot open " + path_base + ".bin");
    w.values.assign(count, 0.0);
    std::vector<double> plane(static_cast<std::size_t>(np) * np);
    for (int xs = 0; xs < m; ++xs) {
        for (int xi = 0; xi < m; ++xi) {
            bin.read(reinterpret_cast<char*>(plane.data()),
                     static_cast<std::streamsize>(plane.size() * sizeof(double)));
            if (!bin) throw ParseError("checkpoint truncated: " + path_base + ".bin");
            std::size_t off = static_cast<std::size_t>(xs) * m + xi;
            for (int ps = 0; ps < np; ++ps)
                for (int pi = 0; pi < np; ++pi)
                    w.slice(ps, pi)[off] = plane[static_cast<std::size_t>(ps) * np + pi];
        }
    }
    char extra;
    if (bin.read(&extra, 1)) throw ParseError("checkpoint has trailing bytes: " + path_base + ".bin");
    return w;
}

}  // namespace walkoff
