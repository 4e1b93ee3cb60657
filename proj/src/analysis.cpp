#include "walkoff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "walkoff/numeric.hpp"

namespace walkoff {

void JointIntensity::validate() const {
    bool any = false;
    for (double v : counts.values) {
        if (!std::isfinite(v)) throw InvalidParameter("joint intensity contains non-finite values");
        if (v < 0.0) throw InvalidParameter("joint intensity contains negative values");
        if (v > 0.0) any = true;
    }
    if (!any) throw InvalidParameter("joint intensity is identically zero");
    if (!(magnification > 0.0)) throw InvalidParameter("magnification must be positive");
}

namespace {

// Intersection of { lo <= p0 + u*d <= hi } with the current u-interval.
void clip_interval(double p0, double d, double lo, double hi, double& u_lo, double& u_hi) {
    if (d == 0.0) {
        if (p0 < lo || p0 > hi) u_lo = 1.0, u_hi = 0.0;  // empty
        return;
    }
    double a = (lo - p0) / d, b = (hi - p0) / d;
    if (a > b) std::swap(a, b);
    u_lo = std::max(u_lo, a);
    u_hi = std::min(u_hi, b);
}

}  // namespace

SectionProfile extract_section(const JointIntensity& g, double c, CutKind kind, double step) {
    const Axis& as = g.counts.axis_a;
    const Axis& ai = g.counts.axis_b;
    if (step <= 0.0) step = std::min(as.spacing(), ai.spacing());

    // Arc-length parameterization: FixedSum runs along x_-, FixedDifference
    // along x_+; u = 0 sits on the x_s = x_i diagonal in both cases.
    double s0, i0, ds, di;
    if (kind == CutKind::FixedSum) {
        s0 = c / 2.0;
        i0 = c / 2.0;
        ds = 1.0 / kSqrt2;
        di = -1.0 / kSqrt2;
    } else {
        s0 = -c / 2.0;
        i0 = c / 2.0;
        ds = 1.0 / kSqrt2;
        di = 1.0 / kSqrt2;
    }

    // Bilinear support is the midpoint hull, not the cell hull.
    double u_lo = -std::numeric_limits<double>::infinity();
    double u_hi = std::numeric_limits<double>::infinity();
    clip_interval(s0, ds, as.point(0), as.point(as.n - 1), u_lo, u_hi);
    clip_interval(i0, di, ai.point(0), ai.point(ai.n - 1), u_lo, u_hi);
    if (!(u_lo <= u_hi)) throw DomainMismatch("section line does not intersect the domain");

    double mid = 0.5 * (u_lo + u_hi);
    int side = static_cast<int>(std::floor((u_hi - mid) / step + 1e-12));

    SectionProfile prof;
    prof.offset_c = c;
    prof.cut_kind = kind;
    prof.coordinate.reserve(static_cast<std::size_t>(2 * side + 1));
    prof.values.reserve(static_cast<std::size_t>(2 * side + 1));
    for (int j = -side; j <= side; ++j) {
        double u = j * step;
        prof.coordinate.push_back(u);
        prof.values.push_back(g.counts.sample_bilinear(s0 + (mid + u) * ds, i0 + (mid + u) * di));
    }
    return prof;
}

namespace {

constexpr double kHalfMaxArg = 1.3915573782515073;  // sinc^2 = 1/2

double interp_at(const std::vector<double>& x, const std::vector<double>& v, double q) {
    if (q <= x.front()) return v.front();
    if (q >= x.back()) return v.back();
    auto it = std::upper_bound(x.begin(), x.end(), q);
    std::size_t hi = static_cast<std::size_t>(it - x.begin());
    double t = (q - x[hi - 1]) / (x[hi] - x[hi - 1]);
    return v[hi - 1] * (1.0 - t) + v[hi] * t;
}

// sinc^2 is strictly decreasing from 1 to 0 on (0, pi).
double invert_sinc2(double target) {
    double lo = 0.0, hi = kPi;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double s = sinc(mid);
        if (s * s > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct FitState {
    double a = 0.0, b = 0.0, amp = 0.0, sse = 0.0;
    bool converged = false;
};

// Weighted SSE at (a, b) with the amplitude solved linearly; returns false
// when the model is degenerate at these parameters.
bool evaluate(const std::vector<double>& u2, const std::vector<double>& v,
              const std::vector<double>& w, double a, double b, double& amp, double& sse) {
    double num = 0.0, den = 0.0;
    std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = sinc(a * u2[i] - b);
        double s2 = s * s;
        num += w[i] * v[i] * s2;
        den += w[i] * s2 * s2;
    }
    if (den <= 0.0 || !std::isfinite(den)) return false;
    amp = num / den;
    sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = sinc(a * u2[i] - b);
        double r = v[i] - amp * s * s;
        sse += w[i] * r * r;
    }
    return std::isfinite(sse);
}

FitState gauss_newton(const std::vector<double>& u2, const std::vector<double>& v,
                      const std::vector<double>& w, double a0, double b0, const FitOptions& opts) {
    FitState st;
    st.a = a0;
    st.b = b0;
    if (!evaluate(u2, v, w, st.a, st.b, st.amp, st.sse)) return st;

    double lambda = 1e-3;
    std::size_t n = v.size();
    for (int it = 0; it < opts.max_iterations; ++it) {
        // Normal equations for parameters (a, b) at the current amplitude.
        double jaa = 0.0, jab = 0.0, jbb = 0.0, ga = 0.0, gb = 0.0;
        double spp = 0.0, sap = 0.0, sbp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double arg = st.a * u2[i] - st.b;
            double s = sinc(arg);
            double phi = s * s;
            double d = st.amp * 2.0 * s * sinc_prime(arg);  // d model / d arg
            double ma = d * u2[i], mb = -d;
            double r = v[i] - st.amp * phi;
            jaa += w[i] * ma * ma;
            jab += w[i] * ma * mb;
            jbb += w[i] * mb * mb;
            ga += w[i] * ma * r;
            gb += w[i] * mb * r;
            spp += w[i] * phi * phi;
            sap += w[i] * ma * phi;
            sbp += w[i] * mb * phi;
        }
        // Variable-projection Hessian: the amplitude is re-solved linearly
        // after every step, so the Jacobian components along its basis s^2
        // must be projected out. The gradient is already exact because the
        // residual is orthogonal to s^2 at the solved amplitude. Without the
        // projection the system overestimates curvature and creeps linearly.
        if (spp > 0.0) {
            jaa -= sap * sap / spp;
            jab -= sap * sbp / spp;
            jbb -= sbp * sbp / spp;
        }

        bool accepted = false;
        for (int damp = 0; damp < 25; ++damp) {
            double daa = jaa * (1.0 + lambda), dbb = jbb * (1.0 + lambda);
            double det = daa * dbb - jab * jab;
            if (det == 0.0 || !std::isfinite(det)) {
                lambda *= 5.0;
                continue;
            }
            double step_a = (dbb * ga - jab * gb) / det;
            double step_b = (daa * gb - jab * ga) / det;
            double na = st.a + step_a, nb = st.b + step_b;
            while (na <= 0.0) {
                step_a *= 0.5;
                step_b *= 0.5;
                na = st.a + step_a;
                nb = st.b + step_b;
                if (std::abs(step_a) < 1e-300) break;
            }
            if (na <= 0.0) {
                lambda *= 5.0;
                continue;
            }
            double amp = 0.0, sse = 0.0;
            if (evaluate(u2, v, w, na, nb, amp, sse) && sse <= st.sse) {
                double rel = std::abs(step_a) / (std::abs(st.a) + 1e-300) +
                             std::abs(step_b) / (std::abs(st.b) + 1.0);
                st.a = na;
                st.b = nb;
                st.amp = amp;
                st.sse = sse;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (rel < opts.relative_step_tolerance) st.converged = true;
                break;
            }
            lambda *= 5.0;
        }
        if (!accepted) {
            // No damping level improves the objective: stationary point.
            st.converged = true;
            return st;
        }
        if (st.converged) return st;
    }
    return st;
}

// Half-maximum crossing of the fitted model when it has no real first zero
// (b <= -pi). sinc^2 falls to half its boundary value before its next zero.
double fallback_half_width(double a, double b) {
    double start = -b;  // model argument at u = 0
    double target = 0.5 * sinc(start) * sinc(start);
    double lo = start, hi = start + kPi;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double s = sinc(mid);
        if (s * s > target)
            lo = mid;
        else
            hi = mid;
    }
    double arg_half = 0.5 * (lo + hi);
    return std::sqrt((arg_half + b) / a);
}

}  // namespace

SectionFit fit_sinc2(const SectionProfile& profile, const FitOptions& opts) {
    std::size_t n = profile.values.size();
    if (n < 8) throw InvalidParameter("profile needs at least 8 samples");
    if (profile.coordinate.size() != n) throw DomainMismatch("profile coordinate/value size mismatch");

    double mass = 0.0, peak = 0.0, low = std::numeric_limits<double>::infinity();
    double centroid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = profile.values[i];
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("profile values must be finite and nonnegative");
        mass += v;
        centroid += v * profile.coordinate[i];
        peak = std::max(peak, v);
        low = std::min(low, v);
    }
    if (!(mass > 0.0)) throw InvalidParameter("profile has no mass");
    if (peak - low <= 1e-12 * peak) throw FitFailed("degenerate flat profile", 0.0);
    centroid /= mass;

    // Centered coordinate; centroid-centering is idempotent.
    std::vector<double> u(n), u2(n), w(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = profile.coordinate[i] - centroid;
        u2[i] = u[i] * u[i];
    }
    if (opts.poisson_weights)
        for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::max(profile.values[i], 1.0);

    double center = interp_at(u, profile.values, 0.0);
    double ratio = std::clamp(center / peak, 0.0, 1.0);
    double b0 = ratio >= 1.0 - 1e-9 ? 0.0 : invert_sinc2(ratio);

    // Half-maximum abscissa, scanned outward from each side's maximum so a
    // double-lobed profile's central valley is not mistaken for the crossing.
    double half = 0.5 * peak;
    std::size_t i_right = n - 1, i_left = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (u[i] >= 0.0 && (u[i_right] < 0.0 || profile.values[i] > profile.values[i_right]))
            i_right = i;
        if (u[i] <= 0.0 && (u[i_left] > 0.0 || profile.values[i] > profile.values[i_left]))
            i_left = i;
    }
    double x_half = std::max(std::abs(u.front()), std::abs(u.back()));
    for (std::size_t i = i_right; i < n; ++i) {
        if (u[i] < 0.0) continue;
        if (profile.values[i] < half) {
            x_half = std::abs(u[i]);
            break;
        }
    }
    for (std::size_t i = i_left + 1; i-- > 0;) {
        if (u[i] > 0.0) continue;
        if (profile.values[i] < half) {
            x_half = std::min(x_half, std::abs(u[i]));
            break;
        }
    }
    if (!(x_half > 0.0)) x_half = std::max(std::abs(u.front()), std::abs(u.back()));

    double a_center = (kHalfMaxArg + std::max(b0, 0.0)) / (x_half * x_half);
    const double ladder[5] = {0.25, 0.5, 1.0, 2.0, 4.0};

    FitState best;
    bool have = false;
    double best_any_sse = std::numeric_limits<double>::infinity();
    for (double f : ladder) {
        FitState st = gauss_newton(u2, profile.values, w, a_center * f, b0, opts);
        best_any_sse = std::min(best_any_sse, st.sse);
        if (!st.converged) continue;
        if (!have || st.sse < best.sse) {
            best = st;
            have = true;
        }
    }
    if (!have) {
        double wsum = 0.0;
        for (double wi : w) wsum += wi;
        throw FitFailed("no start converged", std::sqrt(best_any_sse / wsum));
    }

    SectionFit fit;
    fit.a = best.a;
    fit.b = best.b;
    fit.amplitude = best.amp;
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    fit.residual_rms = std::sqrt(best.sse / wsum);
    if (best.b > -kPi) {
        fit.width = std::sqrt((kPi + best.b) / best.a);
    } else {
        fit.width = fallback_half_width(best.a, best.b);
        fit.flags |= kFitFallbackWidth;
    }
    return fit;
}

std::vector<WidthMapRow> width_map(const std::vector<JointIntensity>& frames,
                                   const std::vector<double>& c_list, CutKind kind, double step,
                                   const FitOptions& opts) {
    if (frames.empty()) throw InvalidParameter("width_map needs at least one frame");
    if (c_list.empty()) throw InvalidParameter("width_map needs at least one cut");
    std::vector<WidthMapRow> rows;
    rows.reserve(frames.size() * c_list.size());
    for (const JointIntensity& frame : frames) {
        for (double c : c_list) {
            WidthMapRow row;
            row.z = frame.z;
            row.c = c;
            try {
                row.fit = fit_sinc2(extract_section(frame, c, kind, step), opts);
            } catch (const Error&) {
                row.fit = SectionFit{};
                row.fit.flags = kFitFailed;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

SectionProfile postselect_profile(const JointIntensity& g, double c) {
    SectionProfile prof = extract_section(g, c, CutKind::FixedDifference, 0.0);
    double mass = pairwise_sum(prof.values);
    if (mass > 0.0)
        for (double& v : prof.values) v /= mass;
    return prof;
}

}  // namespace walkoff
