#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "walkoff/biphoton.hpp"
#include "walkoff/grid.hpp"

namespace walkoff {

// Momentum-space amplitude evaluable at arbitrary (p_s, p_i). The phase-space
// engine samples amplitudes at outer-momentum +- half-offset points, which in
// general fall between the nodes of any fixed lattice.
class MomentumAmplitude {
public:
    virtual ~MomentumAmplitude() = default;
    virtual std::complex<double> eval(double p_s, double p_i) const = 0;

    // True when every sample of the slice at outer node (p_s, p_i) is exactly
    // zero in double precision, letting the engine skip it. Default: never.
    virtual bool slice_underflows(double p_s, double p_i) const {
        (void)p_s;
        (void)p_i;
        return false;
    }
};

// Closed-form evaluator for the walk-off momentum amplitude.
class ClosedFormAmplitude final : public MomentumAmplitude {
public:
    explicit ClosedFormAmplitude(const MomentumStateParams& p) : params_(p) { p.validate(); }
    std::complex<double> eval(double p_s, double p_i) const override {
        return momentum_amplitude(params_, p_s, p_i);
    }
    // The two pump factors of a slice multiply to exp(-w_p^2 (p_+^2 + q_+^2/4)/2)
    // at most exp(-w_p^2 p_+^2 / 2), which underflows to exactly 0.0 beyond
    // the double-precision denormal range.
    bool slice_underflows(double p_s, double p_i) const override;
    const MomentumStateParams& params() const { return params_; }

private:
    MomentumStateParams params_;
};

// Bilinear evaluator over a sampled momentum grid (zero outside the domain);
// lets any gridded state, e.g. the Fourier transform of the position ansatz,
// drive the phase-space engine.
class GridAmplitude final : public MomentumAmplitude {
public:
    explicit GridAmplitude(ComplexGrid2D grid) : grid_(std::move(grid)) {}
    std::complex<double> eval(double p_s, double p_i) const override {
        return grid_.sample_bilinear(p_s, p_i);
    }
    const ComplexGrid2D& grid() const { return grid_; }

private:
    ComplexGrid2D grid_;
};

enum class ShearInterpolation { Bilinear, CatmullRom };

struct WignerOptions {
    bool enforce_support = true;               // boundary-support violation -> WindowTooSmall
    ShearInterpolation interpolation = ShearInterpolation::Bilinear;
    int threads = 1;                           // slice-level parallelism; results thread-count invariant
};

// Real 4D phase-space density on (x_s, x_i, p_s, p_i).
// Storage is slice-major: one contiguous M*M x-slice per outer momentum node,
// slices ordered p_s-major. x_axis is the Fourier conjugate of the relative
// momentum grid; p_axis is the outer momentum grid.
struct WignerTensor {
    Axis x_axis;                 // shared by x_s and x_i
    Axis p_axis;                 // shared by p_s and p_i
    std::vector<double> values;  // [(ps*Np + pi)*M*M + xs*M + xi]
    double mu = 0.0;             // accumulated shear parameter
    bool shear_warning = false;  // set when a shear moved >90% of mass out of window

    int m() const { return x_axis.n; }
    int np() const { return p_axis.n; }
    std::size_t slice_len() const { return static_cast<std::size_t>(m()) * m(); }
    double* slice(int ps, int pi) {
        return values.data() + (static_cast<std::size_t>(ps) * np() + pi) * slice_len();
    }
    const double* slice(int ps, int pi) const {
        return values.data() + (static_cast<std::size_t>(ps) * np() + pi) * slice_len();
    }
    double at(int xs, int xi, int ps, int pi) const {
        return slice(ps, pi)[static_cast<std::size_t>(xs) * m() + xi];
    }
    double cell_volume() const {
        double dx = x_axis.spacing(), dp = p_axis.spacing();
        return dx * dx * dp * dp;
    }
    double total_mass() const;  // sum * cell_volume, fixed reduction order
};

// 2D marginal with integration metadata.
struct Marginal {
    RealGrid2D grid;
    double clipped_fraction = 0.0;   // negative mass zeroed, as fraction of |total|
    bool integrity_warning = false;  // clipped_fraction > 1%
    bool shear_warning = false;
};

// Boundary-support test: over every outer momentum node and every relative
// momentum boundary node, |amp(p - q/2)| * |amp(p + q/2)| must not exceed
// 1e-4 * max|amp|^2 (max estimated on the sampling lattices).
bool window_support_ok(const MomentumAmplitude& amp, int m, double window, const Axis& p_outer,
                       double* worst_ratio = nullptr);

// Smallest window passing window_support_ok, found on a geometric scan and
// rounded up to a 0.1 multiple.
double choose_window(const MomentumAmplitude& amp, int m, const Axis& p_outer);

// Phase-space density of the state: for each outer node, the relative-momentum
// product amp(p - q/2) * conj(amp(p + q/2)) on an integer-centered m x m grid of
// half-width `window` is Fourier transformed to the position slice.
WignerTensor compute_wigner(const MomentumAmplitude& amp, int m, double window, const Axis& p_outer,
                            const WignerOptions& opts = {});

// Convenience overload: closed-form amplitude of the state's parameters; m is
// taken from the state's grid resolution.
WignerTensor compute_wigner(const BiphotonMomentumState& state, const Axis& p_outer, double window,
                            const WignerOptions& opts = {});

// Free-space shear W'(x, p) = W(x - mu p, p), applied to both coordinate pairs;
// out-of-domain reads are zero. mu = 0 is an exact copy.
WignerTensor propagate_wigner(const WignerTensor& w, double mu, const WignerOptions& opts = {});

// Midpoint-rule marginals; small negative interpolation residues are clipped
// to zero and reported.
Marginal position_marginal(const WignerTensor& w);
Marginal momentum_marginal(const WignerTensor& w);

// Position marginals for a list of shear values in one pass over slices,
// never materializing the 4D tensor. Bit-identical to
// position_marginal(propagate_wigner(compute_wigner(...), mu)) for each mu.
std::vector<Marginal> streamed_position_marginals(const MomentumAmplitude& amp, int m, double window,
                                                  const Axis& p_outer, const std::vector<double>& mu_list,
                                                  const WignerOptions& opts = {});

// Checkpoint: <base>.bin holds the tensor as little-endian float64 in
// (x_s, x_i, p_s, p_i) row-major order; <base>.txt is a plain-text sidecar
// with both axes and the accumulated mu.
void save_tensor(const WignerTensor& w, const std::string& path_base);
WignerTensor load_tensor(const std::string& path_base);

}  // namespace walkoff
