#include "walkoff/biphoton.hpp"

#include <cmath>

#include "walkoff/numeric.hpp"

namespace walkoff {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidParameter(std::string(name) + " must be finite");
}

}  // namespace

void MomentumStateParams::validate() const {
    if (!(w_p > 0.0)) throw InvalidParameter("w_p must be positive");
    if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
    require_finite(w_p, "w_p");
    require_finite(t, "t");
    require_finite(l, "l");
}

void AnsatzParams::validate() const {
    if (!(w_phi > 0.0)) throw InvalidParameter("w_phi must be positive");
    if (!(w_p > 0.0)) throw InvalidParameter("w_p must be positive");
    if (!(rho > 0.0)) throw InvalidParameter("rho must be positive");
    require_finite(xi, "xi");
    require_finite(x0, "x0");
}

std::complex<double> momentum_amplitude(const MomentumStateParams& p, double p_s, double p_i) {
    double p_plus = (p_s + p_i) / kSqrt2;
    double p_minus = (p_s - p_i) / kSqrt2;
    double g = p.beta * p_minus * p_minus + p.t * p_plus - p.l;
    double pump = std::exp(-p.w_p * p.w_p * p_plus * p_plus / 4.0);
    double env = pump * sinc(g);
    return {env * std::cos(g), -env * std::sin(g)};
}

std::complex<double> ansatz_amplitude(const AnsatzParams& p, double x_s, double x_i) {
    double x_plus = (x_s + x_i) / kSqrt2;
    double x_minus = (x_s - x_i) / kSqrt2;
    double xm2 = x_minus * x_minus;
    double env = sinc(xm2 / (p.w_phi * p.w_phi) - p.xi) * std::exp(-x_plus * x_plus / (p.w_p * p.w_p));
    if (!p.curvature) return {env, 0.0};
    double phase = xm2 * (x_plus - p.x0) / (p.rho * p.rho * p.rho);
    return {env * std::cos(phase), env * std::sin(phase)};
}

BiphotonMomentumState build_momentum_wavefunction(const MomentumStateParams& params, const Axis& axis) {
    params.validate();
    ComplexGrid2D grid(axis, axis);
    for (int is = 0; is < axis.n; ++is) {
        double p_s = axis.point(is);
        for (int ii = 0; ii < axis.n; ++ii)
            grid.at(is, ii) = momentum_amplitude(params, p_s, axis.point(ii));
    }
    return BiphotonMomentumState{std::move(grid), params};
}

AnsatzPositionState build_ansatz_wavefunction(const AnsatzParams& params, const Axis& axis) {
    params.validate();
    ComplexGrid2D grid(axis, axis);
    for (int is = 0; is < axis.n; ++is) {
        double x_s = axis.point(is);
        for (int ii = 0; ii < axis.n; ++ii)
            grid.at(is, ii) = ansatz_amplitude(params, x_s, axis.point(ii));
    }
    return AnsatzPositionState{std::move(grid), params};
}

ComplexGrid2D momentum_matrix_sum_difference(const MomentumStateParams& params, const Axis& plus_axis,
                                             const Axis& minus_axis) {
    params.validate();
    ComplexGrid2D grid(plus_axis, minus_axis);
    for (int ip = 0; ip < plus_axis.n; ++ip) {
        double p_plus = plus_axis.point(ip);
        double pump = std::exp(-params.w_p * params.w_p * p_plus * p_plus / 4.0);
        for (int im = 0; im < minus_axis.n; ++im) {
            double p_minus = minus_axis.point(im);
            double g = params.beta * p_minus * p_minus + params.t * p_plus - params.l;
            double env = pump * sinc(g);
            grid.at(ip, im) = {env * std::cos(g), -env * std::sin(g)};
        }
    }
    return grid;
}

double estimate_rho(double k, double w_phi, double L, double t) {
    if (!(k > 0.0)) throw InvalidParameter("k must be positive");
    if (!(w_phi > 0.0)) throw InvalidParameter("w_phi must be positive");
    if (!(L > 0.0)) throw InvalidParameter("L must be positive");
    if (t == 0.0) throw OutOfValidity("curvature scale is unbounded at zero walk-off");
    double w2 = w_phi * w_phi;
    return std::cbrt(k * w2 * w2 * L / (2.0 * t));
}

}  // namespace walkoff
