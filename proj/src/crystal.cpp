#include "walkoff/crystal.hpp"

#include <cmath>

#include "walkoff/numeric.hpp"

namespace walkoff {

WalkoffParams derive_walkoff_params(const CrystalSpec& spec) {
    if (!(spec.L > 0.0)) throw InvalidParameter("CrystalSpec: L must be positive");
    if (!(spec.n_o > 0.0) || !(spec.n_e > 0.0))
        throw InvalidParameter("CrystalSpec: refractive indices must be positive");
    if (!(spec.k_p > 0.0)) throw InvalidParameter("CrystalSpec: k_p must be positive");
    if (!(spec.theta >= 0.0) || !(spec.theta <= kPi / 2.0))
        throw InvalidParameter("CrystalSpec: theta must lie in [0, pi/2]");

    double st = std::sin(spec.theta), ct = std::cos(spec.theta);
    double n2 = spec.n_o * spec.n_o * st * st + spec.n_e * spec.n_e * ct * ct;

    WalkoffParams w;
    w.n_theta = std::sqrt(n2);
    w.eta_p = spec.n_o * spec.n_e / w.n_theta;
    w.n_bar = 0.5 * (spec.n_o + spec.n_e);
    w.t = spec.L * (spec.n_o * spec.n_o - spec.n_e * spec.n_e) * st * ct / (2.0 * n2);
    w.l = spec.L * spec.k_p * (w.eta_p - w.n_bar) / 2.0;
    w.beta = spec.L / (4.0 * w.eta_p * spec.k_p);
    return w;
}

}  // namespace walkoff
