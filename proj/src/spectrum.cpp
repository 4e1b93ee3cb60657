#include "walkoff/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "walkoff/fft.hpp"
#include "walkoff/numeric.hpp"
#include "walkoff/outputs.hpp"

namespace walkoff {

void PropagationSetting::validate() const {
    if (!(k > 0.0)) throw InvalidParameter("k must be positive");
    if (!std::isfinite(z)) throw InvalidParameter("z must be finite");
}

namespace {

double boundary_peak_ratio(const ComplexGrid2D& psi) {
    int na = psi.axis_a.n, nb = psi.axis_b.n;
    double peak = 0.0;
    for (const auto& v : psi.values) peak = std::max(peak, std::abs(v));
    double edge = 0.0;
    for (int b = 0; b < nb; ++b) {
        edge = std::max(edge, std::abs(psi.at(0, b)));
        edge = std::max(edge, std::abs(psi.at(na - 1, b)));
    }
    for (int a = 0; a < na; ++a) {
        edge = std::max(edge, std::abs(psi.at(a, 0)));
        edge = std::max(edge, std::abs(psi.at(a, nb - 1)));
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace

ComplexGrid2D propagate_angular_spectrum(const ComplexGrid2D& psi, const PropagationSetting& s) {
    s.validate();
    double ratio = boundary_peak_ratio(psi);
    if (ratio > 1e-4)
        throw InvalidParameter("field at the grid boundary is " + format_double(ratio) +
                               " of its peak (limit 1e-4); enlarge the position axes");
    if (s.z == 0.0) return psi;

    ComplexGrid2D spec = fourier_pair(psi, FourierDirection::Forward);
    double c = s.z / (2.0 * s.k);
    for (int a = 0; a < spec.axis_a.n; ++a) {
        double pa = spec.axis_a.point(a);
        for (int b = 0; b < spec.axis_b.n; ++b) {
            double pb = spec.axis_b.point(b);
            spec.at(a, b) *= std::polar(1.0, -c * (pa * pa + pb * pb));
        }
    }
    return fourier_pair(spec, FourierDirection::Inverse);
}

RealGrid2D joint_intensity(const ComplexGrid2D& psi) {
    RealGrid2D out(psi.axis_a, psi.axis_b);
    for (std::size_t i = 0; i < psi.values.size(); ++i) out.values[i] = std::norm(psi.values[i]);
    double total = pairwise_sum(out.values);
    if (total > 0.0)
        for (double& v : out.values) v /= total;
    return out;
}

}  // namespace walkoff
