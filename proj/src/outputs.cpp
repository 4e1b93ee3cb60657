#include "walkoff/outputs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "walkoff/numeric.hpp"

namespace walkoff {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

void atomic_write(const std::string& path, const std::string& bytes) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp + " for writing");
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!os) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    if (is.bad()) throw IoError("read failure on " + path);
    return ss.str();
}

namespace {

void append_axis_header(std::string& out, const std::string& label, const Axis& a) {
    out += "# " + label + ": " + format_double(a.min) + " " + format_double(a.max) + " " +
           std::to_string(a.n) + "\n";
}

}  // namespace

std::string render_matrix_csv(const RealGrid2D& grid, const std::string& a_label,
                              const std::string& b_label, const HeaderList& extra_headers) {
    std::string out;
    out.reserve(grid.values.size() * 14 + 256);
    append_axis_header(out, a_label, grid.axis_a);
    append_axis_header(out, b_label, grid.axis_b);
    for (const auto& [k, v] : extra_headers) out += "# " + k + ": " + v + "\n";
    for (int a = 0; a < grid.axis_a.n; ++a) {
        for (int b = 0; b < grid.axis_b.n; ++b) {
            if (b) out += ',';
            out += format_double(grid.at(a, b));
        }
        out += '\n';
    }
    return out;
}

std::string render_width_table_csv(const std::vector<WidthMapRow>& rows,
                                   const std::string& units_comment) {
    std::string out = "# " + units_comment + "\n";
    out += "z,c,A,B,width,amplitude,residual_rms,flags\n";
    for (const WidthMapRow& r : rows) {
        out += format_double(r.z) + ',' + format_double(r.c) + ',' + format_double(r.fit.a) + ',' +
               format_double(r.fit.b) + ',' + format_double(r.fit.width) + ',' +
               format_double(r.fit.amplitude) + ',' + format_double(r.fit.residual_rms) + ',' +
               std::to_string(r.fit.flags) + '\n';
    }
    return out;
}

std::string render_profile_csv(const SectionProfile& profile, const HeaderList& extra_headers) {
    std::string out;
    out += "# cut: ";
    out += profile.cut_kind == CutKind::FixedSum ? "fixed_sum" : "fixed_difference";
    out += "\n# c: " + format_double(profile.offset_c) + "\n";
    for (const auto& [k, v] : extra_headers) out += "# " + k + ": " + v + "\n";
    out += "coordinate,value\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i)
        out += format_double(profile.coordinate[i]) + ',' + format_double(profile.values[i]) + '\n';
    return out;
}

namespace {

// Cubehelix (start 0.5, rotation -1.5, hue 1.2): perceptually monotone
// lightness, so heatmaps stay readable in grayscale.
void cubehelix(double t, unsigned char rgb[3]) {
    double phi = kTwoPi * (0.5 / 3.0 - 1.5 * t);
    double a = 1.2 * t * (1.0 - t) / 2.0;
    double c = std::cos(phi), s = std::sin(phi);
    double v[3] = {t + a * (-0.14861 * c + 1.78277 * s), t + a * (-0.29227 * c - 0.90649 * s),
                   t + a * (1.97294 * c)};
    for (int i = 0; i < 3; ++i)
        rgb[i] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(v[i], 0.0, 1.0)));
}

}  // namespace

std::string render_ppm_heatmap(const RealGrid2D& grid) {
    double lo = grid.values[0], hi = grid.values[0];
    for (double v : grid.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi > lo ? hi - lo : 1.0;

    std::string out = "P6\n" + std::to_string(grid.axis_b.n) + " " + std::to_string(grid.axis_a.n) +
                      "\n255\n";
    out.reserve(out.size() + grid.values.size() * 3);
    unsigned char rgb[3];
    for (int a = 0; a < grid.axis_a.n; ++a) {
        for (int b = 0; b < grid.axis_b.n; ++b) {
            cubehelix((grid.at(a, b) - lo) / span, rgb);
            out.append(reinterpret_cast<const char*>(rgb), 3);
        }
    }
    return out;
}

void Manifest::record(const std::string& name, const std::string& bytes) {
    entries_.emplace_back(name, fnv1a64(bytes.data(), bytes.size()));
}

std::string Manifest::render(const std::string& units, const std::string& config_echo) const {
    std::vector<std::pair<std::string, std::uint64_t>> sorted = entries_;
    std::sort(sorted.begin(), sorted.end());
    std::string out = "units: " + units + "\nfiles: " + std::to_string(sorted.size()) + "\n";
    char hex[17];
    for (const auto& [name, sum] : sorted) {
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(sum));
        out += std::string(hex) + " " + name + "\n";
    }
    out += "config:\n";
    out += config_echo;
    if (!config_echo.empty() && config_echo.back() != '\n') out += '\n';
    return out;
}

void emit(Manifest& manifest, const std::string& dir, const std::string& name,
          const std::string& bytes) {
    manifest.record(name, bytes);
    atomic_write(dir + "/" + name, bytes);
}

}  // namespace walkoff
