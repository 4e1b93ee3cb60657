#include "walkoff/histogram_io.hpp"

#include <sstream>

#include "walkoff/outputs.hpp"

namespace walkoff {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

Axis parse_axis(const std::string& value, long line_no) {
    std::vector<std::string> f = split_fields(value);
    double mn, mx;
    long n;
    if (f.size() != 3 || !parse_double(f[0], mn) || !parse_double(f[1], mx))
        throw ParseError("axis header needs 'min max n'", line_no);
    try {
        n = std::stol(f[2]);
    } catch (...) {
        throw ParseError("axis header needs integer n", line_no);
    }
    if (n < 2 || n > 1000000) throw ParseError("axis n out of range", line_no);
    try {
        return Axis(mn, mx, static_cast<int>(n));
    } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
    }
}

}  // namespace

JointIntensity ingest_histogram(const std::string& path, bool apply_magnification) {
    std::istringstream is(read_file(path));

    JointIntensity out;
    bool have_s = false, have_i = false;
    Axis axis_s, axis_i;
    std::vector<double> values;
    std::size_t rows_seen = 0;

    std::string line;
    long line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::string body = trim(t.substr(1));
            std::size_t colon = body.find(':');
            if (colon == std::string::npos) throw ParseError("header line needs 'key: value'", line_no);
            std::string key = trim(body.substr(0, colon));
            std::string value = trim(body.substr(colon + 1));
            if (key == "x_s_axis") {
                axis_s = parse_axis(value, line_no);
                have_s = true;
            } else if (key == "x_i_axis") {
                axis_i = parse_axis(value, line_no);
                have_i = true;
            } else if (key == "z") {
                if (!parse_double(value, out.z)) throw ParseError("malformed z value", line_no);
            } else if (key == "magnification") {
                if (!parse_double(value, out.magnification))
                    throw ParseError("malformed magnification value", line_no);
            } else {
                out.meta[key] = value;
            }
            continue;
        }
        if (!have_s || !have_i) throw ParseError("data row before both axis headers", line_no);
        if (rows_seen >= static_cast<std::size_t>(axis_s.n))
            throw ParseError("more data rows than x_s_axis declares", line_no);
        std::vector<std::string> f = split_fields(t);
        if (f.size() != static_cast<std::size_t>(axis_i.n))
            throw ParseError("row has " + std::to_string(f.size()) + " values, expected " +
                                 std::to_string(axis_i.n),
                             line_no);
        for (const std::string& field : f) {
            double v;
            if (!parse_double(field, v)) throw ParseError("malformed number '" + field + "'", line_no);
            if (v < 0.0) throw ParseError("negative count", line_no);
            values.push_back(v);
        }
        ++rows_seen;
    }
    if (!have_s || !have_i) throw ParseError("missing axis headers in " + path);
    if (rows_seen != static_cast<std::size_t>(axis_s.n))
        throw ParseError("file has " + std::to_string(rows_seen) + " data rows, expected " +
                         std::to_string(axis_s.n));

    if (!(out.magnification > 0.0)) throw ParseError("magnification must be positive");
    if (apply_magnification && out.magnification != 1.0) {
        double m = out.magnification;
        axis_s = Axis(axis_s.min / m, axis_s.max / m, axis_s.n);
        axis_i = Axis(axis_i.min / m, axis_i.max / m, axis_i.n);
    }
    out.counts = RealGrid2D(axis_s, axis_i, std::move(values));
    out.meta.emplace("source", path);
    out.validate();
    return out;
}

std::string render_histogram(const JointIntensity& joint) {
    const RealGrid2D& g = joint.counts;
    std::string out;
    out.reserve(g.values.size() * 14 + 256);
    out += "# x_s_axis: " + format_double(g.axis_a.min) + " " + format_double(g.axis_a.max) + " " +
           std::to_string(g.axis_a.n) + "\n";
    out += "# x_i_axis: " + format_double(g.axis_b.min) + " " + format_double(g.axis_b.max) + " " +
           std::to_string(g.axis_b.n) + "\n";
    out += "# z: " + format_double(joint.z) + "\n";
    out += "# magnification: " + format_double(joint.magnification) + "\n";
    for (int a = 0; a < g.axis_a.n; ++a) {
        for (int b = 0; b < g.axis_b.n; ++b) {
            if (b) out += ',';
            out += format_double(g.at(a, b));
        }
        out += '\n';
    }
    return out;
}

void write_histogram(const std::string& path, const JointIntensity& joint) {
    atomic_write(path, render_histogram(joint));
}

}  // namespace walkoff
