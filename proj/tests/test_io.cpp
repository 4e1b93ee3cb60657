#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "walkoff/config.hpp"
#include "walkoff/errors.hpp"
#include "walkoff/histogram_io.hpp"
#include "walkoff/outputs.hpp"

using namespace walkoff;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("walkoff_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

JointIntensity small_joint() {
    JointIntensity j;
    j.counts = RealGrid2D(Axis(-8.0, 8.0, 4), Axis(-6.0, 6.0, 3));
    double vals[12] = {0.1, 1.0 / 3.0, 12345.678, 0.0, 1e-300, 2.5,
                      7.0, 0.25,      1e6,       3.0, 4.0,    5.0};
    for (int i = 0; i < 12; ++i) j.counts.values[static_cast<std::size_t>(i)] = vals[i];
    j.z = 0.7;
    j.magnification = 1.25;
    return j;
}

RunConfig load_text(const TempDir& dir, const std::string& text, RunMode mode,
                    const std::string& name = "t.cfg") {
    std::string p = dir.file(name);
    atomic_write(p, text);
    return load_run_config(p, mode);
}

}  // namespace

TEST_CASE("format_double and parse_double round trip bit exactly") {
    double cases[] = {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, -2.5e-7, 1e-300, 1e308, 6.02214076e23,
                      3.141592653589793};
    for (double v : cases) {
        std::string s = format_double(v);
        double back = 0.0;
        REQUIRE(parse_double(s, back));
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
    CHECK(format_double(-0.0)[0] == '-');

    double out;
    CHECK(!parse_double("", out));
    CHECK(!parse_double("abc", out));
    CHECK(!parse_double("1.5x", out));
    CHECK(!parse_double(" 1.0", out));
    CHECK(!parse_double("1.0 ", out));
}

TEST_CASE("atomic_write and read_file round trip binary content") {
    TempDir dir;
    std::string bytes = "line1\n";
    bytes += '\0';
    bytes += "\xff\x01 binary tail";
    atomic_write(dir.file("blob.bin"), bytes);
    CHECK(read_file(dir.file("blob.bin")) == bytes);
    CHECK(!fs::exists(dir.file("blob.bin.tmp")));

    CHECK_THROWS_AS(read_file(dir.file("missing.txt")), IoError);
    CHECK_THROWS_AS(atomic_write(dir.file("no_such_dir/x.txt"), "hi"), IoError);
}

TEST_CASE("histogram render and ingest round trip bit exactly") {
    TempDir dir;
    JointIntensity j = small_joint();
    write_histogram(dir.file("h.csv"), j);
    JointIntensity back = ingest_histogram(dir.file("h.csv"));

    CHECK(back.counts.axis_a.min == j.counts.axis_a.min);
    CHECK(back.counts.axis_a.max == j.counts.axis_a.max);
    CHECK(back.counts.axis_a.n == j.counts.axis_a.n);
    CHECK(back.counts.axis_b.min == j.counts.axis_b.min);
    CHECK(back.counts.axis_b.max == j.counts.axis_b.max);
    CHECK(back.counts.axis_b.n == j.counts.axis_b.n);
    CHECK(back.z == j.z);
    CHECK(back.magnification == j.magnification);
    REQUIRE(back.counts.values.size() == j.counts.values.size());
    for (std::size_t i = 0; i < j.counts.values.size(); ++i)
        CHECK(back.counts.values[i] == j.counts.values[i]);
    CHECK(back.meta.at("source") == dir.file("h.csv"));
}

TEST_CASE("ingest accepts whitespace or comma separated rows and keeps unknown headers") {
    TempDir dir;
    std::string text =
        "# x_s_axis: -1 1 2\n"
        "# x_i_axis: -1 1 2\n"
        "# z: 0.5\n"
        "# detector: emccd-3\n"
        "\n"
        "1 2\n"
        "3,\t4\n";
    atomic_write(dir.file("mix.csv"), text);
    JointIntensity j = ingest_histogram(dir.file("mix.csv"));
    CHECK(j.counts.at(0, 0) == 1.0);
    CHECK(j.counts.at(0, 1) == 2.0);
    CHECK(j.counts.at(1, 0) == 3.0);
    CHECK(j.counts.at(1, 1) == 4.0);
    CHECK(j.z == 0.5);
    CHECK(j.magnification == 1.0);
    CHECK(j.meta.at("detector") == "emccd-3");
}

TEST_CASE("ingest rejects malformed files with the offending line") {
    TempDir dir;
    auto expect_parse_error = [&](const std::string& text, const char* tag) {
        atomic_write(dir.file("bad.csv"), text);
        INFO(tag);
        CHECK_THROWS_AS(ingest_histogram(dir.file("bad.csv")), ParseError);
    };
    std::string head = "# x_s_axis: -1 1 2\n# x_i_axis: -1 1 2\n";

    expect_parse_error("1 2\n3 4\n", "data before headers");
    expect_parse_error(head + "1 2\n3 4\n5 6\n", "too many rows");
    expect_parse_error(head + "1 2\n", "too few rows");
    expect_parse_error(head + "1 2 3\n4 5\n", "wrong field count");
    expect_parse_error(head + "1 2\n3 -4\n", "negative count");
    expect_parse_error(head + "1 2\n3 4x\n", "malformed number");
    expect_parse_error("# x_s_axis: -1 1\n" + head + "1 2\n3 4\n", "short axis header");
    expect_parse_error("# x_s_axis: 1 -1 2\n# x_i_axis: -1 1 2\n1 2\n3 4\n", "inverted axis");
    expect_parse_error(head + "# magnification: -2\n1 2\n3 4\n", "negative magnification");
    expect_parse_error(head + "# z 0.5\n1 2\n3 4\n", "header without colon");

    // line numbers surface on the exception
    atomic_write(dir.file("bad.csv"), head + "1 2\n3 -4\n");
    try {
        ingest_histogram(dir.file("bad.csv"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("magnification maps camera coordinates back to the object plane") {
    TempDir dir;
    std::string text =
        "# x_s_axis: -8 8 2\n"
        "# x_i_axis: -4 4 2\n"
        "# magnification: 2\n"
        "1 2\n3 4\n";
    atomic_write(dir.file("mag.csv"), text);

    JointIntensity raw = ingest_histogram(dir.file("mag.csv"), false);
    CHECK(raw.counts.axis_a.max == 8.0);
    CHECK(raw.magnification == 2.0);

    JointIntensity obj = ingest_histogram(dir.file("mag.csv"), true);
    CHECK(obj.counts.axis_a.min == -4.0);
    CHECK(obj.counts.axis_a.max == 4.0);
    CHECK(obj.counts.axis_b.max == 2.0);
    CHECK(obj.counts.at(1, 1) == 4.0);
}

TEST_CASE("matrix csv uses the shared header layout and ingests back") {
    TempDir dir;
    RealGrid2D g(Axis(-2.0, 2.0, 3), Axis(-1.0, 1.0, 2), {0.5, 1.5, 2.5, 3.5, 4.5, 5.5});
    std::string csv = render_matrix_csv(g, "x_s_axis", "x_i_axis", {{"z", "0.25"}});
    CHECK(csv.rfind("# x_s_axis: -2 2 3\n# x_i_axis: -1 1 2\n# z: 0.25\n", 0) == 0);

    atomic_write(dir.file("m.csv"), csv);
    JointIntensity j = ingest_histogram(dir.file("m.csv"));
    CHECK(j.z == 0.25);
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(j.counts.values[i] == g.values[i]);
}

TEST_CASE("width table csv has a fixed column schema") {
    WidthMapRow r;
    r.z = 1.5;
    r.c = -2.0;
    r.fit.a = 0.5;
    r.fit.b = -1.0;
    r.fit.width = 2.0;
    r.fit.amplitude = 7.0;
    r.fit.residual_rms = 0.01;
    r.fit.flags = kFitFallbackWidth;
    std::string csv = render_width_table_csv({r}, "dimensionless units");
    CHECK(csv ==
          "# dimensionless units\n"
          "z,c,A,B,width,amplitude,residual_rms,flags\n"
          "1.5,-2,0.5,-1,2,7,0.01,1\n");
}

TEST_CASE("profile csv records the cut metadata") {
    SectionProfile p;
    p.offset_c = -3.0;
    p.cut_kind = CutKind::FixedDifference;
    p.coordinate = {-0.5, 0.0, 0.5};
    p.values = {1.0, 2.0, 1.0};
    std::string csv = render_profile_csv(p, {{"frame", "2"}});
    CHECK(csv ==
          "# cut: fixed_difference\n"
          "# c: -3\n"
          "# frame: 2\n"
          "coordinate,value\n"
          "-0.5,1\n"
          "0,2\n"
          "0.5,1\n");
}

TEST_CASE("ppm heatmaps are deterministic binary P6 images") {
    RealGrid2D g(Axis(-1.0, 1.0, 3), Axis(-1.0, 1.0, 5));
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = static_cast<double>(i % 7);
    std::string ppm = render_ppm_heatmap(g);
    std::string header = "P6\n5 3\n255\n";
    REQUIRE(ppm.size() == header.size() + 3 * g.values.size());
    CHECK(ppm.rfind(header, 0) == 0);
    CHECK(render_ppm_heatmap(g) == ppm);

    // constant field: defined output, all pixels identical
    RealGrid2D flat(Axis(-1.0, 1.0, 2), Axis(-1.0, 1.0, 2), std::vector<double>(4, 3.0));
    std::string fppm = render_ppm_heatmap(flat);
    REQUIRE(fppm.size() == std::string("P6\n2 2\n255\n").size() + 12);
    for (int px = 1; px < 4; ++px)
        for (int ch = 0; ch < 3; ++ch)
            CHECK(fppm[fppm.size() - 12 + 3 * px + ch] == fppm[fppm.size() - 12 + ch]);
}

TEST_CASE("manifests sort entries and render deterministically") {
    Manifest m;
    m.record("b.csv", "hello");
    m.record("a.csv", "");
    std::string text = m.render("dimensionless", "[run]\nmode = postselect");

    // fnv1a64("") is the offset basis; entries come out name sorted
    std::string expected =
        "units: dimensionless\n"
        "files: 2\n"
        "cbf29ce484222325 a.csv\n";
    CHECK(text.rfind(expected, 0) == 0);
    CHECK(text.find("b.csv") != std::string::npos);
    CHECK(text.find("config:\n[run]\nmode = postselect\n") != std::string::npos);

    Manifest m2;
    m2.record("b.csv", "hello");
    m2.record("a.csv", "");
    CHECK(m2.render("dimensionless", "[run]\nmode = postselect") == text);
}

TEST_CASE("emit writes the recorded bytes to disk") {
    TempDir dir;
    Manifest m;
    emit(m, dir.path.string(), "out.csv", "1,2,3\n");
    CHECK(read_file(dir.file("out.csv")) == "1,2,3\n");
    CHECK(m.render("dimensionless", "").find("out.csv") != std::string::npos);
}

TEST_CASE("config files parse sections, comments, and typed values") {
    ConfigFile cf = ConfigFile::parse_text(
        "# comment\n"
        "; also a comment\n"
        "top = 1\n"
        "[run]\n"
        "mode = postselect\n"
        "count = 42\n"
        "ratio = 2.5\n"
        "flag = yes\n"
        "list = 1, 2.5 -3\n");
    CHECK(cf.has("", "top"));
    CHECK(cf.get_string("run", "mode") == "postselect");
    CHECK(cf.get_int("run", "count", 0) == 42);
    CHECK(cf.get_double("run", "ratio") == 2.5);
    CHECK(cf.get_bool("run", "flag", false));
    CHECK(cf.get_bool("run", "absent", true));
    CHECK(cf.get_double("run", "absent", -1.0) == -1.0);
    CHECK(cf.get_string("run", "absent", "dflt") == "dflt");
    std::vector<double> lst = cf.get_double_list("run", "list");
    REQUIRE(lst.size() == 3);
    CHECK(lst[0] == 1.0);
    CHECK(lst[1] == 2.5);
    CHECK(lst[2] == -3.0);
}

TEST_CASE("config parse and access errors carry the key path") {
    CHECK_THROWS_AS(ConfigFile::parse_text("[run\nmode = x\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_text("[run]\nmode = a\nmode = b\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_text("[run]\njust a line\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_text("[run]\n= value\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_text("[]\n"), ConfigError);

    ConfigFile cf = ConfigFile::parse_text("[run]\nx = notanumber\nb = maybe\nf = 1.5\n");
    CHECK_THROWS_AS(cf.get_double("run", "x"), ConfigError);
    CHECK_THROWS_AS(cf.get_bool("run", "b", false), ConfigError);
    CHECK_THROWS_AS(cf.get_int("run", "f", 0), ConfigError);
    CHECK_THROWS_AS(cf.get_string("run", "missing"), ConfigError);

    try {
        cf.get_double("run", "x");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("run.x") != std::string::npos);
    }

    CHECK_THROWS_AS(cf.reject_unknown({{"run", {"x", "b"}}}), ConfigError);
    CHECK_THROWS_AS(cf.reject_unknown({{"other", {"x"}}}), ConfigError);
    CHECK_NOTHROW(cf.reject_unknown({{"run", {"x", "b", "f"}}}));
}

TEST_CASE("run configs validate mode, grid, and scan invariants") {
    TempDir dir;
    std::string wigner_ok =
        "[run]\nmode = simulate-wigner\n[state]\nw_p = 50\nbeta = 1\nt = 4\nl = 3\n"
        "[grid]\nm = 32\nn_outer = 48\n[scan]\nmu_list = 0 0.5\n[output]\ndir = out\n";

    RunConfig rc = load_text(dir, wigner_ok, RunMode::WignerSim);
    CHECK(rc.mode == RunMode::WignerSim);
    CHECK(rc.units == "dimensionless");
    CHECK(rc.window == 0.0);
    CHECK(rc.window_strict);
    CHECK(rc.interpolation == ShearInterpolation::Bilinear);
    CHECK(rc.heatmaps);
    CHECK(rc.max_csv_dim == 512);
    CHECK(rc.state.t == 4.0);
    REQUIRE(rc.mu_list.size() == 2);

    auto fails = [&](const std::string& text, RunMode mode) {
        CHECK_THROWS_AS(load_text(dir, text, mode), ConfigError);
    };

    auto patch = [&](const std::string& from, const std::string& to) {
        std::string t = wigner_ok;
        std::size_t p = t.find(from);
        REQUIRE(p != std::string::npos);
        return t.replace(p, from.size(), to);
    };

    fails(wigner_ok, RunMode::AnsatzSim);  // declared mode disagrees
    fails(patch("[run]\n", "[run]\nunits = natural\n"), RunMode::WignerSim);
    fails(patch("[run]\n", "[run]\nthreads = 0\n"), RunMode::WignerSim);
    fails(patch("m = 32", "m = 31"), RunMode::WignerSim);
    fails(patch("m = 32", "m = 8"), RunMode::WignerSim);
    fails(patch("n_outer = 48", "n_outer = 16"), RunMode::WignerSim);
    fails(patch("[grid]\n", "[grid]\nwindow = -3\n"), RunMode::WignerSim);
    fails(patch("[grid]\n", "[grid]\nwindow_check = maybe\n"), RunMode::WignerSim);
    fails(patch("[grid]\n", "[grid]\ninterpolation = spline\n"), RunMode::WignerSim);
    fails(patch("mu_list = 0 0.5", "mu_list ="), RunMode::WignerSim);
    fails(patch("mu_list = 0 0.5", "mu_list = 0.5 0"), RunMode::WignerSim);
    fails(patch("mu_list = 0 0.5", "mu_list = 0 0"), RunMode::WignerSim);
    fails(patch("[grid]\n", "[grid]\ntypo_key = 1\n"), RunMode::WignerSim);
    fails(patch("[state]\nw_p = 50\nbeta = 1\nt = 4\nl = 3\n",
                "[state]\nw_p = 50\nbeta = 1\nt = 4\nl = 3\n[crystal]\nL = 1e-3\ntheta = 0.5\n"
                "n_o = 1.7\nn_e = 1.55\nlambda_p = 4e-7\n"),
          RunMode::WignerSim);
    fails(patch("\ndir = out\n", "\ndir =\n"), RunMode::WignerSim);

    // crystal block must give the pump wavenumber exactly one way
    std::string crystal_both =
        "[run]\nmode = simulate-wigner\n[state]\nw_p = 50\n"
        "[crystal]\nL = 1e-3\ntheta = 0.5\nn_o = 1.7\nn_e = 1.55\nlambda_p = 4e-7\nk_p = 1e7\n"
        "[grid]\nm = 32\nn_outer = 48\n[scan]\nmu_list = 0\n[output]\ndir = out\n";
    fails(crystal_both, RunMode::WignerSim);

    std::string fit_missing_input =
        "[run]\nmode = fit-sections\n[fit]\ninputs = nope.csv\nc_list = 0\n[output]\ndir = out\n";
    fails(fit_missing_input, RunMode::FitSections);

    // cli overrides
    std::string p = dir.file("ovr.cfg");
    atomic_write(p, wigner_ok);
    RunConfig ovr = load_run_config(p, RunMode::WignerSim, "elsewhere", 3);
    CHECK(ovr.out_dir == "elsewhere");
    CHECK(ovr.threads == 3);
}

TEST_CASE("fit and postselect configs resolve inputs relative to the config") {
    TempDir dir;
    JointIntensity j = small_joint();
    write_histogram(dir.file("data.csv"), j);

    RunConfig fc = load_text(dir,
                             "[run]\nmode = fit-sections\n[fit]\ninputs = data.csv\n"
                             "c_list = -1 0 1\ncut = fixed_difference\nstep = 0.5\n"
                             "poisson_weights = true\n[output]\ndir = out\n",
                             RunMode::FitSections);
    REQUIRE(fc.inputs.size() == 1);
    CHECK(fc.inputs[0] == dir.file("data.csv"));
    CHECK(fc.cut == CutKind::FixedDifference);
    CHECK(fc.section_step == 0.5);
    CHECK(fc.poisson_weights);

    RunConfig pc = load_text(dir,
                             "[run]\nmode = postselect\n[postselect]\ninput = data.csv\n"
                             "c_list = 0 2\n[output]\ndir = out\n",
                             RunMode::Postselect);
    REQUIRE(pc.inputs.size() == 1);
    CHECK(pc.inputs[0] == dir.file("data.csv"));
}
