#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <png.h>

#include "ptcs/io.hpp"

using namespace ptcs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ptcs_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

PhaseSpaceDistribution sample_grid() {
    PhaseSpaceDistribution rho;
    rho.grid.q_count = 3;
    rho.grid.p_count = 4;
    rho.grid.p_max = 2.0;
    rho.grid.q_margin = 0.1;
    for (int i = 0; i < 3; ++i) rho.q.push_back(rho.grid.q_at(i));
    for (int k = 0; k < 4; ++k) rho.p.push_back(rho.grid.p_at(k));
    for (int j = 0; j < 12; ++j) rho.values.push_back(std::exp(-0.3 * j) / 3.0 + 1e-17 * j);
    return rho;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

// RGB at (x, y) of an 8-bit RGB PNG.
std::array<int, 3> pixel(const fs::path& path, int x, int y) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    REQUIRE(png_image_begin_read_from_file(&img, path.c_str()));
    img.format = PNG_FORMAT_RGB;
    std::vector<png_byte> buf(PNG_IMAGE_SIZE(img));
    REQUIRE(png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr));
    const std::size_t o = (static_cast<std::size_t>(y) * img.width + x) * 3;
    return {buf[o], buf[o + 1], buf[o + 2]};
}

}  // namespace

TEST_CASE("grid CSV round trip is bit-identical") {
    const auto rho = sample_grid();
    std::stringstream ss;
    write_grid_csv(ss, rho, {{"nu", "0"}, {"units", "natural"}});
    Metadata meta;
    const auto back = read_grid_csv(ss, "mem", &meta);
    REQUIRE(back.values.size() == rho.values.size());
    for (std::size_t j = 0; j < rho.values.size(); ++j) CHECK(back.values[j] == rho.values[j]);
    CHECK(back.q == rho.q);
    CHECK(back.p == rho.p);
    REQUIRE(meta.size() == 2);
    CHECK(meta[1].first == "units");
    CHECK(meta[1].second == "natural");
}

TEST_CASE("grid CSV header and determinism") {
    const auto a = scratch("a.csv"), b = scratch("b.csv");
    write_grid_csv(a.string(), sample_grid(), {{"t", "0"}});
    write_grid_csv(b.string(), sample_grid(), {{"t", "0"}});
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("# t = 0\nq,p,rho\n", 0) == 0);
}

TEST_CASE("grid CSV errors") {
    PhaseSpaceDistribution empty;
    std::stringstream ss;
    CHECK_THROWS_AS(write_grid_csv(ss, empty), ValidationError);

    std::stringstream bad("q,p,rho\n0.1,0,1\n0.1,1,oops\n");
    try {
        (void)read_grid_csv(bad, "bad.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
    }
    std::stringstream ragged("q,p,rho\n0.1,0,1\n0.1,1,1\n0.2,0,1\n");
    CHECK_THROWS_AS(read_grid_csv(ragged, "ragged.csv"), IoError);
    std::stringstream header("x,y,z\n");
    CHECK_THROWS_AS(read_grid_csv(header, "header.csv"), IoError);
    CHECK_THROWS_AS(read_grid_csv("/nonexistent/grid.csv"), IoError);
    CHECK_THROWS_AS(write_grid_csv("/nonexistent/dir/grid.csv", sample_grid()), IoError);
}

TEST_CASE("trajectory CSV round trip") {
    const auto path = scratch("traj.csv");
    const std::vector<PhasePoint> pts = {{0.1, 2.0}, {1.0 / 3.0, -1e-300}, {3.0, 0.0}};
    write_trajectory_csv(path.string(), pts);
    const auto back = read_trajectory_csv(path.string());
    REQUIRE(back.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(back[j].q == pts[j].q);
        CHECK(back[j].p == pts[j].p);
    }
}

TEST_CASE("matrix JSON round trip") {
    Eigen::MatrixXcd m(2, 2);
    m << std::complex<double>(1.0 / 3.0, 0.0), std::complex<double>(0.0, -0.1), std::complex<double>(0.0, 0.1),
        std::complex<double>(2.0, 0.0);
    const auto back = matrix_from_json(matrix_to_json(m));
    CHECK(back == m);
    CHECK_THROWS_AS(matrix_from_json("{\"re\": []}"), IoError);
    CHECK_THROWS_AS(matrix_from_json("not json"), IoError);
}

TEST_CASE("colour ramp runs blue to red") {
    const auto lo = color_ramp(0.0), hi = color_ramp(1.0);
    CHECK(lo[2] == 255);
    CHECK(lo[0] == 0);
    CHECK(hi[0] == 255);
    CHECK(hi[2] == 0);
    CHECK(color_ramp(-1.0) == lo);
    CHECK(color_ramp(2.0) == hi);
}

TEST_CASE("uniform grid renders at mid-ramp") {
    auto rho = sample_grid();
    for (auto& v : rho.values) v = 0.25;
    const auto path = scratch("uniform.png");
    RenderOptions opts;
    opts.width = 64;
    opts.height = 48;
    render_heatmap(path.string(), rho, nullptr, opts);
    // plot area starts after the left and top margins
    const auto px = pixel(path, 140 + 30, 20 + 20);
    const auto mid = color_ramp(0.5);
    CHECK(px[0] == mid[0]);
    CHECK(px[1] == mid[1]);
    CHECK(px[2] == mid[2]);
}

TEST_CASE("render from files with an overlay") {
    const auto grid = scratch("grid.csv"), traj = scratch("overlay.csv"), png = scratch("out.png");
    write_grid_csv(grid.string(), sample_grid(), {{"units", "SI"}});
    write_trajectory_csv(traj.string(), {{0.5, -1.0}, {1.5, 1.0}, {2.5, -1.0}});
    render_heatmap_files(grid.string(), traj.string(), png.string());
    CHECK(fs::file_size(png) > 100);
    CHECK_THROWS_AS(render_heatmap_files(grid.string(), "", "/nonexistent/dir/x.png"), IoError);
}
