#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "hamvar/errors.hpp"
#include "hamvar/io.hpp"

using namespace hamvar;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("hamvar_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("17-digit formatting reloads bit for bit") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(u(rng), static_cast<int>(u(rng) * 10));
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(INFINITY) == "inf");
    CHECK(std::isinf(parse_double("-inf")));
    CHECK(std::isnan(parse_double("nan")));
    CHECK_THROWS_AS((void)parse_double("1.5x"), ConfigError);
    CHECK(number(2.5) == json(2.5));
    CHECK(number(INFINITY) == json("inf"));
}

TEST_CASE("field CSV round trip") {
    const auto dir = scratch_dir("field");
    const RectDomain dom{1.0, 2.0, 5, 7};
    const Field f = random_smooth_field(dom, 4);
    write_field_csv(dir / "f.csv", f, dom);
    const auto lines = lines_of(dir / "f.csv");
    REQUIRE(lines.size() == 1 + dom.size());
    CHECK(lines[0] == "x,y,value");
    CHECK(lines[1].rfind(format_double(dom.x(0)) + "," + format_double(dom.y(0)) + ",", 0) == 0);
    const Field g = read_field_csv(dir / "f.csv", dom);
    CHECK(g.values == f.values);
    CHECK_THROWS_AS((void)read_field_csv(dir / "f.csv", RectDomain{1.0, 2.0, 5, 6}), DimensionMismatch);
    CHECK_THROWS_AS((void)read_field_csv(dir / "f.csv", RectDomain{1.0, 2.0, 5, 8}), DimensionMismatch);

    write_field_header(dir / "h.json", dom);
    std::ifstream in(dir / "h.json");
    const json h = json::parse(in);
    CHECK(h["a"] == 1.0);
    CHECK(h["b"] == 2.0);
    CHECK(h["nx"] == 5);
    CHECK(h["ny"] == 7);
    std::filesystem::remove_all(dir);
}

TEST_CASE("curve CSV and JSON") {
    const auto dir = scratch_dir("curve");
    BifurcationCurve c;
    c.points.push_back(CurvePoint{0.0, 88.5, INFINITY, Evidence::TwoSolutions, 12, 89.0});
    c.points.push_back(CurvePoint{0.2, 87.0, 1570.0, Evidence::OneSolution, 9, 88.0});
    write_curve_csv(dir / "c.csv", c);
    const auto lines = lines_of(dir / "c.csv");
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "mu,lambda_star,lambda_ub,evidence");
    CHECK(lines[1] == "0,88.5,inf,TwoSolutions");
    CHECK(lines[2] == "0.20000000000000001,87,1570,OneSolution");
    const json j = to_json(c);
    CHECK(j["points"].size() == 2);
    CHECK(j["points"][0]["lambda_ub"] == "inf");
    CHECK(j["points"][1]["evidence"] == "OneSolution");
    std::filesystem::remove_all(dir);
}

TEST_CASE("report and result JSON") {
    PropertyReport r;
    r.property_id = "x";
    r.record(0.5, 0.0, "a");
    r.record(-1.0, 0.0, "b");
    const json j = to_json(r);
    CHECK(j["samples"] == 2);
    CHECK(j["violations"] == 1);
    CHECK(j["passed"] == false);
    CHECK(j["worst_margin"] == -1.0);
    CHECK(j["empirical_constant"] == "nan");
    CHECK(j["records"][0] == "b");

    const RectDomain dom = RectDomain::unit_square(3);
    SolveResult s;
    s.v = Field(dom, 1.0);
    s.u = Field(dom, 2.0);
    s.energy = -0.5;
    s.kind = SolutionKind::MountainPass;
    const json js = to_json(s, Exponents{}, dom);
    CHECK(js["kind"] == "MountainPass");
    CHECK(js["energy"] == -0.5);
    CHECK(js["min_u"] == 2.0);
    CHECK(js["domain"]["nx"] == 3);
}
