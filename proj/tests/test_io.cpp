#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "floatwave/errors.hpp"
#include "floatwave/io.hpp"

using namespace floatwave;

TEST_CASE("body JSON parsing") {
    const std::string text = R"({
        "contour": [[-1, -0.5], [1, -0.5], [1, 0.5], [-1, 0.5]],
        "density_regions": [{"polygon": [[-1, -0.5], [1, -0.5], [1, 0.5], [-1, 0.5]],
                             "rho": 0.5}],
        "depth": {"finite": 2.5},
        "gravity": 9.8
    })";
    BodyFile bf = parse_body_json(text);
    REQUIRE(bf.body.outer_contour.size() == 4);
    CHECK(bf.body.outer_contour[0].x == -1.0);
    CHECK(bf.body.outer_contour[2].y == 0.5);
    REQUIRE(bf.body.density_regions.size() == 1);
    CHECK(bf.body.density_regions[0].rho == 0.5);
    CHECK_FALSE(bf.water.infinite_depth);
    CHECK(bf.water.depth == 2.5);
    CHECK(bf.water.gravity == 9.8);

    BodyFile deep = parse_body_json(
        R"({"contour": [[0,0],[1,0],[1,1]], "depth": "infinite"})");
    CHECK(deep.water.infinite_depth);
    CHECK(deep.water.gravity == 9.81); // default
}

TEST_CASE("malformed body JSON reports line and column") {
    const std::string text = "{\n  \"contour\": [[0, 0],\n  oops\n}";
    try {
        parse_body_json(text);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadConfig);
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("column") != std::string::npos);
    }
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(parse_body_json("[1,2,3]"), Error);
    CHECK_THROWS_AS(parse_body_json(R"({"gravity": 9.81})"), Error); // no contour
    CHECK_THROWS_AS(parse_body_json(R"({"contour": [[0,0],[1,0]]})"), Error);
    CHECK_THROWS_AS(parse_body_json(R"({"contour": [[0,0],[1,0],[1,"a"]]})"), Error);
    CHECK_THROWS_AS(
        parse_body_json(R"({"contour": [[0,0],[1,0],[1,1]], "depth": {"finite": -1}})"),
        Error);
    CHECK_THROWS_AS(
        parse_body_json(R"({"contour": [[0,0],[1,0],[1,1]], "depth": "bottomless"})"),
        Error);
    CHECK_THROWS_AS(
        parse_body_json(
            R"({"contour": [[0,0],[1,0],[1,1]], "density_regions": [{"rho": 1}]})"),
        Error);
}

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::ldexp(u(rng), static_cast<int>(rng() % 200) - 100);
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
}

TEST_CASE("config hash is stable and sensitive") {
    const std::string h = config_hash("body=x omega=1");
    CHECK(h.size() == 16);
    CHECK(h == config_hash("body=x omega=1"));
    CHECK(h != config_hash("body=x omega=2"));
    CHECK(config_hash("") == "cbf29ce484222325"); // offset basis
}

TEST_CASE("csv writer emits metadata header and rows") {
    CsvWriter w(config_hash("cfg"));
    w.comment("columns are unitless");
    w.columns({"omega", "value", "label"});
    w.cell(1.5);
    w.cell(static_cast<long long>(7));
    w.cell(std::string("ok"));
    w.end_row();
    const std::string out = w.str();
    CHECK(out.find(std::string("# floatwave ") + version()) == 0);
    CHECK(out.find("# config " + config_hash("cfg")) != std::string::npos);
    CHECK(out.find("# columns are unitless\n") != std::string::npos);
    CHECK(out.find("omega,value,label\n") != std::string::npos);
    CHECK(out.find("1.5,7,ok\n") != std::string::npos);
}

TEST_CASE("write_file honors the overwrite guard") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "floatwave_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "out.csv").string();
    fs::remove(path);

    write_file(path, "first\n", false);
    CHECK(read_file(path) == "first\n");
    CHECK_THROWS_AS(write_file(path, "second\n", false), Error);
    CHECK(read_file(path) == "first\n");
    write_file(path, "second\n", true);
    CHECK(read_file(path) == "second\n");
    fs::remove(path);
    CHECK_THROWS_AS(read_file(path), Error);
}
