#include "sirbif/errors.hpp"
#include "sirbif/io.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

using namespace sirbif;

TEST_CASE("formatted numbers round-trip bit for bit", "[io]")
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20000; ++i) {
        const std::uint64_t bits = rng();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) {
            continue;
        }
        const double back = parse_number(format_number(v));
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::isnan(parse_number(format_number(std::nan("")))));
    CHECK(parse_number(format_number(-HUGE_VAL)) == -HUGE_VAL);
    CHECK_THROWS_AS(parse_number("1.5x"), InvalidInput);
    CHECK_THROWS_AS(parse_number(""), InvalidInput);
    CHECK_THROWS_AS(parse_number("1e400"), InvalidInput);
    CHECK(parse_number("4.9406564584124654e-324") > 0.0);
}

TEST_CASE("CSV text uses LF, a header row and no quoting", "[io]")
{
    const Table t{{"a", "b"}, {{"1", "2"}, {"3.5", "x"}}};
    const std::string text = to_csv(t);
    CHECK(text == "a,b\n1,2\n3.5,x\n");
    CHECK(parse_csv(text) == t);
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("c"), InvalidInput);
}

TEST_CASE("malformed CSV is rejected", "[io][errors]")
{
    CHECK_THROWS_AS(parse_csv("a,b\r\n1,2\r\n"), InvalidInput);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2"), InvalidInput);
    CHECK_THROWS_AS(parse_csv(""), InvalidInput);
    CHECK_THROWS_AS(to_csv(Table{{"a"}, {{"x,y"}}}), InvalidInput);
    CHECK_THROWS_AS(to_csv(Table{{"a", "b"}, {{"1"}}}), InvalidInput);
}

TEST_CASE("JSON numbers carry 17 significant digits", "[io]")
{
    const nlohmann::json j = {{"x", 0.1}, {"n", 3}, {"list", {1.0 / 3.0, -2.5e-300}}, {"bad", std::nan("")}};
    const std::string text = dump_json(j);
    CHECK(text.find("0.10000000000000001") != std::string::npos);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    CHECK(text.find("-2.5e-300") != std::string::npos);
    CHECK(text.find("\"n\": 3") != std::string::npos);
    CHECK(text.find("\"bad\": null") != std::string::npos);
    const auto back = nlohmann::json::parse(text);
    CHECK(back["x"].get<double>() == 0.1);
    CHECK(back["list"][0].get<double>() == 1.0 / 3.0);
}

TEST_CASE("atomic writes leave no temporary file behind", "[io]")
{
    const auto dir = std::filesystem::temp_directory_path() / "sirbif_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    write_atomic(path, "a\n1\n");
    write_atomic(path, "a\n2\n");
    CHECK(read_file(path) == "a\n2\n");
    CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_file(dir / "missing.csv"), InvalidInput);
}
