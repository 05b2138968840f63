#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "qwdirac/csvio.hpp"

using namespace qwd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qwd_csvio_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("format_double round-trips exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mant(rng), expo(rng));
        const double back = std::stod(format_double(v));
        CHECK(back == v);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5) == "-2.5");
}

TEST_CASE("format_csv layout and validation") {
    const std::string text =
        format_csv({"T", "X"}, {{0.0, 1.5}, {0.25, -3.0}});
    CHECK(text == "T,X\n0,1.5\n0.25,-3\n");

    CHECK_THROWS_AS(format_csv({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(format_csv({"a", "b"}, {{1.0}}), std::invalid_argument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(format_csv({"a"}, {{nan}}), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(format_csv({"a"}, {{inf}}), std::invalid_argument);
}

TEST_CASE("write_csv then read_csv round-trips") {
    TempDir tmp;
    const std::string path = tmp.file("sub/dir/table.csv");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < 40; ++r)
        rows.push_back({dist(rng), dist(rng), dist(rng)});

    write_csv(path, {"a", "b", "c"}, rows);
    CHECK(fs::exists(path));
    // atomic write leaves no temporary behind
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(fs::path(path).parent_path()))
        ++entries;
    CHECK(entries == 1);

    const CsvTable table = read_csv(path);
    REQUIRE(table.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(table.rows.size() == rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(table.rows[r][c] == rows[r][c]);
}

TEST_CASE("write_csv_cells allows empty cells, read maps them to NaN") {
    TempDir tmp;
    const std::string path = tmp.file("cells.csv");
    write_csv_cells(path, {"T", "X"}, {{"1", "2.5"}, {"2", ""}});
    const CsvTable table = read_csv(path);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][1] == 2.5);
    CHECK(std::isnan(table.rows[1][1]));
}

TEST_CASE("read_csv rejects damaged input") {
    TempDir tmp;
    const std::string bad_cell = tmp.file("bad.csv");
    write_text_atomic(bad_cell, "a,b\n1,zebra\n");
    CHECK_THROWS_AS(read_csv(bad_cell), std::runtime_error);

    const std::string ragged = tmp.file("ragged.csv");
    write_text_atomic(ragged, "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), std::runtime_error);

    CHECK_THROWS_AS(read_csv(tmp.file("missing.csv")), std::runtime_error);
}

TEST_CASE("write_text_atomic replaces existing content") {
    TempDir tmp;
    const std::string path = tmp.file("note.txt");
    write_text_atomic(path, "first\n");
    write_text_atomic(path, "second\n");
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "second");
}
