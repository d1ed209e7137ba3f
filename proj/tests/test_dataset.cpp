#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gpfrm/dataset.hpp"
#include "gpfrm/scoring.hpp"
#include "helpers.hpp"

using namespace gpfrm;

namespace {

struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& contents) {
        static int counter = 0;
        path = "gpfrm_test_" + std::to_string(counter++) + ".csv";
        std::ofstream out(path);
        out << contents;
    }
    ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_csv drops the label column by name") {
    TempCsv csv("a,b,class\n1,2,x?\n3,4,y?\n");
    // label column removed before numeric parsing, so non-numeric labels are fine
    CHECK_THROWS_AS(load_csv(csv.path), DataError);
    const auto table = load_csv(csv.path, std::string("class"));
    CHECK(table.names == std::vector<std::string>{"a", "b"});
    CHECK(table.rows() == 2);
    CHECK(table.columns[1][1] == 4.0);
}

TEST_CASE("load_csv marks missing cells") {
    TempCsv csv("a,b\n1,?\n2,NA\n3,\n4,5\n");
    const auto table = load_csv(csv.path);
    CHECK(std::isnan(table.columns[1][0]));
    CHECK(std::isnan(table.columns[1][1]));
    CHECK(std::isnan(table.columns[1][2]));
    CHECK(table.columns[1][3] == 5.0);
}

TEST_CASE("load_csv rejects non-numeric cells and missing files") {
    TempCsv csv("a,b\n1,oops\n");
    CHECK_THROWS_AS(load_csv(csv.path), DataError);
    CHECK_THROWS_AS(load_csv("no_such_file.csv"), DataError);
}

TEST_CASE("header-only file fails downstream (n >= 2)") {
    TempCsv csv("a,b\n");
    const auto table = load_csv(csv.path);
    CHECK_THROWS_AS(clean_missing(table, 0.1), DataError);
}

TEST_CASE("clean_missing drops features over the threshold, then instances") {
    TempCsv csv("a,b,c\n1,1,?\n2,?,?\n3,3,1\n4,4,1\n5,5,1\n");
    // c is 40% missing; b is 20% missing
    const auto table = load_csv(csv.path);
    CleanSummary summary;
    const auto matrix = clean_missing(table, 0.2, &summary);
    CHECK(matrix.names == std::vector<std::string>{"a", "b"});
    CHECK(matrix.n == 4);  // the row where b is missing goes
    CHECK(summary.dropped_features == std::vector<std::string>{"c"});
    CHECK(summary.dropped_instances == 1);
}

TEST_CASE("clean_missing is the identity on complete data") {
    TempCsv csv("a,b\n1,2\n3,4\n");
    const auto table = load_csv(csv.path);
    const auto matrix = clean_missing(table, 0.1);
    CHECK(matrix.columns == table.columns);
    CHECK(matrix.names == table.names);
}

TEST_CASE("cleaning is idempotent") {
    Rng rng(11);
    TempCsv csv("a,b,c\n1,?,3\n2,2,?\n3,3,3\n4,4,4\n5,5,5\n6,6,6\n7,7,7\n8,8,8\n9,9,9\n10,10,10\n");
    const auto table = load_csv(csv.path);
    const auto once = clean_missing(table, 0.15);
    RawTable again;
    again.names = once.names;
    again.columns = once.columns;
    const auto twice = clean_missing(again, 0.15);
    CHECK(twice.columns == once.columns);
    CHECK(twice.names == once.names);
}

TEST_CASE("correlation_matrix on exact linear columns") {
    FeatureMatrix matrix;
    matrix.names = {"f0", "f1", "f2", "f3"};
    matrix.columns = {{1, 2, 3}, {2, 4, 6}, {3, 2, 1}, {5, 5, 5}};
    matrix.n = 3;
    matrix.m = 4;
    const auto corr = correlation_matrix(matrix);
    CHECK(corr.at(0, 1) == doctest::Approx(1.0));
    CHECK(corr.at(0, 2) == doctest::Approx(-1.0));
    CHECK(corr.at(0, 3) == 0.0);  // constant-column convention
    CHECK(corr.at(3, 3) == 0.0);
    CHECK(corr.at(0, 0) == 1.0);
}

TEST_CASE("correlation_matrix properties on random data") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto matrix = gpfrm::testing::random_matrix(30, 6, rng);
        const auto corr = correlation_matrix(matrix);
        for (std::size_t i = 0; i < matrix.m; ++i) {
            CHECK(corr.at(i, i) == 1.0);
            for (std::size_t j = 0; j < matrix.m; ++j) {
                CHECK(std::fabs(corr.at(i, j) - corr.at(j, i)) <= 1e-12);
                CHECK(corr.at(i, j) >= -1.0);
                CHECK(corr.at(i, j) <= 1.0);
            }
        }
    }
}

TEST_CASE("matching_sets boundary is strict") {
    CorrMatrix corr;
    corr.m = 3;
    corr.values = {1.0, 0.96, 0.95,
                   0.96, 1.0, -0.2,
                   0.95, -0.2, 1.0};
    const auto sets = matching_sets(corr, 0.95);
    CHECK(sets.matches(0, 1));
    CHECK(sets.matches(1, 0));
    CHECK_FALSE(sets.matches(0, 2));  // exactly at threshold: excluded
    CHECK(sets.matches(0, 0));
    CHECK(sets.matches(2, 2));
}

TEST_CASE("matching_sets is symmetric and reflexive on random matrices") {
    Rng rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const auto matrix = gpfrm::testing::random_matrix(20, 5, rng);
        const auto corr = correlation_matrix(matrix);
        const auto sets = matching_sets(corr, 0.5);
        for (int i = 0; i < 5; ++i) {
            CHECK(sets.matches(i, i));
            for (int j = 0; j < 5; ++j)
                CHECK(sets.matches(i, j) == sets.matches(j, i));
        }
    }
}
