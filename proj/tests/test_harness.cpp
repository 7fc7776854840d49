#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "ptm/corpus.hpp"
#include "ptm/eval_harness.hpp"
#include "ptm/interpreter.hpp"

using namespace ptm;

namespace {

const CostTable kCosts = CostTable::defaults();

std::vector<std::pair<std::string, Program>> corpus_programs() {
    std::vector<std::pair<std::string, Program>> programs;
    for (const std::string& id : corpus::ids()) programs.emplace_back(id, corpus::program(id));
    return programs;
}

Program corpus_of(const std::string& id) { return corpus::program(id); }

}  // namespace

TEST_CASE("mdape basics") {
    CHECK(mdape({100}, 100) == Rational(0));
    CHECK(mdape({100, 200, 300}, 200) == Rational(1, 3));
    CHECK_THROWS_AS(mdape(std::vector<long long>{}, 10), HarnessError);
    CHECK_THROWS_AS(mdape({0, 10}, 10), HarnessError);
    CHECK_THROWS_AS(mdape({-5}, 10), HarnessError);
    // even-length median averages the central pair
    CHECK(mdape({100, 100, 200, 200}, 100) == Rational(1, 4));
}

TEST_CASE("mdape is zero exactly when a strong majority of observations are exact") {
    std::mt19937 rng(321);
    std::uniform_int_distribution<int> size(1, 9);
    std::uniform_int_distribution<long long> value(1, 20);
    for (int trial = 0; trial < 300; ++trial) {
        size_t k = (size_t)size(rng);
        long long prediction = value(rng);
        std::vector<long long> ys;
        size_t exact = 0;
        for (size_t i = 0; i < k; ++i) {
            bool hit = value(rng) % 2 == 0;
            long long y = hit ? prediction : prediction + value(rng);
            if (y == prediction) ++exact;
            ys.push_back(y);
        }
        // median of non-negative errors is zero iff the central value(s) are
        bool majority = k % 2 == 1 ? exact >= (k + 1) / 2 : exact > k / 2;
        CHECK((mdape(ys, prediction) == Rational(0)) == majority);
    }
}

TEST_CASE("mdape is scale invariant") {
    std::mt19937 rng(55);
    std::uniform_int_distribution<long long> value(1, 500);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rational> ys;
        for (int i = 0; i < 5; ++i) ys.push_back(Rational(value(rng)));
        Rational prediction(value(rng));
        Rational k(value(rng), value(rng));
        std::vector<Rational> scaled;
        for (const Rational& y : ys) scaled.push_back(y * k);
        CHECK(mdape(ys, prediction) == mdape(scaled, prediction * k));
    }
}

TEST_CASE("grid files") {
    ParameterGrid grid = ParameterGrid::from_string(
        "struct_size = 1, 2, 3\n"
        "num_elements = 64, 128\n"
        "rows = 1, 2\n"
        "source_kib = 20, 24\n");
    CHECK(grid.struct_size == std::vector<long long>{1, 2, 3});
    CHECK(grid.num_elements == std::vector<long long>{64, 128});
    CHECK_THROWS_AS(ParameterGrid::from_string("bogus = 1\n"), HarnessError);
    CHECK_THROWS_AS(ParameterGrid::from_string("rows = 0\n"), HarnessError);
    CHECK_THROWS_AS(ParameterGrid::from_string("rows = one\n"), HarnessError);

    ParameterGrid defaults = ParameterGrid::defaults();
    CHECK(defaults.struct_size.size() == 16);
    CHECK(defaults.num_elements == std::vector<long long>{64, 128, 256, 512, 1024});
    CHECK(defaults.rows.size() == 10);
    CHECK(defaults.source_kib == std::vector<long long>{20, 24, 28, 32, 36, 40, 44, 48});
}

TEST_CASE("sweep spot values") {
    auto rows = sweep(corpus_programs(), ParameterGrid::defaults(), kCosts);
    // 4 copy programs x 80 points + 2 broadcast x 80 points
    CHECK(rows.size() == 4 * 80 + 2 * 80);
    auto value_at = [&](const std::string& id, std::optional<long long> s, long long n,
                        std::optional<long long> m) {
        for (const PredictionRow& row : rows)
            if (row.program_id == id && row.point.struct_size == s && row.point.n == n &&
                row.point.rows == m)
                return row.prediction;
        FAIL("missing sweep row");
        return 0LL;
    };
    CHECK(value_at("1a", 4, 1024, std::nullopt) == 13184);
    CHECK(value_at("2b", 4, 1024, std::nullopt) == 2944);
    CHECK(value_at("2a", 4, 1024, std::nullopt) == 8192);
    // broadcast points are keyed by rows and the KiB-derived element count
    CHECK(value_at("3a", std::nullopt, 20 * 256, 4) ==
          run(corpus_of("3a"), {{"n", 20 * 256}, {"m", 4}}, kCosts).cycles);
}

TEST_CASE("sweep agrees with the oracle at a non-grid point") {
    ParameterGrid grid;
    grid.struct_size = {4};
    grid.num_elements = {1024};
    grid.rows = {4};
    grid.source_kib = {4};  // 1024 elements
    auto rows = sweep({{"3a", corpus_of("3a")}, {"3b", corpus_of("3b")}}, grid, kCosts);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].prediction == 11784);  // 3a at m=4, n=1024
    CHECK(rows[1].prediction == 8064);   // 3b at m=4, n=1024
}

TEST_CASE("sweep is deterministic") {
    std::ostringstream first, second;
    auto programs = corpus_programs();
    emit_predictions(sweep(programs, ParameterGrid::defaults(), kCosts), ReportFormat::Csv, first);
    emit_predictions(sweep(programs, ParameterGrid::defaults(), kCosts), ReportFormat::Csv,
                     second);
    CHECK(first.str() == second.str());
    CHECK(first.str().substr(0, first.str().find('\n')) ==
          "program_id,struct_size,rows,source_kib,n,prediction,formula");
}

TEST_CASE("sweep rejects non-divisible points") {
    ParameterGrid grid;
    grid.struct_size = {1};
    grid.num_elements = {100};  // not a multiple of 16
    grid.rows = {1};
    grid.source_kib = {20};
    CHECK_THROWS_AS(sweep({{"1b", corpus_of("1b")}}, grid, kCosts), HarnessError);
}

TEST_CASE("compare winners") {
    ParameterGrid grid = ParameterGrid::defaults();

    SUBCASE("vectorization always beats the scalar AoS copy") {
        for (const CompareRow& row :
             compare("1a", corpus_of("1a"), "2a", corpus_of("2a"), grid, kCosts))
            CHECK(row.winner == "2a");
    }

    SUBCASE("the SoA layout overtakes gather vectorization above struct size 4") {
        for (const CompareRow& row :
             compare("1b", corpus_of("1b"), "2a", corpus_of("2a"), grid, kCosts)) {
            if (*row.point.struct_size <= 4)
                CHECK(row.winner == "2a");
            else
                CHECK(row.winner == "1b");
        }
    }

    SUBCASE("column-wise broadcast wins except for a single row") {
        for (const CompareRow& row :
             compare("3a", corpus_of("3a"), "3b", corpus_of("3b"), grid, kCosts)) {
            if (*row.point.rows == 1)
                CHECK(row.winner == "3a");
            else
                CHECK(row.winner == "3b");
        }
    }

    SUBCASE("programs of different families cannot be compared") {
        CHECK_THROWS_AS(compare("1a", corpus_of("1a"), "3a", corpus_of("3a"), grid, kCosts),
                        HarnessError);
    }
}

TEST_CASE("winner is invariant under uniform cost scaling") {
    CostTable scaled;
    scaled.t_insert = 20 * 7;
    scaled.t_load = 2 * 7;
    scaled.t_store = 2 * 7;
    scaled.t_rep = 2 * 7;
    scaled.t_gp = 4 * 7;
    ParameterGrid grid = ParameterGrid::defaults();
    auto base = compare("1b", corpus_of("1b"), "2a", corpus_of("2a"), grid, kCosts);
    auto big = compare("1b", corpus_of("1b"), "2a", corpus_of("2a"), grid, scaled);
    REQUIRE(base.size() == big.size());
    for (size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].winner == big[i].winner);
        CHECK(base[i].speedup == big[i].speedup);
    }
}

TEST_CASE("noise-free measurements evaluate to zero error") {
    auto programs = corpus_programs();
    ParameterGrid grid = ParameterGrid::defaults();
    auto measurements = synthetic_measurements(programs, grid, kCosts, 1, 3, 0.0);
    auto predictions = sweep(programs, grid, kCosts);
    EvaluateResult result = evaluate(measurements, predictions);
    CHECK(result.records.size() == 6 * 80);
    for (const AccuracyRecord& record : result.records) CHECK(record.mdape == Rational(0));
    for (const AccuracySummary& summary : result.summaries) {
        CHECK(summary.median == Rational(0));
        CHECK(summary.max == Rational(0));
    }
}

TEST_CASE("ten percent noise keeps the median error within ten percent") {
    auto programs = corpus_programs();
    ParameterGrid grid = ParameterGrid::defaults();
    auto measurements = synthetic_measurements(programs, grid, kCosts, 42, 5, 0.1);
    EvaluateResult result = evaluate(measurements, sweep(programs, grid, kCosts));
    REQUIRE(result.summaries.size() == 6);
    for (const AccuracySummary& summary : result.summaries)
        CHECK(summary.median <= Rational(1, 10));
}

TEST_CASE("unmatched measurement keys are an error") {
    auto programs = corpus_programs();
    ParameterGrid grid = ParameterGrid::defaults();
    std::vector<Measurement> measurements{
        {"1a", ParamPoint{3, 999, std::nullopt, std::nullopt}, 1234}};
    try {
        evaluate(measurements, sweep(programs, grid, kCosts));
        FAIL("expected unmatched keys to raise");
    } catch (const HarnessError& e) {
        CHECK(std::string(e.what()).find("999") != std::string::npos);
    }
}

TEST_CASE("report emission") {
    auto programs = std::vector<std::pair<std::string, Program>>{{"1a", corpus_of("1a")}};
    ParameterGrid grid;
    grid.struct_size = {4};
    grid.num_elements = {1024};
    auto measurements = synthetic_measurements(programs, grid, kCosts, 9, 4, 0.05);
    EvaluateResult result = evaluate(measurements, sweep(programs, grid, kCosts));

    SUBCASE("csv header for a copy-kernel sweep is fixed") {
        std::ostringstream out;
        emit_report(result.records, ReportFormat::Csv, out);
        std::string header = out.str().substr(0, out.str().find('\n'));
        CHECK(header == "program_id,struct_size,n,prediction,observed_median,mdape");
    }

    SUBCASE("empty record sets are rejected") {
        std::ostringstream out;
        CHECK_THROWS_AS(emit_report({}, ReportFormat::Csv, out), HarnessError);
    }

    SUBCASE("emitted csv re-ingests to the same records") {
        std::ostringstream out;
        emit_report(result.records, ReportFormat::Csv, out);
        std::istringstream in(out.str());
        auto again = read_report_csv(in);
        REQUIRE(again.size() == result.records.size());
        for (size_t i = 0; i < again.size(); ++i) {
            CHECK(again[i].program_id == result.records[i].program_id);
            CHECK(again[i].point == result.records[i].point);
            CHECK(again[i].prediction == result.records[i].prediction);
            CHECK(again[i].observed_median == result.records[i].observed_median);
            CHECK(again[i].mdape == result.records[i].mdape);
        }
        // and re-emitting is byte identical
        std::ostringstream second;
        emit_report(again, ReportFormat::Csv, second);
        CHECK(second.str() == out.str());
    }

    SUBCASE("json lines carry the same fields") {
        std::ostringstream out;
        emit_report(result.records, ReportFormat::JsonLines, out);
        std::string first_line = out.str().substr(0, out.str().find('\n'));
        CHECK(first_line.find("\"program_id\":\"1a\"") != std::string::npos);
        CHECK(first_line.find("\"prediction\":13184") != std::string::npos);
    }
}

TEST_CASE("measurement csv round trip") {
    auto programs = std::vector<std::pair<std::string, Program>>{{"3b", corpus_of("3b")}};
    ParameterGrid grid;
    grid.rows = {2, 3};
    grid.source_kib = {20};
    auto measurements = synthetic_measurements(programs, grid, kCosts, 3, 2, 0.1);
    std::ostringstream out;
    write_measurements_csv(measurements, out);
    std::istringstream in(out.str());
    auto again = read_measurements_csv(in);
    REQUIRE(again.size() == measurements.size());
    for (size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].program_id == measurements[i].program_id);
        CHECK(again[i].point == measurements[i].point);
        CHECK(again[i].cycles == measurements[i].cycles);
    }
    CHECK_THROWS_AS(read_measurements_csv(in), HarnessError);  // exhausted stream
    std::istringstream bad("program_id,cycles\n1a,5\n");
    CHECK_THROWS_AS(read_measurements_csv(bad), HarnessError);
}

TEST_CASE("synthetic measurements are reproducible per seed") {
    auto programs = std::vector<std::pair<std::string, Program>>{{"1b", corpus_of("1b")}};
    ParameterGrid grid;
    grid.struct_size = {1};
    grid.num_elements = {256};
    auto a = synthetic_measurements(programs, grid, kCosts, 11, 5, 0.1);
    auto b = synthetic_measurements(programs, grid, kCosts, 11, 5, 0.1);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].cycles == b[i].cycles);
    auto c = synthetic_measurements(programs, grid, kCosts, 12, 5, 0.1);
    bool any_different = false;
    for (size_t i = 0; i < a.size(); ++i) any_different |= (a[i].cycles != c[i].cycles);
    CHECK(any_different);
}
