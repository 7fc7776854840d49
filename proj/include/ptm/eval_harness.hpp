#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptm/ast.hpp"
#include "ptm/cost_model.hpp"
#include "ptm/rational.hpp"

namespace ptm {

class HarnessError : public std::runtime_error {
public:
    explicit HarnessError(const std::string& what) : std::runtime_error(what) {}
};

// The swept parameter space. Copy kernels sweep struct_size x num_elements;
// broadcast kernels sweep rows x source_kib, with the element count derived
// from the source size in KiB.
struct ParameterGrid {
    std::vector<long long> struct_size;
    std::vector<long long> num_elements;
    std::vector<long long> rows;
    std::vector<long long> source_kib;
    long long element_bytes = 4;

    static ParameterGrid defaults();  // struct 1..16, elements 2^6..2^10, rows 1..10, KiB 20..48
    static ParameterGrid from_string(const std::string& text);
    static ParameterGrid from_file(const std::string& path);

    void validate() const;
};

enum class Family { Copy, Broadcast };

inline Family family_of(const Program& p) {
    return p.dialect == Dialect::V1 ? Family::Copy : Family::Broadcast;
}

// One parameter point. n is always the element count; struct_size is set
// for copy kernels, rows (and the originating source_kib, when known) for
// broadcast kernels. Join keys ignore source_kib since n determines it.
struct ParamPoint {
    std::optional<long long> struct_size;
    long long n = 0;
    std::optional<long long> rows;
    std::optional<long long> source_kib;

    friend bool operator==(const ParamPoint& a, const ParamPoint& b) {
        return a.struct_size == b.struct_size && a.n == b.n && a.rows == b.rows;
    }
    friend bool operator<(const ParamPoint& a, const ParamPoint& b) {
        auto key = [](const ParamPoint& p) {
            return std::make_tuple(p.struct_size.value_or(-1), p.n, p.rows.value_or(-1));
        };
        return key(a) < key(b);
    }

    // Symbol bindings for prediction and interpretation: S, n, m.
    sym::Bindings bindings() const;
    std::string str() const;
};

struct PredictionRow {
    std::string program_id;
    Family family = Family::Copy;
    ParamPoint point;
    std::string formula;  // symbolic cost, rendered
    long long prediction = 0;
};

struct Measurement {
    std::string program_id;
    ParamPoint point;
    long long cycles = 0;
};

struct AccuracyRecord {
    std::string program_id;
    Family family = Family::Copy;
    ParamPoint point;
    long long prediction = 0;
    Rational observed_median;
    Rational mdape;
};

struct AccuracySummary {
    std::string program_id;
    long long points = 0;
    Rational min, median, max;
};

struct EvaluateResult {
    std::vector<AccuracyRecord> records;
    std::vector<AccuracySummary> summaries;
};

enum class ReportFormat { Csv, JsonLines };

// Median absolute percentage error of a prediction against observations.
// Observations must be non-empty and positive; even-length medians average
// the two central values. Exact rational result.
Rational mdape(const std::vector<Rational>& observations, const Rational& prediction);
Rational mdape(const std::vector<long long>& observations, long long prediction);

Rational median(std::vector<Rational> values);

// One prediction row per program and applicable grid point, ordered by
// (program, point). Rejects points whose element count L does not divide.
std::vector<PredictionRow> sweep(const std::vector<std::pair<std::string, Program>>& programs,
                                 const ParameterGrid& grid, const CostTable& table);

struct CompareRow {
    ParamPoint point;
    long long prediction_a = 0;
    long long prediction_b = 0;
    Rational speedup;  // prediction_a / prediction_b
    std::string winner;
};

// Per-point speed-up of a over b and the predicted winner (the smaller
// prediction). Both programs must sweep the same parameter schema.
std::vector<CompareRow> compare(const std::string& id_a, const Program& a, const std::string& id_b,
                                const Program& b, const ParameterGrid& grid, const CostTable& table);

// Joins measurements against predictions; every measurement key must have a
// matching prediction or the whole call fails listing the unmatched keys.
EvaluateResult evaluate(const std::vector<Measurement>& measurements,
                        const std::vector<PredictionRow>& predictions);

// Interpreter-backed synthetic measurements with seeded multiplicative
// noise in [1-noise, 1+noise]; noise 0 reproduces the oracle exactly.
std::vector<Measurement> synthetic_measurements(
    const std::vector<std::pair<std::string, Program>>& programs, const ParameterGrid& grid,
    const CostTable& table, unsigned long long seed, int samples_per_point, double noise);

void emit_report(const std::vector<AccuracyRecord>& records, ReportFormat format,
                 std::ostream& out);
std::vector<AccuracyRecord> read_report_csv(std::istream& in);

void write_measurements_csv(const std::vector<Measurement>& measurements, std::ostream& out);
std::vector<Measurement> read_measurements_csv(std::istream& in);

void emit_predictions(const std::vector<PredictionRow>& rows, ReportFormat format,
                      std::ostream& out);

}  // namespace ptm
