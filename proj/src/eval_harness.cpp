#include "ptm/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ptm/interpreter.hpp"

namespace ptm {

// ---- Grid -------------------------------------------------------------------

ParameterGrid ParameterGrid::defaults() {
    ParameterGrid grid;
    for (long long s = 1; s <= 16; ++s) grid.struct_size.push_back(s);
    for (long long n = 64; n <= 1024; n *= 2) grid.num_elements.push_back(n);
    for (long long r = 1; r <= 10; ++r) grid.rows.push_back(r);
    for (long long kib = 20; kib <= 48; kib += 4) grid.source_kib.push_back(kib);
    return grid;
}

void ParameterGrid::validate() const {
    auto all_positive = [](const std::vector<long long>& values, const char* name) {
        for (long long v : values)
            if (v <= 0) throw HarnessError(std::string("grid entry in ") + name + " must be positive");
    };
    all_positive(struct_size, "struct_size");
    all_positive(num_elements, "num_elements");
    all_positive(rows, "rows");
    all_positive(source_kib, "source_kib");
    if (element_bytes <= 0) throw HarnessError("element_bytes must be positive");
    for (long long kib : source_kib)
        if ((kib * 1024) % element_bytes != 0)
            throw HarnessError("source_kib " + std::to_string(kib) +
                               " is not a whole number of elements");
}

ParameterGrid ParameterGrid::from_string(const std::string& text) {
    ParameterGrid grid;
    grid.struct_size.clear();
    grid.num_elements.clear();
    grid.rows.clear();
    grid.source_kib.clear();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq;
        if (!(ls >> key)) continue;
        if (!(ls >> eq) || eq != "=")
            throw HarnessError("grid line " + std::to_string(lineno) + ": expected 'key = values'");
        std::vector<long long> values;
        std::string rest;
        std::getline(ls, rest);
        std::istringstream vs(rest);
        std::string item;
        while (std::getline(vs, item, ',')) {
            std::istringstream is(item);
            long long v;
            if (!(is >> v))
                throw HarnessError("grid line " + std::to_string(lineno) + ": bad integer '" +
                                   item + "'");
            values.push_back(v);
        }
        if (key == "struct_size")
            grid.struct_size = values;
        else if (key == "num_elements")
            grid.num_elements = values;
        else if (key == "rows")
            grid.rows = values;
        else if (key == "source_kib")
            grid.source_kib = values;
        else if (key == "element_bytes" && values.size() == 1)
            grid.element_bytes = values[0];
        else
            throw HarnessError("grid line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    grid.validate();
    return grid;
}

ParameterGrid ParameterGrid::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw HarnessError("cannot open grid file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
}

// ---- Parameter points ---------------------------------------------------------

sym::Bindings ParamPoint::bindings() const {
    sym::Bindings b;
    b["n"] = Rational(n);
    if (struct_size) b["S"] = Rational(*struct_size);
    if (rows) b["m"] = Rational(*rows);
    return b;
}

std::string ParamPoint::str() const {
    std::ostringstream os;
    if (struct_size) os << "S=" << *struct_size << " ";
    os << "n=" << n;
    if (rows) os << " rows=" << *rows;
    return os.str();
}

// ---- MdAPE --------------------------------------------------------------------

Rational median(std::vector<Rational> values) {
    if (values.empty()) throw HarnessError("median of an empty list");
    std::sort(values.begin(), values.end());
    size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / Rational(2);
}

Rational mdape(const std::vector<Rational>& observations, const Rational& prediction) {
    if (observations.empty()) throw HarnessError("mdape needs at least one observation");
    std::vector<Rational> errors;
    errors.reserve(observations.size());
    for (const Rational& y : observations) {
        if (!(Rational(0) < y)) throw HarnessError("mdape requires positive observations");
        errors.push_back((y - prediction).abs() / y);
    }
    return median(std::move(errors));
}

Rational mdape(const std::vector<long long>& observations, long long prediction) {
    std::vector<Rational> ys(observations.begin(), observations.end());
    return mdape(ys, Rational(prediction));
}

// ---- Sweep --------------------------------------------------------------------

namespace {

std::vector<ParamPoint> grid_points(Family family, const ParameterGrid& grid, long long line_elems) {
    std::vector<ParamPoint> points;
    if (family == Family::Copy) {
        for (long long s : grid.struct_size)
            for (long long n : grid.num_elements) {
                if (n % line_elems != 0)
                    throw HarnessError("num_elements " + std::to_string(n) +
                                       " is not a multiple of the line length " +
                                       std::to_string(line_elems));
                points.push_back(ParamPoint{s, n, std::nullopt, std::nullopt});
            }
        return points;
    }
    for (long long r : grid.rows)
        for (long long kib : grid.source_kib) {
            long long n = kib * 1024 / grid.element_bytes;
            if (n % line_elems != 0)
                throw HarnessError("source_kib " + std::to_string(kib) +
                                   " is not a whole number of cache lines");
            points.push_back(ParamPoint{std::nullopt, n, r, kib});
        }
    return points;
}

}  // namespace

std::vector<PredictionRow> sweep(const std::vector<std::pair<std::string, Program>>& programs,
                                 const ParameterGrid& grid, const CostTable& table) {
    grid.validate();
    table.validate();
    std::vector<PredictionRow> rows;
    for (const auto& [id, program] : programs) {
        Family family = family_of(program);
        sym::Formula symbolic = predict(program, table, true);
        sym::Formula numeric_costs = symbolic.substitute(table.bindings());
        std::string formula = symbolic.str();
        for (const ParamPoint& point : grid_points(family, grid, table.line_elems)) {
            Rational cycles = numeric_costs.eval(point.bindings());
            rows.push_back(PredictionRow{id, family, point, formula, cycles.as_integer()});
        }
    }
    return rows;
}

std::vector<CompareRow> compare(const std::string& id_a, const Program& a, const std::string& id_b,
                                const Program& b, const ParameterGrid& grid,
                                const CostTable& table) {
    if (family_of(a) != family_of(b))
        throw HarnessError("programs '" + id_a + "' and '" + id_b +
                           "' do not share a parameter schema");
    std::vector<PredictionRow> rows_a = sweep({{id_a, a}}, grid, table);
    std::vector<PredictionRow> rows_b = sweep({{id_b, b}}, grid, table);
    std::vector<CompareRow> out;
    out.reserve(rows_a.size());
    for (size_t i = 0; i < rows_a.size(); ++i) {
        CompareRow row;
        row.point = rows_a[i].point;
        row.prediction_a = rows_a[i].prediction;
        row.prediction_b = rows_b[i].prediction;
        row.speedup = Rational(row.prediction_a, 1) / Rational(row.prediction_b, 1);
        row.winner = row.prediction_a < row.prediction_b   ? id_a
                     : row.prediction_b < row.prediction_a ? id_b
                                                           : "tie";
        out.push_back(std::move(row));
    }
    return out;
}

// ---- Evaluate -----------------------------------------------------------------

EvaluateResult evaluate(const std::vector<Measurement>& measurements,
                        const std::vector<PredictionRow>& predictions) {
    std::map<std::pair<std::string, ParamPoint>, const PredictionRow*> by_key;
    for (const PredictionRow& row : predictions) by_key[{row.program_id, row.point}] = &row;

    std::map<std::pair<std::string, ParamPoint>, std::vector<Rational>> observations;
    std::vector<std::string> unmatched;
    for (const Measurement& m : measurements) {
        if (m.cycles <= 0)
            throw HarnessError("measurement for " + m.program_id + " " + m.point.str() +
                               " must be positive");
        auto key = std::make_pair(m.program_id, m.point);
        if (!by_key.count(key)) {
            std::string text = m.program_id + " " + m.point.str();
            if (std::find(unmatched.begin(), unmatched.end(), text) == unmatched.end())
                unmatched.push_back(text);
            continue;
        }
        observations[key].push_back(Rational(m.cycles));
    }
    if (!unmatched.empty()) {
        std::string list;
        for (const std::string& key : unmatched) list += "\n  " + key;
        throw HarnessError("measurement keys without a matching prediction:" + list);
    }

    EvaluateResult result;
    std::map<std::string, std::vector<Rational>> per_program;
    for (const auto& [key, ys] : observations) {
        const PredictionRow& row = *by_key.at(key);
        AccuracyRecord record;
        record.program_id = row.program_id;
        record.family = row.family;
        record.point = row.point;
        record.prediction = row.prediction;
        record.observed_median = median(ys);
        record.mdape = mdape(ys, Rational(row.prediction));
        per_program[record.program_id].push_back(record.mdape);
        result.records.push_back(std::move(record));
    }
    for (auto& [program_id, values] : per_program) {
        AccuracySummary summary;
        summary.program_id = program_id;
        summary.points = (long long)values.size();
        summary.min = *std::min_element(values.begin(), values.end());
        summary.max = *std::max_element(values.begin(), values.end());
        summary.median = median(values);
        result.summaries.push_back(std::move(summary));
    }
    return result;
}

std::vector<Measurement> synthetic_measurements(
    const std::vector<std::pair<std::string, Program>>& programs, const ParameterGrid& grid,
    const CostTable& table, unsigned long long seed, int samples_per_point, double noise) {
    if (samples_per_point <= 0) throw HarnessError("samples_per_point must be positive");
    if (noise < 0.0 || noise >= 1.0) throw HarnessError("noise must lie in [0, 1)");
    std::mt19937_64 rng(seed);
    std::vector<Measurement> measurements;
    for (const auto& [id, program] : programs) {
        for (const ParamPoint& point : grid_points(family_of(program), grid, table.line_elems)) {
            long long truth = run(program, point.bindings(), table).cycles;
            for (int s = 0; s < samples_per_point; ++s) {
                // 53-bit uniform in [0,1); avoids distribution differences
                // between standard library implementations.
                double u01 = (double)(rng() >> 11) * 0x1.0p-53;
                double factor = 1.0 - noise + 2.0 * noise * u01;
                long long observed = (long long)std::llround((double)truth * factor);
                if (observed < 1) observed = 1;
                measurements.push_back(Measurement{id, point, observed});
            }
        }
    }
    return measurements;
}

// ---- Reports ------------------------------------------------------------------

namespace {

bool any_copy(const std::vector<AccuracyRecord>& records) {
    return std::any_of(records.begin(), records.end(),
                       [](const AccuracyRecord& r) { return r.family == Family::Copy; });
}
bool any_broadcast(const std::vector<AccuracyRecord>& records) {
    return std::any_of(records.begin(), records.end(),
                       [](const AccuracyRecord& r) { return r.family == Family::Broadcast; });
}

std::string opt_str(const std::optional<long long>& v) {
    return v ? std::to_string(*v) : "";
}

}  // namespace

void emit_report(const std::vector<AccuracyRecord>& records, ReportFormat format,
                 std::ostream& out) {
    if (records.empty()) throw HarnessError("no accuracy records to emit");
    bool copy = any_copy(records);
    bool broadcast = any_broadcast(records);
    if (format == ReportFormat::Csv) {
        out << "program_id";
        if (copy) out << ",struct_size";
        if (broadcast) out << ",rows";
        out << ",n,prediction,observed_median,mdape\n";
        for (const AccuracyRecord& r : records) {
            out << r.program_id;
            if (copy) out << "," << opt_str(r.point.struct_size);
            if (broadcast) out << "," << opt_str(r.point.rows);
            out << "," << r.point.n << "," << r.prediction << ","
                << r.observed_median.decimal_str() << "," << r.mdape.decimal_str() << "\n";
        }
    } else {
        for (const AccuracyRecord& r : records) {
            nlohmann::ordered_json j;
            j["program_id"] = r.program_id;
            if (r.point.struct_size) j["struct_size"] = *r.point.struct_size;
            if (r.point.rows) j["rows"] = *r.point.rows;
            j["n"] = r.point.n;
            j["prediction"] = r.prediction;
            j["observed_median"] = r.observed_median.decimal_str();
            j["mdape"] = r.mdape.decimal_str();
            out << j.dump() << "\n";
        }
    }
    if (!out) throw HarnessError("failed to write report");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

Rational parse_rational(const std::string& text) {
    size_t slash = text.find('/');
    if (slash != std::string::npos)
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    size_t dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    long long den = 1;
    for (size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(std::stoll(digits), den);
}

}  // namespace

std::vector<AccuracyRecord> read_report_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw HarnessError("empty report");
    std::vector<std::string> columns = split_csv_line(header);
    std::vector<AccuracyRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != columns.size()) throw HarnessError("ragged report row: " + line);
        AccuracyRecord r;
        for (size_t i = 0; i < columns.size(); ++i) {
            const std::string& col = columns[i];
            const std::string& value = fields[i];
            if (col == "program_id")
                r.program_id = value;
            else if (col == "struct_size" && !value.empty())
                r.point.struct_size = std::stoll(value);
            else if (col == "rows" && !value.empty())
                r.point.rows = std::stoll(value);
            else if (col == "n")
                r.point.n = std::stoll(value);
            else if (col == "prediction")
                r.prediction = std::stoll(value);
            else if (col == "observed_median")
                r.observed_median = parse_rational(value);
            else if (col == "mdape")
                r.mdape = parse_rational(value);
        }
        r.family = r.point.struct_size ? Family::Copy : Family::Broadcast;
        records.push_back(std::move(r));
    }
    return records;
}

void write_measurements_csv(const std::vector<Measurement>& measurements, std::ostream& out) {
    out << "program_id,struct_size,n,rows,cycles\n";
    for (const Measurement& m : measurements)
        out << m.program_id << "," << opt_str(m.point.struct_size) << "," << m.point.n << ","
            << opt_str(m.point.rows) << "," << m.cycles << "\n";
    if (!out) throw HarnessError("failed to write measurements");
}

std::vector<Measurement> read_measurements_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw HarnessError("empty measurement file");
    std::vector<std::string> columns = split_csv_line(header);
    const std::vector<std::string> expected{"program_id", "struct_size", "n", "rows", "cycles"};
    if (columns != expected)
        throw HarnessError("measurement CSV header must be program_id,struct_size,n,rows,cycles");
    std::vector<Measurement> measurements;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 5)
            throw HarnessError("measurement line " + std::to_string(lineno) + " is ragged");
        Measurement m;
        m.program_id = fields[0];
        if (!fields[1].empty()) m.point.struct_size = std::stoll(fields[1]);
        m.point.n = std::stoll(fields[2]);
        if (!fields[3].empty()) m.point.rows = std::stoll(fields[3]);
        m.cycles = std::stoll(fields[4]);
        if (m.cycles <= 0)
            throw HarnessError("measurement line " + std::to_string(lineno) +
                               ": cycles must be positive");
        measurements.push_back(std::move(m));
    }
    return measurements;
}

void emit_predictions(const std::vector<PredictionRow>& rows, ReportFormat format,
                      std::ostream& out) {
    if (rows.empty()) throw HarnessError("no prediction rows to emit");
    bool copy = std::any_of(rows.begin(), rows.end(),
                            [](const PredictionRow& r) { return r.family == Family::Copy; });
    bool broadcast = std::any_of(rows.begin(), rows.end(),
                                 [](const PredictionRow& r) { return r.family == Family::Broadcast; });
    if (format == ReportFormat::Csv) {
        out << "program_id";
        if (copy) out << ",struct_size";
        if (broadcast) out << ",rows,source_kib";
        out << ",n,prediction,formula\n";
        for (const PredictionRow& r : rows) {
            out << r.program_id;
            if (copy) out << "," << opt_str(r.point.struct_size);
            if (broadcast)
                out << "," << opt_str(r.point.rows) << "," << opt_str(r.point.source_kib);
            out << "," << r.point.n << "," << r.prediction << ",\"" << r.formula << "\"\n";
        }
    } else {
        for (const PredictionRow& r : rows) {
            nlohmann::ordered_json j;
            j["program_id"] = r.program_id;
            if (r.point.struct_size) j["struct_size"] = *r.point.struct_size;
            if (r.point.rows) j["rows"] = *r.point.rows;
            if (r.point.source_kib) j["source_kib"] = *r.point.source_kib;
            j["n"] = r.point.n;
            j["prediction"] = r.prediction;
            j["formula"] = r.formula;
            out << j.dump() << "\n";
        }
    }
    if (!out) throw HarnessError("failed to write predictions");
}

}  // namespace ptm
