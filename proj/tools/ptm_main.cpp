// Command-line front end: parse, typecheck, predict, interpret, check,
// sweep, evaluate, compare over .ptm programs.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptm/cache_check.hpp"
#include "ptm/cost_model.hpp"
#include "ptm/eval_harness.hpp"
#include "ptm/interpreter.hpp"
#include "ptm/parser.hpp"
#include "ptm/pretty_print.hpp"
#include "ptm/typecheck.hpp"

namespace {

using namespace ptm;

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;

class CliError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string stem_of(const std::string& path) {
    size_t slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

struct ProgramOptions {
    std::string dialect_flag;  // "", "v1", "v2"

    Program load(const std::string& path) const {
        std::string source = read_file(path);
        try {
            if (dialect_flag == "v1") return parse(source, Dialect::V1);
            if (dialect_flag == "v2") return parse(source, Dialect::V2);
            return parse_auto(source);
        } catch (const DslError& e) {
            throw CliError(path + ":" + e.diagnostic.str());
        }
    }
};

void require_typechecked(const std::string& path, const Program& program) {
    auto diags = typecheck(program);
    if (diags.empty()) return;
    std::ostringstream msg;
    for (size_t i = 0; i < diags.size(); ++i)
        msg << (i ? "\n" : "") << path << ":" << diags[i].str();
    throw CliError(msg.str());
}

sym::Bindings parse_params(const std::vector<std::string>& params) {
    sym::Bindings bindings;
    for (const std::string& item : params) {
        size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw CliError("bad --params entry '" + item + "', expected name=value");
        std::string name = item.substr(0, eq);
        long long value;
        std::istringstream vs(item.substr(eq + 1));
        if (!(vs >> value)) throw CliError("bad integer in --params entry '" + item + "'");
        bindings[name] = Rational(value);
    }
    return bindings;
}

CostTable load_costs(const std::string& costs_file) {
    return costs_file.empty() ? CostTable::defaults() : CostTable::from_file(costs_file);
}

std::string ratio_str(const Rational& value) {
    std::ostringstream os;
    os << std::setprecision(6) << value.as_double();
    return os.str();
}

ReportFormat parse_format(const std::string& format) {
    if (format == "csv") return ReportFormat::Csv;
    if (format == "jsonl") return ReportFormat::JsonLines;
    throw CliError("unknown --format '" + format + "', expected csv or jsonl");
}

// Geometry config file: l1_kib / ways / line_bytes keys, one per line.
void load_geometry_config(const std::string& path, long long& l1_kib, int& ways,
                          long long& line_bytes) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open geometry config: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq;
        long long value;
        if (!(ls >> key)) continue;
        if (!(ls >> eq >> value) || eq != "=")
            throw CliError(path + ":" + std::to_string(lineno) + ": expected 'key = integer'");
        if (key == "l1_kib")
            l1_kib = value;
        else if (key == "ways")
            ways = (int)value;
        else if (key == "line_bytes")
            line_bytes = value;
        else
            throw CliError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
}

// ---- parse: AST dump ---------------------------------------------------------

void dump_stmt(std::ostream& out, const Stmt& stmt, int depth);

void dump_block(std::ostream& out, const Block& block, int depth) {
    for (const Stmt& s : block.stmts) dump_stmt(out, s, depth);
}

void dump_stmt(std::ostream& out, const Stmt& stmt, int depth) {
    std::string pad(2 * (size_t)depth, ' ');
    if (const auto* r = std::get_if<Repeat>(&stmt.node)) {
        out << pad << "repeat counter=" << r->counter << " bound=" << r->bound.name;
        if (r->step) out << " step=" << r->step->name;
        out << "\n";
        dump_block(out, r->body, depth + 1);
        return;
    }
    if (const auto* f = std::get_if<ForeachBlock>(&stmt.node)) {
        out << pad << "foreach_block bound=" << f->bound.name << " index=" << f->index
            << " offset=" << f->offset << "\n";
        dump_block(out, f->body, depth + 1);
        return;
    }
    if (const auto* ins = std::get_if<InsertV1>(&stmt.node)) {
        out << pad << "insert target=";
        if (const auto* var = std::get_if<Var>(&ins->target))
            out << var->name;
        else
            out << render(std::get<IndexRef>(ins->target));
        out << " arg=" << render(ins->arg) << "\n";
        return;
    }
    if (const auto* ins = std::get_if<InsertV2>(&stmt.node)) {
        out << pad << "insert target=" << render(ins->target) << " arg=" << render(ins->arg)
            << "\n";
        return;
    }
    if (const auto* load = std::get_if<LoadLine>(&stmt.node)) {
        out << pad << "load_line target=" << load->target.name << " source=";
        if (const auto* deref = std::get_if<DerefRef>(&load->source))
            out << "*" << deref->line.name;
        else
            out << render(std::get<LineRef>(load->source));
        out << "\n";
        return;
    }
    if (const auto* load = std::get_if<LoadElem>(&stmt.node)) {
        out << pad << "load_elem target=" << load->target.name << " source=";
        if (const auto* index = std::get_if<IndexRef>(&load->source))
            out << render(*index);
        else {
            const auto& at = std::get<AtCall>(load->source);
            out << at.lines.name << ".at(" << render(at.index) << ")";
        }
        out << "\n";
        return;
    }
    if (const auto* store = std::get_if<Store>(&stmt.node)) {
        out << pad << "store target=";
        if (const auto* index = std::get_if<IndexRef>(&store->target))
            out << render(*index);
        else if (const auto* deref = std::get_if<DerefRef>(&store->target))
            out << "*" << deref->line.name;
        else
            out << render(std::get<LineRef>(store->target));
        out << " source=" << store->source.name << "\n";
        return;
    }
    const auto& g = std::get<GatherPartial>(stmt.node);
    out << pad << "gather_partial target=" << g.target.name << " vec=" << g.vec.name
        << " line=" << g.line.name << "\n";
}

std::vector<std::pair<std::string, Program>> load_programs(const ProgramOptions& opts,
                                                           const std::vector<std::string>& paths) {
    std::vector<std::pair<std::string, Program>> programs;
    for (const std::string& path : paths) {
        Program p = opts.load(path);
        require_typechecked(path, p);
        programs.emplace_back(stem_of(path), std::move(p));
    }
    return programs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cache DSL toolkit: symbolic cycle prediction and its oracles"};
    app.require_subcommand(1);

    ProgramOptions opts;
    app.add_option("--dialect", opts.dialect_flag, "Override the #dialect pragma (v1 or v2)")
        ->check(CLI::IsMember({"v1", "v2"}));

    std::string costs_file;
    app.add_option("--costs", costs_file, "Cost table file (key = integer per line)")
        ->configurable(false);

    // parse
    auto* cmd_parse = app.add_subcommand("parse", "Parse a program and dump its AST");
    cmd_parse->fallthrough();
    std::string parse_file;
    bool parse_pretty = false;
    cmd_parse->add_option("file", parse_file, "program file")->required();
    cmd_parse->add_flag("--pretty", parse_pretty, "print canonical source instead of the AST");

    // typecheck
    auto* cmd_typecheck = app.add_subcommand("typecheck", "Check the cache line discipline");
    cmd_typecheck->fallthrough();
    std::string typecheck_file;
    int typecheck_ways = 0;
    cmd_typecheck->add_option("file", typecheck_file, "program file")->required();
    cmd_typecheck->add_option("--ways", typecheck_ways, "declared associativity for way checks");

    // predict
    auto* cmd_predict = app.add_subcommand("predict", "Symbolic or numeric cycle prediction");
    cmd_predict->fallthrough();
    std::string predict_file;
    bool predict_symbolic = false;
    bool predict_factored = false;
    std::vector<std::string> predict_params;
    cmd_predict->add_option("file", predict_file, "program file")->required();
    cmd_predict->add_flag("--symbolic", predict_symbolic, "keep cost symbols and L symbolic");
    cmd_predict->add_flag("--factored", predict_factored, "group terms by n/L");
    cmd_predict->add_option("--params", predict_params, "parameter bindings name=value");

    // interpret
    auto* cmd_interpret = app.add_subcommand("interpret", "Run the concrete execution oracle");
    cmd_interpret->fallthrough();
    std::string interpret_file;
    std::vector<std::string> interpret_params;
    bool interpret_trace = false;
    bool interpret_counts = false;
    cmd_interpret->add_option("file", interpret_file, "program file")->required();
    cmd_interpret->add_option("--params", interpret_params, "parameter bindings name=value");
    cmd_interpret->add_flag("--trace", interpret_trace, "print one event per line");
    cmd_interpret->add_flag("--counts", interpret_counts, "print per-operation counts");

    // check
    auto* cmd_check = app.add_subcommand("check", "Residency analysis of explicit L1 slots");
    cmd_check->fallthrough();
    std::string check_file;
    std::vector<std::string> check_params;
    long long check_l1_kib = 32, check_line_bytes = 64;
    int check_ways = 8;
    std::string check_format, check_config;
    cmd_check->add_option("file", check_file, "program file (dialect v2)")->required();
    cmd_check->add_option("--params", check_params, "parameter bindings name=value");
    auto* opt_l1 = cmd_check->add_option("--l1-kib", check_l1_kib, "cache capacity in KiB");
    auto* opt_ways = cmd_check->add_option("--ways", check_ways, "associativity");
    auto* opt_line = cmd_check->add_option("--line-bytes", check_line_bytes, "line size in bytes");
    cmd_check->add_option("--config", check_config,
                          "geometry config file (l1_kib/ways/line_bytes keys)");
    cmd_check->add_option("--format", check_format, "csv for machine output");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "Predict over the parameter grid");
    cmd_sweep->fallthrough();
    std::vector<std::string> sweep_files;
    std::string sweep_grid, sweep_format = "csv";
    cmd_sweep->add_option("files", sweep_files, "program files")->required();
    cmd_sweep->add_option("--grid", sweep_grid, "grid file (key = comma list per line)");
    cmd_sweep->add_option("--format", sweep_format, "csv or jsonl");

    // evaluate
    auto* cmd_evaluate = app.add_subcommand("evaluate", "Prediction accuracy (MdAPE)");
    cmd_evaluate->fallthrough();
    std::vector<std::string> evaluate_files;
    std::string evaluate_grid, evaluate_measurements, evaluate_format = "csv";
    std::string evaluate_dump;
    bool evaluate_synthetic = false;
    unsigned long long evaluate_seed = 42;
    int evaluate_samples = 5;
    double evaluate_noise = 0.1;
    cmd_evaluate->add_option("files", evaluate_files, "program files")->required();
    cmd_evaluate->add_option("--grid", evaluate_grid, "grid file");
    cmd_evaluate->add_option("--measurements", evaluate_measurements,
                             "measurement CSV (program_id,struct_size,n,rows,cycles)");
    cmd_evaluate->add_flag("--synthetic", evaluate_synthetic,
                           "generate oracle measurements with multiplicative noise");
    cmd_evaluate->add_option("--seed", evaluate_seed, "noise seed");
    cmd_evaluate->add_option("--samples", evaluate_samples, "observations per point");
    cmd_evaluate->add_option("--noise", evaluate_noise, "noise amplitude, e.g. 0.1");
    cmd_evaluate->add_option("--dump-measurements", evaluate_dump,
                             "also write the measurement CSV here");
    cmd_evaluate->add_option("--format", evaluate_format, "csv or jsonl");

    // compare
    auto* cmd_compare = app.add_subcommand("compare", "Per-point speed-up of two programs");
    cmd_compare->fallthrough();
    std::vector<std::string> compare_files;
    std::string compare_grid, compare_format;
    cmd_compare->add_option("files", compare_files, "two program files")
        ->expected(2)
        ->required();
    cmd_compare->add_option("--grid", compare_grid, "grid file");
    cmd_compare->add_option("--format", compare_format, "csv for machine output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        CostTable costs = load_costs(costs_file);

        if (*cmd_parse) {
            Program p = opts.load(parse_file);
            if (parse_pretty) {
                std::cout << pretty_print(p);
            } else {
                std::cout << "program dialect=" << to_string(p.dialect) << "\n";
                for (const Stmt& s : p.stmts) dump_stmt(std::cout, s, 1);
            }
            return kExitOk;
        }

        if (*cmd_typecheck) {
            Program p = opts.load(typecheck_file);
            auto diags = typecheck(p, typecheck_ways > 0 ? std::optional<int>(typecheck_ways)
                                                         : std::nullopt);
            if (diags.empty()) {
                std::cout << "ok\n";
                return kExitOk;
            }
            for (const Diagnostic& d : diags)
                std::cerr << typecheck_file << ":" << d.str() << "\n";
            return kExitDomainError;
        }

        if (*cmd_predict) {
            Program p = opts.load(predict_file);
            require_typechecked(predict_file, p);
            sym::Formula cost = predict(p, costs, predict_symbolic);
            if (!predict_params.empty()) cost = cost.substitute(parse_params(predict_params));
            if (cost.is_constant() && !cost.is_zero())
                std::cout << cost.eval({}).str() << "\n";
            else if (predict_factored)
                std::cout << cost.str_factored() << "\n";
            else
                std::cout << cost.str() << "\n";
            return kExitOk;
        }

        if (*cmd_interpret) {
            Program p = opts.load(interpret_file);
            require_typechecked(interpret_file, p);
            RunResult result = run(p, parse_params(interpret_params), costs, interpret_trace);
            if (interpret_trace)
                for (const std::string& line : result.trace) std::cout << line << "\n";
            std::cout << result.cycles << "\n";
            if (interpret_counts)
                for (const auto& [kind, count] : result.op_counts)
                    std::cout << to_string(kind) << " " << count << "\n";
            return kExitOk;
        }

        if (*cmd_check) {
            Program p = opts.load(check_file);
            require_typechecked(check_file, p);
            if (!check_config.empty()) {
                long long file_kib = check_l1_kib, file_line = check_line_bytes;
                int file_ways = check_ways;
                load_geometry_config(check_config, file_kib, file_ways, file_line);
                // explicit flags win over config file values
                if (opt_l1->count() == 0) check_l1_kib = file_kib;
                if (opt_ways->count() == 0) check_ways = file_ways;
                if (opt_line->count() == 0) check_line_bytes = file_line;
            }
            CacheGeometry geometry{check_l1_kib * 1024, check_line_bytes, check_ways};
            ResidencyReport report = check(p, parse_params(check_params), geometry, costs);
            auto factors = reuse_summary(report);
            if (check_format == "csv") {
                std::cout << "array,total_inserts,distinct_blocks,redundant,evictions,"
                             "resident_at_end,reinsert_factor\n";
                for (const auto& [array, total] : report.total_inserts) {
                    long long redundant = 0;
                    for (const auto& r : report.redundant_inserts)
                        if (r.array == array) ++redundant;
                    std::cout << array << "," << total << "," << report.distinct_blocks.at(array)
                              << "," << redundant << ","
                              << (report.evictions.count(array) ? report.evictions.at(array) : 0)
                              << ","
                              << (report.resident_at_end.count(array)
                                      ? report.resident_at_end.at(array)
                                      : 0)
                              << "," << factors.at(array).decimal_str() << "\n";
                }
            } else {
                std::cout << "redundant inserts: " << report.redundant_inserts.size() << "\n";
                for (const auto& [array, total] : report.total_inserts) {
                    std::cout << array << ": inserts=" << total
                              << " distinct=" << report.distinct_blocks.at(array) << " evictions="
                              << (report.evictions.count(array) ? report.evictions.at(array) : 0)
                              << " reinsert_factor=" << factors.at(array).str() << "\n";
                }
                for (const auto& r : report.redundant_inserts) {
                    std::cout << "  redundant: " << r.array << " block " << r.block << " at "
                              << r.pos.line << ":" << r.pos.col << " [";
                    for (size_t i = 0; i < r.iteration.size(); ++i)
                        std::cout << (i ? " " : "") << r.iteration[i].first << "="
                                  << r.iteration[i].second;
                    std::cout << "]\n";
                }
            }
            return kExitOk;
        }

        if (*cmd_sweep) {
            auto programs = load_programs(opts, sweep_files);
            ParameterGrid grid = sweep_grid.empty() ? ParameterGrid::defaults()
                                                    : ParameterGrid::from_file(sweep_grid);
            auto rows = sweep(programs, grid, costs);
            emit_predictions(rows, parse_format(sweep_format), std::cout);
            return kExitOk;
        }

        if (*cmd_evaluate) {
            auto programs = load_programs(opts, evaluate_files);
            ParameterGrid grid = evaluate_grid.empty() ? ParameterGrid::defaults()
                                                       : ParameterGrid::from_file(evaluate_grid);
            if (evaluate_synthetic && !evaluate_measurements.empty())
                throw CliError("evaluate needs exactly one of --measurements and --synthetic");
            if (!evaluate_synthetic && evaluate_measurements.empty())
                throw CliError("evaluate needs --measurements FILE or --synthetic");
            std::vector<Measurement> measurements;
            if (evaluate_synthetic) {
                measurements = synthetic_measurements(programs, grid, costs, evaluate_seed,
                                                      evaluate_samples, evaluate_noise);
            } else {
                std::ifstream in(evaluate_measurements);
                if (!in) throw CliError("cannot open file: " + evaluate_measurements);
                measurements = read_measurements_csv(in);
            }
            if (!evaluate_dump.empty()) {
                std::ofstream out(evaluate_dump);
                if (!out) throw CliError("cannot write file: " + evaluate_dump);
                write_measurements_csv(measurements, out);
            }
            auto predictions = sweep(programs, grid, costs);
            EvaluateResult result = evaluate(measurements, predictions);
            emit_report(result.records, parse_format(evaluate_format), std::cout);
            for (const AccuracySummary& s : result.summaries)
                std::cerr << s.program_id << ": points=" << s.points
                          << " mdape min=" << s.min.decimal_str()
                          << " median=" << s.median.decimal_str()
                          << " max=" << s.max.decimal_str() << "\n";
            return kExitOk;
        }

        if (*cmd_compare) {
            auto programs = load_programs(opts, compare_files);
            ParameterGrid grid = compare_grid.empty() ? ParameterGrid::defaults()
                                                      : ParameterGrid::from_file(compare_grid);
            auto rows = compare(programs[0].first, programs[0].second, programs[1].first,
                                programs[1].second, grid, costs);
            if (compare_format == "csv") {
                std::cout << "struct_size,rows,n," << programs[0].first << ","
                          << programs[1].first << ",speedup,winner\n";
                for (const CompareRow& row : rows)
                    std::cout << (row.point.struct_size ? std::to_string(*row.point.struct_size)
                                                        : "")
                              << "," << (row.point.rows ? std::to_string(*row.point.rows) : "")
                              << "," << row.point.n << "," << row.prediction_a << ","
                              << row.prediction_b << "," << ratio_str(row.speedup) << ","
                              << row.winner << "\n";
            } else {
                for (const CompareRow& row : rows)
                    std::cout << row.point.str() << ": " << programs[0].first << "="
                              << row.prediction_a << " " << programs[1].first << "="
                              << row.prediction_b << " speedup=" << ratio_str(row.speedup)
                              << " winner=" << row.winner << "\n";
            }
            return kExitOk;
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitUsage;
}
