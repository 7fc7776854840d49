#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ptm/cache_check.hpp"
#include "ptm/corpus.hpp"
#include "ptm/cost_model.hpp"
#include "ptm/eval_harness.hpp"
#include "ptm/interpreter.hpp"
#include "ptm/parser.hpp"
#include "ptm/pretty_print.hpp"
#include "ptm/typecheck.hpp"

namespace py = pybind11;
using namespace ptm;

namespace {

Dialect dialect_from(const std::string& name) {
    if (name == "v1") return Dialect::V1;
    if (name == "v2") return Dialect::V2;
    throw std::invalid_argument("dialect must be 'v1' or 'v2'");
}

sym::Bindings bindings_from(const py::dict& values) {
    sym::Bindings b;
    for (const auto& item : values)
        b[py::cast<std::string>(item.first)] = Rational(py::cast<long long>(item.second));
    return b;
}

CostTable costs_from(const py::dict& values) {
    CostTable table;
    if (values.empty()) return table;
    std::ostringstream text;
    for (const auto& item : values)
        text << py::cast<std::string>(item.first) << " = " << py::cast<long long>(item.second)
             << "\n";
    return CostTable::from_string(text.str());
}

std::vector<std::pair<std::string, Program>> corpus_programs(const std::vector<std::string>& ids) {
    std::vector<std::pair<std::string, Program>> programs;
    for (const std::string& id : ids.empty() ? corpus::ids() : ids)
        programs.emplace_back(id, corpus::program(id));
    return programs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cache DSL toolkit: parsing, symbolic cycle prediction, and oracles";

    py::class_<Program>(m, "Program")
        .def_property_readonly("dialect",
                               [](const Program& p) { return to_string(p.dialect); })
        .def("__str__", [](const Program& p) { return pretty_print(p); })
        .def("__eq__", [](const Program& a, const Program& b) { return a == b; });

    py::class_<sym::Formula>(m, "Formula")
        .def("__str__", [](const sym::Formula& f) { return f.str(); })
        .def("__eq__", [](const sym::Formula& a, const sym::Formula& b) { return a == b; })
        .def("factored", [](const sym::Formula& f) { return f.str_factored(); })
        .def(
            "substitute",
            [](const sym::Formula& f, const py::dict& b) { return f.substitute(bindings_from(b)); },
            py::arg("bindings"))
        .def(
            "eval",
            [](const sym::Formula& f, const py::dict& b) {
                Rational value = f.eval(bindings_from(b));
                if (value.is_integer()) return py::cast(value.as_integer());
                return py::cast(value.as_double());
            },
            py::arg("bindings"))
        .def(
            "coefficient_of",
            [](const sym::Formula& f, const std::string& s) { return f.coefficient_of(s); },
            py::arg("symbol"));

    m.def(
        "parse",
        [](const std::string& source, const std::string& dialect) {
            if (dialect.empty()) return parse_auto(source);
            return parse(source, dialect_from(dialect));
        },
        py::arg("source"), py::arg("dialect") = "");

    m.def(
        "typecheck",
        [](const Program& p) {
            std::vector<std::string> out;
            for (const Diagnostic& d : typecheck(p)) out.push_back(d.str());
            return out;
        },
        py::arg("program"), "Returns the list of diagnostics; empty means well typed.");

    m.def(
        "pretty_print", [](const Program& p) { return pretty_print(p); }, py::arg("program"));

    m.def(
        "predict",
        [](const Program& p, const py::dict& costs, bool keep_symbolic) {
            return predict(p, costs_from(costs), keep_symbolic);
        },
        py::arg("program"), py::arg("costs") = py::dict(), py::arg("keep_symbolic") = true);

    m.def(
        "footprint",
        [](const Program& p) {
            FootprintReport report = footprint_report(p);
            py::dict out;
            out["inserts"] = report.inserts.str();
            out["loads"] = report.loads.str();
            out["stores"] = report.stores.str();
            out["gathers"] = report.gathers.str();
            out["loop_reps"] = report.loop_reps.str();
            return out;
        },
        py::arg("program"));

    m.def(
        "run",
        [](const Program& p, const py::dict& params, const py::dict& costs, bool trace) {
            RunResult result = run(p, bindings_from(params), costs_from(costs), trace);
            py::dict counts;
            for (const auto& [kind, count] : result.op_counts)
                counts[py::str(to_string(kind))] = count;
            py::dict out;
            out["cycles"] = result.cycles;
            out["op_counts"] = counts;
            if (trace) out["trace"] = result.trace;
            return out;
        },
        py::arg("program"), py::arg("params"), py::arg("costs") = py::dict(),
        py::arg("trace") = false);

    m.def(
        "check",
        [](const Program& p, const py::dict& params, long long l1_kib, int ways,
           long long line_bytes, const py::dict& costs) {
            CacheGeometry geometry{l1_kib * 1024, line_bytes, ways};
            ResidencyReport report =
                check(p, bindings_from(params), geometry, costs_from(costs));
            py::dict out;
            out["redundant_inserts"] = report.redundant_inserts.size();
            out["total_inserts"] = report.total_inserts;
            out["distinct_blocks"] = report.distinct_blocks;
            out["evictions"] = report.evictions;
            py::dict factors;
            for (const auto& [array, factor] : reuse_summary(report))
                factors[py::str(array)] = factor.as_double();
            out["reinsert_factor"] = factors;
            return out;
        },
        py::arg("program"), py::arg("params"), py::arg("l1_kib") = 32, py::arg("ways") = 8,
        py::arg("line_bytes") = 64, py::arg("costs") = py::dict());

    m.def(
        "mdape",
        [](const std::vector<long long>& observations, long long prediction) {
            return mdape(observations, prediction).as_double();
        },
        py::arg("observations"), py::arg("prediction"));

    m.def(
        "sweep",
        [](const std::vector<std::string>& ids, const py::dict& costs) {
            auto rows = sweep(corpus_programs(ids), ParameterGrid::defaults(), costs_from(costs));
            py::list out;
            for (const PredictionRow& row : rows) {
                py::dict r;
                r["program_id"] = row.program_id;
                if (row.point.struct_size) r["struct_size"] = *row.point.struct_size;
                if (row.point.rows) r["rows"] = *row.point.rows;
                r["n"] = row.point.n;
                r["prediction"] = row.prediction;
                r["formula"] = row.formula;
                out.append(std::move(r));
            }
            return out;
        },
        py::arg("ids") = std::vector<std::string>{}, py::arg("costs") = py::dict(),
        "Prediction table over the default parameter grid for corpus programs.");

    m.def("corpus_ids", [] { return corpus::ids(); });
    m.def(
        "corpus_source", [](const std::string& id) { return corpus::source(id); }, py::arg("id"));
    m.def(
        "corpus_program", [](const std::string& id) { return corpus::program(id); }, py::arg("id"));

    m.def("default_costs", [] {
        CostTable t;
        py::dict out;
        out["T_insert"] = *t.t_insert;
        out["T_load"] = *t.t_load;
        out["T_store"] = *t.t_store;
        out["T_rep"] = *t.t_rep;
        out["T_gp"] = *t.t_gp;
        out["L"] = t.line_elems;
        return out;
    });

    py::register_exception<DslError>(m, "DslError");
    py::register_exception<InterpreterError>(m, "InterpreterError");
    py::register_exception<HarnessError>(m, "HarnessError");
    py::register_exception<sym::SymbolicError>(m, "SymbolicError");
}
