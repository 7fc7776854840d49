#include "ptm/interpreter.hpp"

#include <sstream>

#include "ptm/pretty_print.hpp"

namespace ptm {

std::string to_string(OpKind kind) {
    switch (kind) {
        case OpKind::Insert: return "insert";
        case OpKind::Load: return "load";
        case OpKind::Store: return "store";
        case OpKind::Gather: return "gather_partial";
        case OpKind::LoopRep: return "loop_rep";
    }
    return "?";
}

namespace {

constexpr long long kMaxEvents = 1LL << 32;

struct Frame {
    std::string name;
    long long value;
    std::optional<long long> shadowed;
};

class Executor {
public:
    Executor(const sym::Bindings& bindings, const CostTable& table, bool trace,
             const std::optional<CacheGeometry>& geometry, bool collect_events)
        : table_(table), trace_(trace), geometry_(geometry), collect_events_(collect_events) {
        table.validate();
        cost_[OpKind::Insert] = require_numeric(table.t_insert, "T_insert");
        cost_[OpKind::Load] = require_numeric(table.t_load, "T_load");
        cost_[OpKind::Store] = require_numeric(table.t_store, "T_store");
        cost_[OpKind::Gather] = require_numeric(table.t_gp, "T_gp");
        cost_[OpKind::LoopRep] = require_numeric(table.t_rep, "T_rep");
        for (const auto& [name, value] : bindings) {
            if (!value.is_integer())
                throw InterpreterError("binding for '" + name + "' must be an integer, got " +
                                       value.str());
            env_[name] = value.as_integer();
        }
        auto it = env_.find(cost_symbol::line);
        if (it != env_.end() && it->second != table.line_elems)
            throw InterpreterError("binding L=" + std::to_string(it->second) +
                                   " conflicts with cost table L=" + std::to_string(table.line_elems));
        env_[cost_symbol::line] = table.line_elems;
    }

    void execute(const Program& program) {
        for (const Stmt& s : program.stmts) exec_stmt(s);
    }

    RunResult take_result() {
        RunResult result;
        result.op_counts = counts_;
        result.cycles = cycles_;
        result.trace = std::move(trace_lines_);
        return result;
    }

    std::vector<InsertEvent> take_events() { return std::move(events_); }

private:
    const CostTable& table_;
    bool trace_;
    std::optional<CacheGeometry> geometry_;
    bool collect_events_;
    std::map<OpKind, long long> cost_;
    std::map<std::string, long long> env_;
    std::vector<Frame> loop_stack_;
    std::map<OpKind, long long> counts_;
    long long cycles_ = 0;
    long long events_executed_ = 0;
    long long iteration_scale_ = 1;  // product of enclosing iteration counts
    std::vector<std::string> trace_lines_;
    std::vector<InsertEvent> events_;

    static long long require_numeric(const std::optional<long long>& v, const char* name) {
        if (!v)
            throw InterpreterError(std::string("cost table entry ") + name +
                                   " must be numeric for interpretation");
        return *v;
    }

    long long lookup(const Var& var) const {
        auto it = env_.find(var.name);
        if (it == env_.end())
            throw InterpreterError("unbound symbol '" + var.name + "' at " +
                                   std::to_string(var.pos.line) + ":" + std::to_string(var.pos.col));
        return it->second;
    }

    long long eval(const ExprPtr& expr) const {
        if (const auto* var = std::get_if<VarRef>(&expr->node)) {
            auto it = env_.find(var->name);
            if (it == env_.end())
                throw InterpreterError("unbound symbol '" + var->name + "' in index expression");
            return it->second;
        }
        if (const auto* add = std::get_if<Add>(&expr->node)) return eval(add->lhs) + eval(add->rhs);
        const auto& mul = std::get<Mul>(expr->node);
        return eval(mul.lhs) * eval(mul.rhs);
    }

    void push_counter(const std::string& name, long long value) {
        Frame frame{name, value, std::nullopt};
        auto it = env_.find(name);
        if (it != env_.end()) frame.shadowed = it->second;
        env_[name] = value;
        loop_stack_.push_back(std::move(frame));
    }

    void set_counter(long long value) {
        loop_stack_.back().value = value;
        env_[loop_stack_.back().name] = value;
    }

    void pop_counter() {
        const Frame& frame = loop_stack_.back();
        if (frame.shadowed)
            env_[frame.name] = *frame.shadowed;
        else
            env_.erase(frame.name);
        loop_stack_.pop_back();
    }

    void guard_loop(long long iterations, SourcePos pos) {
        if (iterations <= 0 || iteration_scale_ > kMaxEvents / iterations)
            throw InterpreterError("loop at " + std::to_string(pos.line) + ":" +
                                   std::to_string(pos.col) + " exceeds the 2^32 event budget");
    }

    void charge(OpKind kind, const Stmt& stmt) {
        if (++events_executed_ > kMaxEvents)
            throw InterpreterError("execution exceeds the 2^32 event budget");
        if (trace_) {
            std::ostringstream line;
            line << cycles_ << " " << to_string(kind) << " " << render_operand(stmt);
            for (const Frame& f : loop_stack_) line << " " << f.name << "=" << f.value;
            trace_lines_.push_back(line.str());
        }
        counts_[kind] += 1;
        cycles_ += cost_[kind];
    }

    void record_insert(SourcePos pos, const IndexRef& arg, std::optional<long long> set,
                       std::optional<int> way) {
        if (!collect_events_) return;
        InsertEvent event;
        event.pos = pos;
        for (const Frame& f : loop_stack_) event.iteration.emplace_back(f.name, f.value);
        event.array = arg.array.name;
        event.block = eval(arg.index) / table_.line_elems;
        event.set = set;
        event.way = way;
        events_.push_back(std::move(event));
    }

    void exec_block(const Block& block) {
        for (const Stmt& s : block.stmts) exec_stmt(s);
    }

    void exec_stmt(const Stmt& stmt) {
        std::visit([&](const auto& node) { exec_node(node, stmt); }, stmt.node);
    }

    void exec_node(const Repeat& r, const Stmt& stmt) {
        long long bound = lookup(r.bound);
        long long step = r.step ? lookup(*r.step) : 1;
        if (bound <= 0)
            throw InterpreterError("loop bound '" + r.bound.name + "' must be positive, is " +
                                   std::to_string(bound));
        if (step <= 0 || bound % step != 0)
            throw InterpreterError("step '" + (r.step ? r.step->name : "1") + "' = " +
                                   std::to_string(step) + " does not divide bound '" +
                                   r.bound.name + "' = " + std::to_string(bound));
        long long iterations = bound / step;
        guard_loop(iterations, stmt.pos);
        iteration_scale_ *= iterations;
        push_counter(r.counter, 0);
        for (long long value = 0; value < bound; value += step) {
            set_counter(value);
            charge(OpKind::LoopRep, stmt);
            exec_block(r.body);
        }
        pop_counter();
        iteration_scale_ /= iterations;
    }

    void exec_node(const ForeachBlock& f, const Stmt& stmt) {
        long long total = lookup(f.bound);
        long long line = table_.line_elems;
        if (total <= 0)
            throw InterpreterError("foreach_block bound '" + f.bound.name +
                                   "' must be positive, is " + std::to_string(total));
        if (total % line != 0)
            throw InterpreterError("cache line length " + std::to_string(line) +
                                   " does not divide foreach_block bound '" + f.bound.name +
                                   "' = " + std::to_string(total));
        long long iterations = total / line;
        guard_loop(iterations, stmt.pos);
        iteration_scale_ *= iterations;
        push_counter(f.index, 0);
        push_counter(f.offset, 0);
        for (long long offset = 0; offset < total; offset += line) {
            long long block = offset / line;
            long long index = geometry_ ? block % geometry_->num_sets() : block;
            env_[f.index] = index;
            loop_stack_[loop_stack_.size() - 2].value = index;
            set_counter(offset);
            charge(OpKind::LoopRep, stmt);
            exec_block(f.body);
        }
        pop_counter();
        pop_counter();
        iteration_scale_ /= iterations;
    }

    void exec_node(const InsertV1& ins, const Stmt& stmt) {
        charge(OpKind::Insert, stmt);
        record_insert(stmt.pos, ins.arg, std::nullopt, std::nullopt);
    }

    void exec_node(const InsertV2& ins, const Stmt& stmt) {
        charge(OpKind::Insert, stmt);
        record_insert(stmt.pos, ins.arg, lookup(ins.target.set), ins.target.way);
    }

    void exec_node(const LoadLine&, const Stmt& stmt) { charge(OpKind::Load, stmt); }
    void exec_node(const LoadElem&, const Stmt& stmt) { charge(OpKind::Load, stmt); }
    void exec_node(const Store&, const Stmt& stmt) { charge(OpKind::Store, stmt); }
    void exec_node(const GatherPartial&, const Stmt& stmt) {
        charge(OpKind::Gather, stmt);
    }
};

}  // namespace

RunResult run(const Program& program, const sym::Bindings& bindings, const CostTable& table,
              bool trace, const std::optional<CacheGeometry>& geometry) {
    Executor executor(bindings, table, trace, geometry, false);
    executor.execute(program);
    return executor.take_result();
}

std::vector<InsertEvent> insert_events(const Program& program, const sym::Bindings& bindings,
                                       const CostTable& table,
                                       const std::optional<CacheGeometry>& geometry) {
    Executor executor(bindings, table, false, geometry, true);
    executor.execute(program);
    return executor.take_events();
}

}  // namespace ptm
