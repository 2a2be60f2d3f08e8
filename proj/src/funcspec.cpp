#include "symfun/funcspec.hpp"

#include <map>
#include <stdexcept>

namespace symfun {

FunctionSpec FunctionSpec::threshold(int theta) {
    if (theta < 0) throw std::invalid_argument("threshold: theta must be nonnegative");
    FunctionSpec s;
    s.kind = FunctionKind::SumThreshold;
    s.theta = theta;
    return s;
}

FunctionSpec FunctionSpec::interval(int a, int b) {
    if (a < 0 || b < a) throw std::invalid_argument("interval: need 0 <= a <= b");
    FunctionSpec s;
    s.kind = FunctionKind::SumInterval;
    s.a = a;
    s.b = b;
    return s;
}

FunctionSpec FunctionSpec::general(std::vector<int> table) {
    if (table.empty()) throw std::invalid_argument("general: table must be nonempty");
    FunctionSpec s;
    s.kind = FunctionKind::GeneralSum;
    s.table = std::move(table);
    return s;
}

int FunctionSpec::eval(int total) const {
    if (total < 0) throw std::domain_error("eval: negative total");
    switch (kind) {
        case FunctionKind::SumThreshold:
            return total >= theta ? 1 : 0;
        case FunctionKind::SumInterval:
            return (total >= a && total <= b) ? 1 : 0;
        case FunctionKind::GeneralSum:
            if (static_cast<std::size_t>(total) >= table.size())
                throw std::domain_error("eval: total outside the general table domain");
            return table[static_cast<std::size_t>(total)];
    }
    throw std::logic_error("eval: bad kind");
}

bool FunctionSpec::binary_output() const {
    if (kind != FunctionKind::GeneralSum) return true;
    for (int v : table)
        if (v != 0 && v != 1) return false;
    return true;
}

std::optional<int> FunctionSpec::constant_value(int max_total) const {
    const int first = eval(0);
    for (int t = 1; t <= max_total; ++t)
        if (eval(t) != first) return std::nullopt;
    return first;
}

void FunctionSpec::validate_domain(int max_total) const {
    if (kind == FunctionKind::GeneralSum &&
        table.size() < static_cast<std::size_t>(max_total) + 1)
        throw std::domain_error("general table does not cover every achievable total");
}

std::string FunctionSpec::describe() const {
    switch (kind) {
        case FunctionKind::SumThreshold: return "threshold(" + std::to_string(theta) + ")";
        case FunctionKind::SumInterval:
            return "interval(" + std::to_string(a) + "," + std::to_string(b) + ")";
        case FunctionKind::GeneralSum: return "general[" + std::to_string(table.size()) + "]";
    }
    return "?";
}

nlohmann::json FunctionSpec::to_json() const {
    switch (kind) {
        case FunctionKind::SumThreshold: return {{"kind", "threshold"}, {"theta", theta}};
        case FunctionKind::SumInterval: return {{"kind", "interval"}, {"a", a}, {"b", b}};
        case FunctionKind::GeneralSum: return {{"kind", "general"}, {"table", table}};
    }
    throw std::logic_error("to_json: bad kind");
}

FunctionSpec FunctionSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("function spec: expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "threshold") return threshold(j.at("theta").get<int>());
    if (kind == "interval") return interval(j.at("a").get<int>(), j.at("b").get<int>());
    if (kind == "general") return general(j.at("table").get<std::vector<int>>());
    throw std::invalid_argument("function spec: unknown kind \"" + kind + "\"");
}

int SeparationPartition::ambiguous_count() const {
    int n = 0;
    for (int c = 0; c < size(); ++c)
        if (ambiguous(c)) ++n;
    return n;
}

SeparationPartition separate(const FunctionSpec& spec, int own_max, int other_max) {
    if (own_max < 0 || other_max < 0)
        throw std::invalid_argument("separate: maxima must be nonnegative");
    spec.validate_domain(own_max + other_max);

    SeparationPartition part;
    part.class_of.assign(static_cast<std::size_t>(own_max) + 1, -1);

    // Rows are compared by value; letters with equal rows merge even when
    // they are not contiguous (interval tails, periodic tables).
    std::map<std::vector<int>, int> row_to_class;
    for (int x = 0; x <= own_max; ++x) {
        std::vector<int> row(static_cast<std::size_t>(other_max) + 1);
        for (int y = 0; y <= other_max; ++y) row[static_cast<std::size_t>(y)] = spec.eval(x + y);

        auto [it, inserted] = row_to_class.try_emplace(std::move(row), part.size());
        if (inserted) {
            part.classes.emplace_back();
            const auto& r = it->first;
            bool constant = true;
            for (int v : r)
                if (v != r.front()) { constant = false; break; }
            part.class_constant.push_back(constant ? std::optional<int>(r.front()) : std::nullopt);
            if (constant && r.front() == 0) part.a0_class = it->second;
            if (constant && r.front() == 1) part.a1_class = it->second;
        }
        part.classes[static_cast<std::size_t>(it->second)].push_back(x);
        part.class_of[static_cast<std::size_t>(x)] = it->second;
    }
    return part;
}

}  // namespace symfun
