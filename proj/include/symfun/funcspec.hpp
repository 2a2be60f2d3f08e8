#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace symfun {

enum class FunctionKind { SumThreshold, SumInterval, GeneralSum };

// A function of several integer measurements that depends only on their sum.
//
//  SumThreshold: 1 iff total >= theta
//  SumInterval:  1 iff a <= total <= b
//  GeneralSum:   table[total]
struct FunctionSpec {
    FunctionKind kind = FunctionKind::SumThreshold;
    int theta = 0;
    int a = 0;
    int b = 0;
    std::vector<int> table;

    static FunctionSpec threshold(int theta);
    static FunctionSpec interval(int a, int b);
    static FunctionSpec general(std::vector<int> table);

    int eval(int total) const;

    // True when every reachable output is 0 or 1. Protocol runners require
    // this; evaluation and separation do not.
    bool binary_output() const;

    // Output value if the function is constant over totals 0..max_total.
    std::optional<int> constant_value(int max_total) const;

    // GeneralSum tables must cover every achievable total.
    void validate_domain(int max_total) const;

    std::string describe() const;

    nlohmann::json to_json() const;
    static FunctionSpec from_json(const nlohmann::json& j);
};

// Equivalence classes of one node's letters: two letters share a class iff
// they induce identical function rows against every letter of the other
// side. Classes are ordered by smallest member; the representative of a
// class is its smallest letter.
struct SeparationPartition {
    std::vector<std::vector<int>> classes;             // each ascending
    std::vector<int> class_of;                         // letter -> class index
    std::vector<std::optional<int>> class_constant;    // row value if constant
    std::optional<int> a0_class;                       // constant-0 class
    std::optional<int> a1_class;                       // constant-1 class

    int size() const { return static_cast<int>(classes.size()); }
    int representative(int cls) const { return classes[static_cast<std::size_t>(cls)].front(); }

    // A class is ambiguous when its row is not constant: the other side must
    // still contribute one reply bit per instance carrying such a letter.
    bool ambiguous(int cls) const { return !class_constant[static_cast<std::size_t>(cls)].has_value(); }
    int ambiguous_count() const;
};

// Partitions {0..own_max} against the other side's letters {0..other_max}.
SeparationPartition separate(const FunctionSpec& spec, int own_max, int other_max);

}  // namespace symfun
