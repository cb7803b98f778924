#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphnn/reasoner.hpp"

namespace sphnn {

// Small set of base relations packed as a bitmask; order follows BaseRel.
struct RelSet {
    std::uint8_t bits = 0;

    static RelSet of(std::initializer_list<BaseRel> rels) {
        RelSet s;
        for (auto r : rels) s.add(r);
        return s;
    }
    void add(BaseRel r) { bits |= static_cast<std::uint8_t>(1u << static_cast<int>(r)); }
    bool contains(BaseRel r) const {
        return bits & static_cast<std::uint8_t>(1u << static_cast<int>(r));
    }
    bool subset_of(const RelSet& other) const { return (bits & ~other.bits) == 0; }
    bool empty() const { return bits == 0; }
    std::vector<BaseRel> members() const;
};

// Exhaustively computed relation composition over grid-parameterized spheres:
// entry (r1, r2) holds every relation a third pair can realize when the first
// two pairs realize r1 and r2.
struct CompositionTable {
    std::array<std::array<RelSet, 5>, 5> entries{};

    const RelSet& at(BaseRel r1, BaseRel r2) const {
        return entries[static_cast<int>(r1)][static_cast<int>(r2)];
    }
    std::string to_json() const;
};

struct GridSpec {
    int coord_bound = 6;   // centers range over [-bound, bound] per axis
    int radius_bound = 6;  // radii range over [1, bound]
    int dimension = 2;
};

// Named classic form as printed in the valid-form table.
struct ClassicForm {
    std::string name;
    Task task;
};

const std::vector<ClassicForm>& valid_classic_forms();

// Membership in the valid-form table up to the symmetric-mood term swap
// (no/some statements may be flipped).
bool is_valid_classic(const Task& task);

CompositionTable build_composition_table(const GridSpec& grid);

// Shared table at the default grid, built once.
const CompositionTable& composition_table();

// Chain validity by composing premise witness sets and checking the composed
// set against the conclusion's witness set.
bool chain_valid(const Task& task, const CompositionTable& table);

RelSet mood_witness_set(Mood mood);

// Desk-scale satisfiability witness search over integer circles. Absence of a
// hit is not an unsatisfiability proof. `fixed` entries are kept as given and
// only the remaining terms are searched.
std::optional<Configuration> brute_force_model(const std::vector<Constraint>& constraints,
                                               const GridSpec& grid,
                                               const Configuration& fixed = {});

}  // namespace sphnn
