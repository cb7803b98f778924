#include "sphnn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sphnn {

std::vector<BaseRel> RelSet::members() const {
    std::vector<BaseRel> out;
    for (int i = 0; i < 5; ++i)
        if (bits & (1u << i)) out.push_back(static_cast<BaseRel>(i));
    return out;
}

std::string CompositionTable::to_json() const {
    std::ostringstream os;
    os << "{";
    bool first_row = true;
    for (int i = 0; i < 5; ++i) {
        if (!first_row) os << ",";
        first_row = false;
        os << "\"" << to_string(static_cast<BaseRel>(i)) << "\":{";
        bool first_col = true;
        for (int j = 0; j < 5; ++j) {
            if (!first_col) os << ",";
            first_col = false;
            os << "\"" << to_string(static_cast<BaseRel>(j)) << "\":[";
            bool first = true;
            for (BaseRel r : entries[i][j].members()) {
                if (!first) os << ",";
                first = false;
                os << "\"" << to_string(r) << "\"";
            }
            os << "]";
        }
        os << "}";
    }
    os << "}";
    return os.str();
}

namespace {

Task classic(Mood m1, const std::string& a1, const std::string& b1, Mood m2,
             const std::string& a2, const std::string& b2, Mood mc) {
    Task t;
    t.premises = {make_statement(m1, a1, b1), make_statement(m2, a2, b2)};
    t.conclusion = make_statement(mc, "s", "p");
    return t;
}

}  // namespace

const std::vector<ClassicForm>& valid_classic_forms() {
    static const std::vector<ClassicForm> forms = {
        {"BARBARA", classic(Mood::All, "s", "m", Mood::All, "m", "p", Mood::All)},
        {"BARBARI", classic(Mood::All, "s", "m", Mood::All, "m", "p", Mood::Some)},
        {"CELARENT", classic(Mood::No, "m", "p", Mood::All, "s", "m", Mood::No)},
        {"CESARE", classic(Mood::No, "p", "m", Mood::All, "s", "m", Mood::No)},
        {"CALEMES", classic(Mood::All, "p", "m", Mood::No, "m", "s", Mood::No)},
        {"CAMESTRES", classic(Mood::All, "p", "m", Mood::No, "s", "m", Mood::No)},
        {"DARII", classic(Mood::All, "m", "p", Mood::Some, "s", "m", Mood::Some)},
        {"DATISI", classic(Mood::All, "m", "p", Mood::Some, "m", "s", Mood::Some)},
        {"DARAPTI", classic(Mood::All, "m", "s", Mood::All, "m", "p", Mood::Some)},
        {"DISAMIS", classic(Mood::Some, "m", "p", Mood::All, "m", "s", Mood::Some)},
        {"DIMATIS", classic(Mood::Some, "p", "m", Mood::All, "m", "s", Mood::Some)},
        {"BAROCO", classic(Mood::All, "p", "m", Mood::SomeNot, "s", "m", Mood::SomeNot)},
        {"CESARO", classic(Mood::No, "p", "m", Mood::All, "s", "m", Mood::SomeNot)},
        {"CAMESTROS", classic(Mood::All, "s", "m", Mood::No, "m", "p", Mood::SomeNot)},
        {"CELARONT", classic(Mood::No, "s", "m", Mood::All, "p", "m", Mood::SomeNot)},
        {"CALEMOS", classic(Mood::All, "p", "m", Mood::No, "m", "s", Mood::SomeNot)},
        {"BOCARDO", classic(Mood::SomeNot, "m", "p", Mood::All, "m", "s", Mood::SomeNot)},
        {"BAMALIP", classic(Mood::All, "m", "s", Mood::All, "p", "m", Mood::Some)},
        {"FERIO", classic(Mood::Some, "s", "m", Mood::No, "m", "p", Mood::SomeNot)},
        {"FESTINO", classic(Mood::Some, "s", "m", Mood::No, "p", "m", Mood::SomeNot)},
        {"FERISON", classic(Mood::Some, "m", "s", Mood::No, "m", "p", Mood::SomeNot)},
        {"FRESISON", classic(Mood::Some, "m", "s", Mood::No, "p", "m", Mood::SomeNot)},
        {"FELAPTON", classic(Mood::All, "m", "s", Mood::No, "m", "p", Mood::SomeNot)},
        {"FESAPO", classic(Mood::All, "m", "s", Mood::No, "p", "m", Mood::SomeNot)},
    };
    return forms;
}

namespace {

// Canonical key of one statement with no/some flipped to a fixed term order.
std::string statement_key(const Statement& s) {
    std::string subj = s.subject, obj = s.object;
    if ((s.mood == Mood::No || s.mood == Mood::Some) && obj < subj) std::swap(subj, obj);
    return std::string(to_string(s.mood)) + "(" + subj + "," + obj + ")";
}

std::string classic_key(const Task& t) {
    if (t.premises.size() != 2) throw std::invalid_argument("not a classic 3-term task");
    std::string k1 = statement_key(t.premises[0]);
    std::string k2 = statement_key(t.premises[1]);
    if (k2 < k1) std::swap(k1, k2);
    return k1 + ";" + k2 + ";" + statement_key(t.conclusion);
}

}  // namespace

bool is_valid_classic(const Task& task) {
    static std::vector<std::string> keys = [] {
        std::vector<std::string> ks;
        for (const auto& f : valid_classic_forms()) ks.push_back(classic_key(f.task));
        std::sort(ks.begin(), ks.end());
        return ks;
    }();
    return std::binary_search(keys.begin(), keys.end(), classic_key(task));
}

namespace {

struct GridCircle {
    int x, y, r;
};

Sphere grid_sphere(const GridCircle& c, int dimension) {
    Sphere s;
    s.center = dimension == 1 ? Vec{double(c.x)} : Vec{double(c.x), double(c.y)};
    s.log_radius = std::log(double(c.r));
    return s;
}

std::vector<GridCircle> grid_circles(const GridSpec& grid) {
    std::vector<GridCircle> out;
    for (int r = 1; r <= grid.radius_bound; ++r)
        for (int x = -grid.coord_bound; x <= grid.coord_bound; ++x) {
            if (grid.dimension == 1) {
                out.push_back({x, 0, r});
            } else {
                for (int y = -grid.coord_bound; y <= grid.coord_bound; ++y)
                    out.push_back({x, y, r});
            }
        }
    return out;
}

// Exact classification over integer circles: all boundary tests compare
// squared integer quantities, so grid tangencies and coincidences land on
// the right side of every convention (the log-radius round-trip cannot).
BaseRel classify_exact(const GridCircle& a, const GridCircle& b) {
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    const std::int64_t d2 = dx * dx + dy * dy;
    const std::int64_t sum = a.r + b.r;
    const std::int64_t diff = a.r - b.r;
    if (d2 == 0 && diff == 0) return BaseRel::EQ;
    if (diff <= 0 && d2 <= diff * diff) return BaseRel::PP;     // dis + ra <= rb
    if (diff >= 0 && d2 <= diff * diff) return BaseRel::PPbar;  // dis + rb <= ra
    if (d2 >= sum * sum) return BaseRel::D;
    return BaseRel::PO;
}

}  // namespace

CompositionTable build_composition_table(const GridSpec& grid) {
    if (grid.coord_bound < 3 || grid.radius_bound < 3)
        throw std::invalid_argument("composition grid bounds must be at least 3");
    const auto circles = grid_circles(grid);
    // The middle circle only needs its radius varied: relations are invariant
    // under translating the whole triple.
    const int n = static_cast<int>(circles.size());
    CompositionTable table;
    std::array<std::array<std::uint8_t, 5>, 5> bits{};

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::array<std::array<std::uint8_t, 5>, 5> local{};
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 1)
#endif
        for (int rb = 1; rb <= grid.radius_bound; ++rb) {
            const GridCircle b{0, 0, rb};
            std::vector<BaseRel> rel_to_b(n);
            for (int i = 0; i < n; ++i) rel_to_b[i] = classify_exact(circles[i], b);
            for (int i = 0; i < n; ++i) {
                const BaseRel r1 = rel_to_b[i];
                for (int j = 0; j < n; ++j) {
                    const BaseRel r2 = transpose(rel_to_b[j]);  // relation b->c
                    const BaseRel r3 = classify_exact(circles[i], circles[j]);
                    local[static_cast<int>(r1)][static_cast<int>(r2)] |=
                        static_cast<std::uint8_t>(1u << static_cast<int>(r3));
                }
            }
        }
#ifdef _OPENMP
#pragma omp critical
#endif
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) bits[i][j] |= local[i][j];
    }
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) table.entries[i][j].bits = bits[i][j];
    return table;
}

const CompositionTable& composition_table() {
    static const CompositionTable table = build_composition_table(GridSpec{});
    return table;
}

RelSet mood_witness_set(Mood mood) {
    switch (mood) {
        case Mood::All: return RelSet::of({BaseRel::PP, BaseRel::EQ});
        case Mood::Some:
            return RelSet::of({BaseRel::PP, BaseRel::PO, BaseRel::EQ, BaseRel::PPbar});
        case Mood::No: return RelSet::of({BaseRel::D});
        case Mood::SomeNot: return RelSet::of({BaseRel::D, BaseRel::PO, BaseRel::PPbar});
    }
    return {};
}

namespace {

RelSet transpose(const RelSet& s) {
    RelSet out;
    for (BaseRel r : s.members()) out.add(sphnn::transpose(r));
    return out;
}

RelSet compose(const RelSet& s1, const RelSet& s2, const CompositionTable& table) {
    RelSet out;
    for (BaseRel a : s1.members())
        for (BaseRel b : s2.members()) out.bits |= table.at(a, b).bits;
    return out;
}

}  // namespace

bool chain_valid(const Task& task, const CompositionTable& table) {
    const std::vector<std::string> order = chain_terms(task);
    std::vector<RelSet> premise_sets;
    premise_sets.reserve(task.premises.size());
    std::vector<bool> used(task.premises.size(), false);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        bool found = false;
        for (std::size_t k = 0; k < task.premises.size(); ++k) {
            if (used[k]) continue;
            const Statement& p = task.premises[k];
            const bool forward = p.subject == order[i] && p.object == order[i + 1];
            const bool backward = p.subject == order[i + 1] && p.object == order[i];
            if (!forward && !backward) continue;
            RelSet w = mood_witness_set(p.mood);
            if (backward) w = transpose(w);
            premise_sets.push_back(w);
            used[k] = true;
            found = true;
            break;
        }
        if (!found) throw std::invalid_argument("chain_valid: premise chain is broken");
    }
    RelSet composed = premise_sets[0];
    for (std::size_t i = 1; i < premise_sets.size(); ++i)
        composed = compose(composed, premise_sets[i], table);
    return composed.subset_of(mood_witness_set(task.conclusion.mood));
}

std::optional<Configuration> brute_force_model(const std::vector<Constraint>& constraints,
                                               const GridSpec& grid,
                                               const Configuration& fixed) {
    std::vector<std::string> terms;
    for (const auto& c : constraints) {
        for (const auto& t : {c.a, c.b})
            if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
    }
    std::vector<std::string> free_terms;
    for (const auto& t : terms)
        if (!fixed.count(t)) free_terms.push_back(t);
    if (free_terms.size() > 4)
        throw std::invalid_argument("brute_force_model: too many unfixed terms");

    // Search free terms most-constrained-first so partial checks prune early.
    std::stable_sort(free_terms.begin(), free_terms.end(),
                     [&](const std::string& a, const std::string& b) {
                         auto degree = [&](const std::string& t) {
                             int d = 0;
                             for (const auto& c : constraints)
                                 if (c.a == t || c.b == t) ++d;
                             return d;
                         };
                         return degree(a) > degree(b);
                     });

    const auto circles = grid_circles(grid);
    const Tolerances tol{};
    Configuration config = fixed;
    // Promote fixed spheres to the grid dimension if needed.
    for (auto& [term, s] : config)
        if (grid.dimension == 2 && s.dim() == 1) s.center.push_back(0.0);

    // A hit must both satisfy the relations and re-inspect to exactly zero;
    // the two only differ on band boundaries, which a witness must avoid.
    auto consistent = [&](const std::string& placed) {
        for (const auto& c : constraints) {
            if (c.a != placed && c.b != placed) continue;
            const auto ia = config.find(c.a);
            const auto ib = config.find(c.b);
            if (ia == config.end() || ib == config.end()) continue;
            if (!holds(c.target, ia->second, ib->second)) return false;
            if (inspect(to_part(c.target), ia->second, ib->second, tol) != 0.0) return false;
        }
        return true;
    };

    std::function<bool(std::size_t)> place = [&](std::size_t k) -> bool {
        if (k == free_terms.size()) return true;
        for (const auto& circle : circles) {
            config[free_terms[k]] = grid_sphere(circle, grid.dimension);
            if (consistent(free_terms[k]) && place(k + 1)) return true;
        }
        config.erase(free_terms[k]);
        return false;
    };
    if (place(0)) return config;
    return std::nullopt;
}

}  // namespace sphnn
