#pragma once

#include <string>
#include <vector>

#include "sphnn/config.hpp"

namespace sphnn {

using Vec = std::vector<double>;

// Open n-ball. The radius is stored as an exponent so positivity is structural;
// gradient steps act on log_radius through the chain rule.
struct Sphere {
    Vec center;
    double log_radius = 0.0;

    double radius() const;
    int dim() const { return static_cast<int>(center.size()); }
};

// The five jointly exhaustive, pairwise disjoint relations between two spheres.
enum class BaseRel { D, PO, PP, PPbar, EQ };

// Relations a construction can be asked to reach. PO is an extension target
// used only when verifying circle-relation claims.
enum class TargetRel { D, P, Pbar, NotD, NotP, NotPbar, PO };

// Members of the target-oriented partitions, including the PO sub-splits.
enum class PartRel { D, PO, PO1, PO2, PO3, PO4, PP, PPbar, EQ, P, Pbar, NotD, NotP, NotPbar };

double distance(const Sphere& a, const Sphere& b);

bool holds(BaseRel rel, const Sphere& a, const Sphere& b);
bool holds(TargetRel rel, const Sphere& a, const Sphere& b);

// Non-negative loss, zero exactly when the relation the form certifies holds.
// Strict relations carry the eps margin, so their zero set sits strictly
// inside the open region.
double inspect(PartRel rel, const Sphere& a, const Sphere& b, const Tolerances& tol);

BaseRel classify(const Sphere& a, const Sphere& b);

// Partition member of f_tsp(target) the pair currently occupies.
PartRel classify_for_target(TargetRel target, const Sphere& a, const Sphere& b,
                            const Tolerances& tol);

BaseRel transpose(BaseRel rel);
TargetRel transpose(TargetRel rel);
PartRel to_part(TargetRel rel);

// Rigid rotation of the moving sphere about a pivot point in the (axis_a,
// axis_b) coordinate plane. Test helper for the rotation-invariance property.
Sphere rotate_about(const Sphere& mov, const Vec& pivot_center, int axis_a, int axis_b,
                    double angle);

const char* to_string(BaseRel rel);
const char* to_string(TargetRel rel);
const char* to_string(PartRel rel);

}  // namespace sphnn
