#include "sphnn/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace sphnn {

double Sphere::radius() const { return std::exp(log_radius); }

double distance(const Sphere& a, const Sphere& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("sphere dimension mismatch: " + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()));
    double acc = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double d = a.center[i] - b.center[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

namespace {

bool centers_equal(const Sphere& a, const Sphere& b) {
    for (int i = 0; i < a.dim(); ++i)
        if (a.center[i] != b.center[i]) return false;
    return true;
}

}  // namespace

bool holds(BaseRel rel, const Sphere& a, const Sphere& b) {
    const double dis = distance(a, b);
    const double ra = a.radius();
    const double rb = b.radius();
    switch (rel) {
        case BaseRel::D:
            // Open spheres: tangency folds into D.
            return dis - (ra + rb) >= 0.0;
        case BaseRel::EQ:
            return centers_equal(a, b) && a.log_radius == b.log_radius;
        case BaseRel::PP:
            return dis + ra <= rb && !holds(BaseRel::EQ, a, b);
        case BaseRel::PPbar:
            return dis + rb <= ra && !holds(BaseRel::EQ, a, b);
        case BaseRel::PO:
            return std::abs(ra - rb) < dis && dis < ra + rb;
    }
    return false;
}

bool holds(TargetRel rel, const Sphere& a, const Sphere& b) {
    const double dis = distance(a, b);
    const double ra = a.radius();
    const double rb = b.radius();
    switch (rel) {
        case TargetRel::D: return dis - (ra + rb) >= 0.0;
        case TargetRel::P: return dis + ra <= rb;
        case TargetRel::Pbar: return dis + rb <= ra;
        case TargetRel::NotD: return !(dis - (ra + rb) >= 0.0);
        case TargetRel::NotP: return !(dis + ra <= rb);
        case TargetRel::NotPbar: return !(dis + rb <= ra);
        case TargetRel::PO: return holds(BaseRel::PO, a, b);
    }
    return false;
}

double inspect(PartRel rel, const Sphere& a, const Sphere& b, const Tolerances& tol) {
    const double dis = distance(a, b);
    const double ra = a.radius();
    const double rb = b.radius();
    const double eps = tol.eps_strict;
    auto clamp0 = [](double v) { return v > 0.0 ? v : 0.0; };
    const double po = clamp0(std::abs(ra - rb) - dis + eps) + clamp0(dis - rb - ra + eps);
    switch (rel) {
        case PartRel::D: return clamp0(-dis + ra + rb);
        case PartRel::NotD: return clamp0(dis - ra - rb);
        case PartRel::P: return clamp0(dis + ra - rb);
        case PartRel::NotP: return clamp0(rb - dis - ra);
        case PartRel::Pbar: return clamp0(dis + rb - ra);
        case PartRel::NotPbar: return clamp0(ra - dis - rb);
        case PartRel::PO: return po;
        case PartRel::PO1: return po + clamp0(rb - dis + eps);
        case PartRel::PO2: return po + clamp0(dis - rb);
        case PartRel::PO3: return po + clamp0(rb - ra + eps);
        case PartRel::PO4: return po + clamp0(ra - rb);
        case PartRel::EQ: return std::abs(ra - rb) + dis;
        case PartRel::PP: return clamp0(dis + ra - rb + eps);
        case PartRel::PPbar: return clamp0(dis + rb - ra + eps);
    }
    return 0.0;
}

BaseRel classify(const Sphere& a, const Sphere& b) {
    if (holds(BaseRel::EQ, a, b)) return BaseRel::EQ;
    const double dis = distance(a, b);
    const double ra = a.radius();
    const double rb = b.radius();
    if (dis + ra <= rb) return BaseRel::PP;
    if (dis + rb <= ra) return BaseRel::PPbar;
    if (dis - (ra + rb) >= 0.0) return BaseRel::D;
    return BaseRel::PO;
}

PartRel classify_for_target(TargetRel target, const Sphere& a, const Sphere& b,
                            const Tolerances&) {
    const double dis = distance(a, b);
    const double ra = a.radius();
    const double rb = b.radius();
    const BaseRel base = classify(a, b);
    switch (target) {
        case TargetRel::NotD:
            return base == BaseRel::D ? PartRel::D : PartRel::NotD;
        case TargetRel::NotP:
            return holds(TargetRel::P, a, b) ? PartRel::P : PartRel::NotP;
        case TargetRel::NotPbar:
            return holds(TargetRel::Pbar, a, b) ? PartRel::Pbar : PartRel::NotPbar;
        case TargetRel::D:
            switch (base) {
                case BaseRel::D: return PartRel::D;
                case BaseRel::EQ: return PartRel::EQ;
                case BaseRel::PP: return PartRel::PP;
                case BaseRel::PPbar: return PartRel::PPbar;
                case BaseRel::PO: return dis > rb ? PartRel::PO1 : PartRel::PO2;
            }
            break;
        case TargetRel::P:
            if (holds(TargetRel::P, a, b)) return PartRel::P;
            switch (base) {
                case BaseRel::D: return PartRel::D;
                case BaseRel::PPbar: return PartRel::PPbar;
                case BaseRel::PO: return dis > rb ? PartRel::PO1 : PartRel::PO2;
                default: break;
            }
            break;
        case TargetRel::Pbar:
            if (holds(TargetRel::Pbar, a, b)) return PartRel::Pbar;
            switch (base) {
                case BaseRel::D: return PartRel::D;
                case BaseRel::PP: return PartRel::PP;
                // Sub-split per the printed formula block: PO3 iff r_V < r_X.
                case BaseRel::PO: return rb < ra ? PartRel::PO3 : PartRel::PO4;
                default: break;
            }
            break;
        case TargetRel::PO:
            switch (base) {
                case BaseRel::PO: return PartRel::PO;
                case BaseRel::D: return PartRel::D;
                case BaseRel::PP: return PartRel::PP;
                case BaseRel::PPbar: return PartRel::PPbar;
                case BaseRel::EQ: return PartRel::EQ;
            }
            break;
    }
    throw std::logic_error("classify_for_target: unreachable state");
}

BaseRel transpose(BaseRel rel) {
    switch (rel) {
        case BaseRel::PP: return BaseRel::PPbar;
        case BaseRel::PPbar: return BaseRel::PP;
        default: return rel;
    }
}

TargetRel transpose(TargetRel rel) {
    switch (rel) {
        case TargetRel::P: return TargetRel::Pbar;
        case TargetRel::Pbar: return TargetRel::P;
        case TargetRel::NotP: return TargetRel::NotPbar;
        case TargetRel::NotPbar: return TargetRel::NotP;
        default: return rel;
    }
}

PartRel to_part(TargetRel rel) {
    switch (rel) {
        case TargetRel::D: return PartRel::D;
        case TargetRel::P: return PartRel::P;
        case TargetRel::Pbar: return PartRel::Pbar;
        case TargetRel::NotD: return PartRel::NotD;
        case TargetRel::NotP: return PartRel::NotP;
        case TargetRel::NotPbar: return PartRel::NotPbar;
        case TargetRel::PO: return PartRel::PO;
    }
    throw std::logic_error("to_part: bad target");
}

Sphere rotate_about(const Sphere& mov, const Vec& pivot_center, int axis_a, int axis_b,
                    double angle) {
    if (static_cast<int>(pivot_center.size()) != mov.dim())
        throw std::invalid_argument("rotate_about: pivot dimension mismatch");
    if (axis_a < 0 || axis_b < 0 || axis_a >= mov.dim() || axis_b >= mov.dim() ||
        axis_a == axis_b)
        throw std::invalid_argument("rotate_about: invalid plane indices");
    Sphere out = mov;
    const double u = mov.center[axis_a] - pivot_center[axis_a];
    const double v = mov.center[axis_b] - pivot_center[axis_b];
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    out.center[axis_a] = pivot_center[axis_a] + c * u - s * v;
    out.center[axis_b] = pivot_center[axis_b] + s * u + c * v;
    return out;
}

const char* to_string(BaseRel rel) {
    switch (rel) {
        case BaseRel::D: return "D";
        case BaseRel::PO: return "PO";
        case BaseRel::PP: return "PP";
        case BaseRel::PPbar: return "PPbar";
        case BaseRel::EQ: return "EQ";
    }
    return "?";
}

const char* to_string(TargetRel rel) {
    switch (rel) {
        case TargetRel::D: return "D";
        case TargetRel::P: return "P";
        case TargetRel::Pbar: return "Pbar";
        case TargetRel::NotD: return "NotD";
        case TargetRel::NotP: return "NotP";
        case TargetRel::NotPbar: return "NotPbar";
        case TargetRel::PO: return "PO";
    }
    return "?";
}

const char* to_string(PartRel rel) {
    switch (rel) {
        case PartRel::D: return "D";
        case PartRel::PO: return "PO";
        case PartRel::PO1: return "PO1";
        case PartRel::PO2: return "PO2";
        case PartRel::PO3: return "PO3";
        case PartRel::PO4: return "PO4";
        case PartRel::PP: return "PP";
        case PartRel::PPbar: return "PPbar";
        case PartRel::EQ: return "EQ";
        case PartRel::P: return "P";
        case PartRel::Pbar: return "Pbar";
        case PartRel::NotD: return "NotD";
        case PartRel::NotP: return "NotP";
        case PartRel::NotPbar: return "NotPbar";
    }
    return "?";
}

}  // namespace sphnn
