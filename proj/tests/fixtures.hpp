#pragma once

// Shared model fixtures for the test suites.

#include "wavesign/model.hpp"

namespace fixtures {

using namespace wavesign;

/// First bundled parameter set: moderate dispersal, certified positive speed.
inline ModelParams example1() {
    ModelParams p;
    p.period = pi;
    p.d1 = TrigPoly(pi, 10.0);
    p.r1 = TrigPoly(pi, 3.5);
    p.a1 = TrigPoly(pi, 5.0, {{1, 3.0, 0.0}});
    p.b1 = TrigPoly(pi, 10.0, {{1, 3.0, 0.0}});
    p.d2 = TrigPoly(pi, 15.0);
    p.r2 = TrigPoly(pi, 3.0);
    p.a2 = TrigPoly(pi, 15.0, {{1, 0.0, 3.0}});
    p.b2 = TrigPoly(pi, 8.0, {{1, 0.0, 3.0}});
    return p;
}

/// Second bundled parameter set: strong dispersal, certified negative speed.
inline ModelParams example2() {
    ModelParams p;
    p.period = pi;
    p.d1 = TrigPoly(pi, 100.0);
    p.r1 = TrigPoly(pi, 3.0);
    p.a1 = TrigPoly(pi, 14.0, {{1, 3.0, 0.0}});
    p.b1 = TrigPoly(pi, 35.0, {{1, 5.0, 0.0}});
    p.d2 = TrigPoly(pi, 120.0);
    p.r2 = TrigPoly(pi, 3.4);
    p.a2 = TrigPoly(pi, 16.0, {{1, 0.0, 1.5}});
    p.b2 = TrigPoly(pi, 6.0, {{1, 0.0, 1.5}});
    return p;
}

/// Constant-coefficient bundle with the given rates, period T, unit Gaussians.
inline ModelParams constants(double d1, double r1, double a1, double b1, double d2, double r2,
                             double a2, double b2, double T = pi) {
    ModelParams p;
    p.period = T;
    p.d1 = TrigPoly(T, d1);
    p.r1 = TrigPoly(T, r1);
    p.a1 = TrigPoly(T, a1);
    p.b1 = TrigPoly(T, b1);
    p.d2 = TrigPoly(T, d2);
    p.r2 = TrigPoly(T, r2);
    p.a2 = TrigPoly(T, a2);
    p.b2 = TrigPoly(T, b2);
    return p;
}

/// Bistable constant fixture with p = q = 1 (r1=a1=r2=b2=1, b1=a2=3).
inline ModelParams bistable_constants() { return constants(1, 1, 1, 3, 1, 1, 3, 1); }

/// Fully symmetric standoff: a1 p = b2 q, b1 q = a2 p, d1 = d2, same kernels;
/// the true wave speed is zero, so both sign criteria must fail.
inline ModelParams symmetric_standoff() { return constants(1, 1, 1, 2, 1, 1, 2, 1); }

} // namespace fixtures
