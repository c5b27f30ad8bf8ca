#pragma once

#include "quivermorse/quiver.hpp"

namespace qm::fixtures {

/// Framed base with a loop B at vertex "1" and an edge a: inf -> 1.
Quiver jordan_base();
/// Framed base with a single edge a: inf -> 1.
Quiver a1_base();

/// Nakajima doubles of the bases above (edges B, Bbar, a, abar; relations r_1, r_inf).
QuiverWithRelations jordan();
QuiverWithRelations a1();

/// Loops B1, B2 at V, a: W -> V, b: V -> W, single relation r = B1*B2 - B2*B1 + a*b at V.
QuiverWithRelations adhm();

/// Jordan double with a homogeneous cubic relation (B*B*Bbar - Bbar*B*B) in place of r_1.
QuiverWithRelations jordan_cubic();

/// Two vertices and no edges.
QuiverWithRelations edgeless();

/// Looks up one of: jordan, a1, adhm, jordan-cubic, edgeless, handsaw3, handsaw4, adhm-ext.
QuiverWithRelations by_name(const std::string& name);

} // namespace qm::fixtures
