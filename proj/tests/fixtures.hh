#pragma once

#include <string>

#include "coin/model.hh"

namespace coin::test {

// Two primitives under one restricting composite.
inline const std::string kAbcModel = R"(
automaton A (1) {
        state q0, q1, q2;
        init  q0;
        trans
                q0 -> q1 (1, a, -),
                q1 -> q2 (1, b, 1),
                q2 -> q0 (-, c, 1);
}
automaton B (2) {
        state p0;
        init  p0;
        trans
                p0 -> p0 (-, a, 2),
                p0 -> p0 (2, c, -);
}
composite C {
        A, B;
        restrictL (1, a, -), (-, c, 1);
}
system C;
)";

// Root { S1, C2 { C3 { Si, S3 }, S4, C4 { Sj, S6 } } }
inline const std::string kFigureModel = R"(
automaton S1 (1) { state x0, x1; init x0; trans x0 -> x1 (1, go, -), x1 -> x0 (1, tick, 1); }
automaton Si (2) { state u0, u1; init u0; trans u0 -> u1 (2, m, -), u1 -> u0 (-, go, 2); }
automaton S3 (3) { state v0; init v0; trans v0 -> v0 (3, idle, 3), v0 -> v0 (-, m, 3); }
automaton S4 (4) { state w0, w1; init w0; trans w0 -> w1 (-, go, 4), w1 -> w0 (4, back, -); }
automaton Sj (5) { state y0, y1; init y0; trans y0 -> y1 (-, m, 5), y1 -> y0 (5, done, 5); }
automaton S6 (6) { state z0; init z0; trans z0 -> z0 (-, back, 6); }
composite C3 { Si, S3; restrictL (2, m, 3); }
composite C4 { Sj, S6; }
composite C2 { C3, S4, C4; restrictL (2, m, -); }
composite Root { S1, C2; onlyL (1, go, 2), (1, go, 4), (2, m, 5), (3, idle, 3), (5, done, 5), (1, tick, 1), (4, back, 6); }
system Root;
)";

inline HierarchyTree load(const std::string &text) { return elaborate(parse_model(text)); }

} // namespace coin::test
