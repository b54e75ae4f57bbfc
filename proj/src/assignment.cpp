#include "assignment.hpp"

namespace uavplan {

Pairing assign_users(const Scenario& s) {
    Pairing p;
    p.serving.resize(s.users.size());
    for (int k = 0; k < s.num_users(); ++k) {
        int best = 0;
        double best_d2 = (s.uavs[0].initial_position - s.users[k].position).squaredNorm();
        for (int m = 1; m < s.num_uavs(); ++m) {
            const double d2 =
                (s.uavs[m].initial_position - s.users[k].position).squaredNorm();
            if (d2 < best_d2) {
                best = m;
                best_d2 = d2;
            }
        }
        p.serving[k] = best;
    }
    return p;
}

} // namespace uavplan
