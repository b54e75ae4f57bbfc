#ifndef UAVPLAN_ASSIGNMENT_HPP
#define UAVPLAN_ASSIGNMENT_HPP

#include "physics.hpp"
#include "scenario.hpp"

namespace uavplan {

// Nearest-initial-position pairing; ties broken by lowest UAV index.
Pairing assign_users(const Scenario& s);

} // namespace uavplan

#endif
