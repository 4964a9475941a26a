#pragma once

#include <string>

#include "rigid/derivations.hpp"
#include "rigid/reduction.hpp"

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(RIGID_TEST_DATA) + "/" + name; }

inline rigid::Derivation pex() { return rigid::load_derivation(data("pex.deriv")); }
inline rigid::Derivation fig5() { return rigid::load_derivation(data("fig5.deriv")); }
inline rigid::Operable fig5_operable() {
    return rigid::Operable{fig5(), rigid::load_interface(data("fig5_phi.json"))};
}

// Fig. 2 types.
inline rigid::SType t1() { return rigid::parse_type("(8:o2, 4:(8:o3, 3:o1) -> o2) -> o1"); }
inline rigid::SType t2() { return rigid::parse_type("(5:(7:o1, 2:o3) -> o2, 3:o2) -> o1"); }

}  // namespace fixtures
