#pragma once

#include <string>

#include "qprelax/instance.hpp"

namespace qprelax::testing {

// n=3 instance with two adjacent plus loops and one minus loop
inline const char* kExample2Text =
    "# two adjacent plus loops, one minus loop\n"
    "n 3\n"
    "d 1 5080\n"
    "d 2 5\n"
    "d 3 -40\n"
    "q 1 2 -5849\n"
    "q 1 3 5767\n"
    "q 2 3 -1824\n"
    "c 1 -254\n"
    "c 2 1824\n"
    "c 3 37\n";

// n=3 instance whose plus loops form a triangle
inline const char* kExample3Text =
    "n 3\n"
    "d 1 8\n"
    "d 2 11\n"
    "d 3 3500\n"
    "q 1 2 2732\n"
    "q 1 3 -4923\n"
    "q 2 3 -5960\n"
    "c 1 2\n"
    "c 2 140\n"
    "c 3 4523\n";

inline QpInstance example2() { return parse_instance_text(kExample2Text); }
inline QpInstance example3() { return parse_instance_text(kExample3Text); }

}  // namespace qprelax::testing
