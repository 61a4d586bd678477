#pragma once

#include "mosweb/errors.hpp"

namespace mosweb {

// Three-valued verdict used by the interval backend.
enum class trilean { no = 0, yes = 1, undetermined = 2 };

inline trilean tri(bool b) { return b ? trilean::yes : trilean::no; }

inline bool definitely(trilean t) { return t == trilean::yes; }
inline bool possibly(trilean t) { return t != trilean::no; }

// Collapse to bool, refusing to guess.
inline bool require(trilean t, const char* what) {
    if (t == trilean::undetermined) throw undetermined_error(what);
    return t == trilean::yes;
}

inline trilean operator&&(trilean a, trilean b) {
    if (a == trilean::no || b == trilean::no) return trilean::no;
    if (a == trilean::yes && b == trilean::yes) return trilean::yes;
    return trilean::undetermined;
}

inline trilean operator!(trilean a) {
    if (a == trilean::undetermined) return a;
    return a == trilean::yes ? trilean::no : trilean::yes;
}

}  // namespace mosweb
