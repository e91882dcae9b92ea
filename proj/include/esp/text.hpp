#pragma once

// Text front ends: ring descriptors, element expressions and the sympmat
// matrix format.
//
//   zmod:15   q   poly:q:x,y   upoly:zmod:15:X   loc:poly:q:t:s=t
//
// Elements: integers, variable names, + - * ^, parentheses, and a/b where b
// divides a in the ring (units, or s^k in a localization; `s` names the
// localized element).

#include <string>
#include <string_view>

#include "esp/matrix.hpp"

namespace esp {

Ring ring_make(std::string_view descriptor);
Elem parse_elem(const Ring& ring, std::string_view text);

/// `sympmat n=<n> ring=<desc> entries=<e;e;...>`, row-major.
std::string format_sympmat(const Matrix& m);
Matrix parse_sympmat(std::string_view text, Ring* ring_out = nullptr);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace esp
