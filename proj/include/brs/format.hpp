#ifndef BRS_FORMAT_HPP
#define BRS_FORMAT_HPP

#include <string>

namespace brs {

// Shortest round-trip decimal form; stable across runs.
std::string fmt_double(double v);

}  // namespace brs

#endif  // BRS_FORMAT_HPP
