#pragma once

#include <map>
#include <string>
#include <variant>

#include "swpk/profiles.hpp"

namespace swpk {

// Writes to a temporary sibling and renames it into place.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Profile CSV: "# kind=boundary n=<n>" then "r,value" rows, or
// "# kind=halfspace n=<n>" then "rho,t,value" rows; numbers at 17 digits.
std::string boundary_csv(const BoundaryProfile& f);
std::string halfspace_csv(const HalfSpaceProfile& g);

// Either kind, detected from the header. The radial grids are rebuilt from the
// node lists and must be geometric (ParseError otherwise).
using AnyProfile = std::variant<BoundaryProfile, HalfSpaceProfile>;
AnyProfile parse_profile_csv(const std::string& text);

// Flat "section.key=value" lines; '#' starts a comment. ParseError on
// malformed lines.
std::map<std::string, std::string> parse_config_text(const std::string& text);

}  // namespace swpk
