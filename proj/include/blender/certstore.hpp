#ifndef BLENDER_CERTSTORE_HPP
#define BLENDER_CERTSTORE_HPP

#include <filesystem>
#include <iosfwd>

#include "blender/family.hpp"

namespace blender {

// Text format, LF line endings, every real written as a C99 hex float:
//
//   BLENDER-CERT 1
//   PARAMS
//   a <lo> <hi>          (then b, c, xi)
//   eps_y <v>            (then eps_z, eps_z_hat, delta)
//   n <int>              (then k, N = collocation node count)
//   y0 <v>               (then T_margin)
//   domain_check curve|tube
//   I <lo> <hi>          (then y_range, z_range)
//   CURVES <count>
//   CURVE <id> <degY> <lo hi>... <degZ> <lo hi>...
//   MAPS <count>
//   MAP <parent> <slot> <target> <Tlo> <Thi>
//   END
inline constexpr int kCertVersion = 1;

void save(const Certificate& c, std::ostream& out);
void save(const Certificate& c, const std::filesystem::path& path);

// Throws FormatError (with the offending line number) on any malformed input.
Certificate load(std::istream& in);
Certificate load(const std::filesystem::path& path);

} // namespace blender

#endif
