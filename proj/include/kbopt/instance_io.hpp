#ifndef KBOPT_INSTANCE_IO_HPP
#define KBOPT_INSTANCE_IO_HPP

#include <string>

#include "kbopt/instance.hpp"

namespace kbopt {

// Self-describing line-oriented text format; %.17g floats round-trip
// bit-exactly and re-serialization is byte-identical.
//
//   kbopt-instance v1
//   kernel matern|se
//   nu <f>            (matern only)
//   theta <f>
//   dim <int>
//   m <f>
//   norm_expansion <f>
//   norm_bump_estimate <f>
//   argmax <f> x dim
//   fmax <f>
//   argmax_grid <int>
//   seed <u64>
//   holder_xi <f>
//   holder_l_hat <f>
//   centers <count>
//   c <weight> <coords...>        x count
//   bumps <count>
//   b <amplitude> <radius> <coords...>
//   growth <b_target> <b_hat> <c_lower> <c_upper> <rho0>          (optional)
//   perturbation <delta> <c_annulus> <c_deviation> <radius> <z...> (optional)
//   end
std::string serialize_instance(const RkhsFunction& f);
RkhsFunction parse_instance(const std::string& text);

void save_instance(const std::string& path, const RkhsFunction& f);
RkhsFunction load_instance(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace kbopt

#endif
