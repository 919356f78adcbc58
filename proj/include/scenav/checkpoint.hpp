#pragma once

#include <cstdint>
#include <string>

#include "scenav/sac.hpp"

namespace scenav {

/// Checkpoint file: 8-byte magic, format version, a JSON header describing
/// layer sizes, optimizer scalars and the named arrays, then the arrays as
/// little-endian 32-bit floats in row-major order.
struct Checkpoint {
  std::uint64_t seed = 0;
  long step = 0;
  long episode = 0;
  NetworkBundle nets;
};

void save_checkpoint(const std::string& path, const NetworkBundle& nets, std::uint64_t seed,
                     long step, long episode);

/// Throws ValidationError naming the offending header field on corrupt or
/// incompatible files.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace scenav
