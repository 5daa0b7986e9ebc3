#pragma once

#include <cstdint>

namespace deacs {

/// Dense integer code of a discrete value.
using Code = std::uint32_t;

}  // namespace deacs
