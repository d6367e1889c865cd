#include "hlloco/common/types.hpp"

namespace hlloco {

const char* to_string(Side s) { return s == Side::kLeft ? "left" : "right"; }

}  // namespace hlloco
