#pragma once

#include <string>

#include "hlloco/ppo/network.hpp"
#include "hlloco/ppo/normalizer.hpp"

namespace hlloco::ppo {

/// Little-endian binary layout:
///   char[8]  magic "HLLOCOCK"
///   u32      version (1)
///   u32      robot name length, then the name bytes
///   f64      sigma
///   2 x net  (actor, critic):
///              u32 count of layer sizes, u32 sizes[count]
///              f64 params, per layer: weights row-major (out x in), bias
///   u32      normalizer dim
///   f64      count, mean[dim], m2[dim]
struct Checkpoint {
  std::string robot;
  Policy policy;
  Normalizer normalizer;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Throws Error on I/O failure.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
/// Throws InvalidConfig on a malformed or foreign file.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hlloco::ppo
