#include "hlloco/ppo/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "hlloco/common/errors.hpp"

namespace hlloco::ppo {
namespace {

constexpr char kMagic[8] = {'H', 'L', 'L', 'O', 'C', 'O', 'C', 'K'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw InvalidConfig("checkpoint truncated");
  }
  return v;
}

void put_doubles(std::ostream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p), n * sizeof(double));
}

void get_doubles(std::istream& in, double* p, std::size_t n) {
  if (!in.read(reinterpret_cast<char*>(p), n * sizeof(double))) {
    throw InvalidConfig("checkpoint truncated");
  }
}

void put_net(std::ostream& out, const Mlp& net) {
  put<std::uint32_t>(out, net.sizes().size());
  for (int s : net.sizes()) put<std::uint32_t>(out, s);
  put_doubles(out, net.params().data(), net.params().size());
}

Mlp get_net(std::istream& in) {
  const auto count = get<std::uint32_t>(in);
  if (count < 2 || count > 16) throw InvalidConfig("checkpoint: bad layer count");
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto s = get<std::uint32_t>(in);
    if (s == 0 || s > 4096) throw InvalidConfig("checkpoint: bad layer size");
    sizes.push_back(static_cast<int>(s));
  }
  Mlp net(sizes);
  get_doubles(in, net.params().data(), net.params().size());
  return net;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, ckpt.robot.size());
  out.write(ckpt.robot.data(), ckpt.robot.size());
  put<double>(out, ckpt.policy.sigma);
  put_net(out, ckpt.policy.actor);
  put_net(out, ckpt.policy.critic);
  const auto& n = ckpt.normalizer;
  put<std::uint32_t>(out, n.dim());
  put<double>(out, n.count());
  put_doubles(out, n.mean().data(), n.dim());
  put_doubles(out, n.m2().data(), n.dim());
  if (!out) throw Error("failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot open checkpoint '" + path + "'");
  char magic[8];
  if (!in.read(magic, sizeof magic) ||
      std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw InvalidConfig("'" + path + "' is not a checkpoint");
  }
  if (get<std::uint32_t>(in) != kCheckpointVersion) {
    throw InvalidConfig("unsupported checkpoint version");
  }
  Checkpoint c;
  const auto len = get<std::uint32_t>(in);
  if (len > 256) throw InvalidConfig("checkpoint: bad robot name");
  c.robot.resize(len);
  if (!in.read(c.robot.data(), len)) throw InvalidConfig("checkpoint truncated");
  c.policy.sigma = get<double>(in);
  c.policy.actor = get_net(in);
  c.policy.critic = get_net(in);
  if (c.policy.critic.input_dim() != c.policy.actor.input_dim() ||
      c.policy.critic.output_dim() != 1) {
    throw InvalidConfig("checkpoint: actor and critic do not match");
  }
  const auto dim = get<std::uint32_t>(in);
  if (static_cast<int>(dim) != c.policy.obs_dim()) {
    throw InvalidConfig("checkpoint: normalizer size mismatch");
  }
  const double count = get<double>(in);
  Eigen::VectorXd mean(dim), m2(dim);
  get_doubles(in, mean.data(), dim);
  get_doubles(in, m2.data(), dim);
  c.normalizer = Normalizer::from_state(count, mean, m2);
  return c;
}

}  // namespace hlloco::ppo
