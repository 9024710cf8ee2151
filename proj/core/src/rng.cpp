#include "sdet/rng.hpp"

#include <array>

namespace sdet {

RngStream::RngStream(const StreamKey& key) {
  std::uint64_t h = mix64(key.seed);
  h = mix64(h ^ key.cell);
  h = mix64(h ^ key.replicate);
  h = mix64(h ^ key.hypothesis);
  // Feed several derived words so nearby keys do not share initial state.
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < words.size(); i += 2) {
    h = mix64(h);
    words[i] = static_cast<std::uint32_t>(h);
    words[i + 1] = static_cast<std::uint32_t>(h >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

}  // namespace sdet
