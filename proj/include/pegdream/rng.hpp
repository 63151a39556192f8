#pragma once

#include <cstdint>
#include <vector>

namespace pegdream {

// Seeded, splittable random stream.
//
// Generation algorithm (fixed, do not change without bumping dataset schemas):
//   - stream state: xoshiro256++ seeded from splitmix64(seed ^ mix(stream_id))
//   - uniform():    53-bit mantissa mapping, [0, 1)
//   - normal():     Box-Muller, two uniforms per draw, cosine branch only
//   - uniform_int:  rejection sampling, no modulo bias
//
// split(id) is a pure function of (seed, stream_id, id) -- it does not depend
// on how much the parent stream has been consumed. The integer core is
// platform-exact; normal() additionally relies on IEEE-754 double libm
// (log/sqrt/cos), which is reproducible on a fixed toolchain.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream_id = 0);

  // Child stream derived from (seed, stream_id, id); parent is unaffected.
  Rng split(uint64_t id) const;

  uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform_range(double lo, double hi);
  double normal();                       // standard normal
  std::vector<double> normals(std::size_t n);
  uint64_t uniform_int(uint64_t n);      // [0, n), n >= 1

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

  static uint64_t mix(uint64_t a, uint64_t b);  // splitmix64-based combiner

 private:
  uint64_t seed_ = 0;
  uint64_t stream_id_ = 0;
  uint64_t s_[4] = {0, 0, 0, 0};
};

}  // namespace pegdream
