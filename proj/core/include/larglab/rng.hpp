#pragma once

#include <cstdint>
#include <initializer_list>

namespace larglab {

// Deterministic elementary functions built from IEEE +,-,*,/ and sqrt only,
// so that sampled values are bit-identical across platforms. Accuracy is a
// few ulp, which is far below every statistical tolerance in the project.
namespace detmath {
double log(double x);   // x > 0, finite
double exp(double x);
// Inverse standard normal CDF (Wichura's rational approximations), p in (0,1).
double normal_quantile(double p);
}  // namespace detmath

// splitmix64 stream. Substreams are derived from (seed, path of indices),
// so each draw site is addressed independently of generation order.
class Rng {
public:
    static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    std::uint64_t next_u64();
    // Uniform on the open interval (0,1).
    double next_unit();
    double next_normal();
    // Poisson(mean) by CDF inversion; mean == 0 always yields 0.
    long long next_poisson(double mean);

private:
    explicit Rng(std::uint64_t state) : state_(state) {}
    std::uint64_t state_;
};

// Stream tags used to keep draw sites from colliding.
namespace stream_tag {
inline constexpr std::uint64_t pl = 1;
inline constexpr std::uint64_t poly = 2;
inline constexpr std::uint64_t bm = 3;
inline constexpr std::uint64_t larg_pair = 4;
inline constexpr std::uint64_t trial = 5;
}  // namespace stream_tag

}  // namespace larglab
