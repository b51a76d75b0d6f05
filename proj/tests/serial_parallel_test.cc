#include <doctest.h>

#include <omp.h>

#include <random>

#include "ccp/serial_reference.h"
#include "test_support.h"

using namespace ccp;

namespace {

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  for (int threads : {1, 2, 4, 7}) {
    Threads guard(threads);
    std::mt19937_64 rng(threads);
    std::uniform_int_distribution<int> dim(2, 45);
    for (int trial = 0; trial < 6; ++trial) {
      const int h = dim(rng), w = dim(rng), c = trial % 2 ? 3 : 1;
      const Image img = testing::random_image(rng(), h, w, c);

      const Spectrum p = dft2(img), s = serial::dft2(img);
      CHECK(p.amplitude == s.amplitude);
      CHECK(p.phase == s.phase);
      const Spectrum pc = center(p);
      CHECK(idft2(pc).image == serial::idft2(pc).image);
      CHECK(idft2(pc).max_imag == serial::idft2(pc).max_imag);

      CodecConfig cfg;
      cfg.quant_step = 1.0 + trial;
      const EncodedFrame fp = encode(img, cfg, EntropyModel::generic());
      const EncodedFrame fs = serial::encode(img, cfg, EntropyModel::generic());
      CHECK(fp.coefficients == fs.coefficients);
      CHECK(fp.bit_count == fs.bit_count);
      CHECK(decode(fp) == serial::decode(fp));
    }

    const auto [x, y] = testing::ms_ssim_fixture();
    const MsSsimResult mp = ms_ssim(x, y), ms = serial::ms_ssim(x, y);
    CHECK(mp.value == ms.value);
    CHECK(mp.scales == ms.scales);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Scenario sc = testing::random_scenario(seed + 50 * threads, 5);
      const CommPlan bp = brute_force_optimum(sc);
      const CommPlan bs = serial::brute_force_optimum(sc);
      CHECK(bp.links == bs.links);
      CHECK(bp.gamma == bs.gamma);
      CHECK(bp.avg_delay_s == bs.avg_delay_s);
    }
  }
}
