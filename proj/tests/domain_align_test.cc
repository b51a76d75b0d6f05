#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

#include "ccp/domain_align.h"
#include "ccp/errors.h"
#include "ccp/fft.h"
#include "ccp/image_io.h"
#include "test_support.h"

using namespace ccp;

namespace {

double rms(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum / a.size());
}

// Half-width rule restated independently: floor(alpha * n), tolerant of
// products like 0.1 * 10 that land a hair below an integer.
int half(double alpha, int n) {
  const double x = alpha * n;
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? static_cast<int>(r) : static_cast<int>(std::floor(x));
}

int enumerate_mask(double alpha, int h_size, int w_size) {
  if (alpha == 0.0) return 0;
  int count = 0;
  for (int h = 0; h < h_size; ++h) {
    for (int w = 0; w < w_size; ++w) {
      count += std::abs(h - h_size / 2) <= half(alpha, h_size) &&
               std::abs(w - w_size / 2) <= half(alpha, w_size);
    }
  }
  return count;
}

Image brightened(const Image& img, double delta) {
  Image out = img;
  for (double& v : out.data()) v = std::clamp(v + delta, 0.0, 1.0);
  return out;
}

}  // namespace

TEST_CASE("1-D transform matches the direct sum for all small lengths") {
  for (std::size_t n = 1; n <= 17; ++n) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> gauss;
    std::vector<Complex> x(n), scratch(n);
    for (auto& v : x) v = {gauss(rng), gauss(rng)};
    for (bool inverse : {false, true}) {
      std::vector<Complex> y = x;
      Dft1d(n).transform(y, inverse, scratch);
      const double sign = inverse ? 1.0 : -1.0;
      for (std::size_t k = 0; k < n; ++k) {
        Complex acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
          acc += x[j] * std::polar(1.0, sign * 2 * std::numbers::pi * j * k / n);
        }
        CHECK(std::abs(y[k] - acc) < 1e-11);
      }
    }
  }
}

TEST_CASE("constant image has only a DC bin") {
  const Image img(6, 10, 3, 0.3);
  const Spectrum s = dft2(img);
  CHECK_FALSE(s.centered);
  for (int c = 0; c < 3; ++c) {
    CHECK(s.amplitude[s.index(0, 0, c)] == doctest::Approx(0.3 * 60).epsilon(1e-14));
    CHECK(s.phase[s.index(0, 0, c)] == 0.0);
    for (int h = 0; h < 6; ++h) {
      for (int w = 0; w < 10; ++w) {
        if (h || w) CHECK(s.amplitude[s.index(h, w, c)] < 1e-12);
      }
    }
  }
}

TEST_CASE("impulse has a flat amplitude spectrum") {
  for (auto [h0, w0] : {std::pair{0, 0}, std::pair{3, 5}}) {
    Image img(8, 7, 1, 0.0);
    img.at(h0, w0, 0) = 1.0;
    const Spectrum s = dft2(img);
    for (double a : s.amplitude) CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("2-D transform matches the naive double sum") {
  for (auto [h, w] : {std::pair{8, 8}, std::pair{7, 9}, std::pair{6, 10},
                      std::pair{2, 3}}) {
    const Image img = testing::random_image(h * 31 + w, h, w, 3);
    const Spectrum s = dft2(img);
    for (int c = 0; c < 3; ++c) {
      const auto naive = testing::naive_dft2(img, c);
      double worst = 0.0;
      for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
          const std::complex<double> got = std::polar(
              s.amplitude[s.index(u, v, c)], s.phase[s.index(u, v, c)]);
          worst = std::max(worst, std::abs(got - naive[u * w + v]));
        }
      }
      CHECK(worst <= 1e-9);
    }
  }
}

TEST_CASE("phase lies in (-pi, pi] and amplitude is non-negative") {
  const Spectrum s = dft2(testing::random_image(1, 9, 12, 3));
  for (double p : s.phase) {
    CHECK(p > -std::numbers::pi);
    CHECK(p <= std::numbers::pi);
  }
  for (double a : s.amplitude) CHECK(a >= 0.0);
}

TEST_CASE("property: round trip within 1e-9 RMS for even and odd sizes") {
  std::mt19937_64 rng(90);
  std::uniform_int_distribution<int> dim(2, 33);
  for (int trial = 0; trial < 40; ++trial) {
    const int h = dim(rng), w = dim(rng), c = trial % 2 ? 3 : 1;
    const Image img = testing::random_image(rng(), h, w, c);
    const Reconstruction r = idft2(dft2(img));
    CHECK(rms(r.image.data(), img.data()) <= 1e-9);
    CHECK(r.max_imag < 1e-9);
    const Reconstruction rc = idft2(center(dft2(img)));
    CHECK(rms(rc.image.data(), img.data()) <= 1e-9);
  }
}

TEST_CASE("property: Parseval holds per channel") {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<int> dim(2, 40);
  for (int trial = 0; trial < 30; ++trial) {
    const int h = dim(rng), w = dim(rng);
    const Image img = testing::random_image(rng(), h, w, 3);
    const Spectrum s = dft2(img);
    for (int c = 0; c < 3; ++c) {
      double pixels = 0.0, spectrum = 0.0;
      for (double v : img.plane(c)) pixels += v * v;
      for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
          const double a = s.amplitude[s.index(u, v, c)];
          spectrum += a * a;
        }
      }
      CHECK(spectrum / (h * w) == doctest::Approx(pixels).epsilon(1e-6));
    }
  }
}

TEST_CASE("transforms reject degenerate shapes") {
  CHECK_THROWS_AS(dft2(Image(1, 8, 1)), ValidationError);
  CHECK_THROWS_AS(dft2(Image{}), ValidationError);
  Spectrum s = dft2(Image(4, 4, 1, 0.5));
  s.amplitude.pop_back();
  CHECK_THROWS_AS(idft2(s), ValidationError);
}

TEST_CASE("centering puts DC in the middle and is reversible") {
  const Image img(5, 8, 1, 0.5);
  const Spectrum s = center(dft2(img));
  CHECK(s.centered);
  CHECK(s.amplitude[s.index(2, 4, 0)] == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(center(s).amplitude == s.amplitude);
  const Spectrum raw = dft2(testing::random_image(2, 7, 6, 3));
  const Spectrum back = uncenter(center(raw));
  CHECK_FALSE(back.centered);
  CHECK(back.amplitude == raw.amplitude);
  CHECK(back.phase == raw.phase);
  CHECK(uncenter(raw).amplitude == raw.amplitude);
}

TEST_CASE("mask examples") {
  CHECK(build_mask(0.0, 17, 9).count() == 0);
  const FreqMask m = build_mask(0.1, 10, 10);
  CHECK(m.half_height == 1);
  CHECK(m.count() == 9);
  CHECK(m.contains(5, 5));
  CHECK(m.contains(4, 6));
  CHECK_FALSE(m.contains(3, 5));
  CHECK(build_mask(0.45, 7, 9).count() == enumerate_mask(0.45, 7, 9));
  CHECK(build_mask(0.45, 7, 9).count() == 63);
  CHECK_THROWS_AS(build_mask(1.0, 4, 4), ValidationError);
  CHECK_THROWS_AS(build_mask(-0.1, 4, 4), ValidationError);
}

TEST_CASE("property: mask counts match enumeration and the clipped formula") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dim(1, 40);
  std::uniform_real_distribution<double> a(0.0, 0.99);
  for (int trial = 0; trial < 300; ++trial) {
    const int h = dim(rng), w = dim(rng);
    const double alpha = trial % 10 == 0 ? 0.0 : a(rng);
    const FreqMask m = build_mask(alpha, h, w);
    CHECK(m.count() == enumerate_mask(alpha, h, w));
    if (alpha > 0) {
      const int rows = std::min(h - 1, h / 2 + half(alpha, h)) -
                       std::max(0, h / 2 - half(alpha, h)) + 1;
      const int cols = std::min(w - 1, w / 2 + half(alpha, w)) -
                       std::max(0, w / 2 - half(alpha, w)) + 1;
      CHECK(m.count() == rows * cols);
      if (2 * half(alpha, h) + 1 <= h && h % 2 == 1 &&
          2 * half(alpha, w) + 1 <= w && w % 2 == 1) {
        CHECK(m.count() ==
              (2 * half(alpha, h) + 1) * (2 * half(alpha, w) + 1));
      }
    }
  }
}

TEST_CASE("mixing with an empty mask or with itself returns the source") {
  const Spectrum a = center(dft2(testing::random_image(4, 6, 6, 3)));
  const Spectrum b = center(dft2(testing::random_image(5, 6, 6, 3)));
  CHECK(mix_amplitude(a, b, build_mask(0.0, 6, 6)) == a.amplitude);
  CHECK(mix_amplitude(a, a, build_mask(0.4, 6, 6)) == a.amplitude);
}

TEST_CASE("mixing selects elementwise inside and outside the mask") {
  const Spectrum a = center(dft2(testing::random_image(6, 6, 6, 3)));
  const Spectrum b = center(dft2(testing::random_image(7, 6, 6, 3)));
  const FreqMask m = build_mask(0.2, 6, 6);
  const std::vector<double> mixed = mix_amplitude(a, b, m);
  int inside = 0;
  for (int c = 0; c < 3; ++c) {
    for (int h = 0; h < 6; ++h) {
      for (int w = 0; w < 6; ++w) {
        const std::size_t i = a.index(h, w, c);
        const bool in = std::abs(h - 3) <= 1 && std::abs(w - 3) <= 1;
        inside += in;
        CHECK(mixed[i] == (in ? b.amplitude[i] : a.amplitude[i]));
      }
    }
  }
  CHECK(inside == 27);
}

TEST_CASE("mixing rejects mismatched inputs") {
  const Spectrum a = center(dft2(testing::random_image(6, 6, 6, 3)));
  const Spectrum other = center(dft2(testing::random_image(6, 6, 8, 3)));
  CHECK_THROWS_AS(mix_amplitude(a, other, build_mask(0.2, 6, 6)), ValidationError);
  CHECK_THROWS_AS(mix_amplitude(uncenter(a), a, build_mask(0.2, 6, 6)),
                  ValidationError);
  CHECK_THROWS_AS(mix_amplitude(a, a, build_mask(0.2, 6, 7)), ValidationError);
}

TEST_CASE("alignment with alpha 0 or with itself is the identity") {
  const Image src = testing::random_image(10, 24, 20, 3);
  const Image tgt = testing::random_image(11, 24, 20, 3);
  CHECK(rms(align(src, tgt, 0.0).data(), src.data()) <= 1e-9);
  for (double alpha : {0.0, 0.05, 0.1, 0.3, 0.49, 0.9}) {
    CHECK(rms(align(src, src, alpha).data(), src.data()) <= 1e-9);
  }
  CHECK_THROWS_AS(align(src, Image(24, 20, 1), 0.1), ValidationError);
}

TEST_CASE("aligned spectrum keeps source phase and mixed amplitude") {
  for (double alpha : {0.05, 0.1, 0.25}) {
    const Image src = testing::random_image(20, 32, 24, 3);
    const Image tgt = brightened(testing::random_image(21, 32, 24, 3), 0.2);
    const AlignResult r = align_detailed(src, tgt, alpha);
    CHECK(r.max_imag < 1e-6);
    const Spectrum out = center(dft2(r.unclipped));
    const Spectrum source = center(dft2(src));
    const Spectrum target = center(dft2(tgt));
    const FreqMask m = build_mask(alpha, 32, 24);
    for (int c = 0; c < 3; ++c) {
      for (int h = 0; h < 32; ++h) {
        for (int w = 0; w < 24; ++w) {
          const std::size_t i = out.index(h, w, c);
          const double expected =
              m.contains(h, w) ? target.amplitude[i] : source.amplitude[i];
          CHECK(out.amplitude[i] ==
                doctest::Approx(expected).epsilon(1e-6).scale(1e-12));
          if (out.amplitude[i] > 1e-12 && expected > 1e-12) {
            const double dphi = std::remainder(out.phase[i] - source.phase[i],
                                               2 * std::numbers::pi);
            CHECK(std::abs(dphi) <= 1e-6);
          }
        }
      }
    }
    for (double v : r.aligned.data()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("brightness shift moves the mean toward the target") {
  SceneParams p;
  p.height = 32;
  p.width = 32;
  p.seed = 4;
  const Image src = synthesize_scene(p);
  const Image tgt = brightened(src, 0.3);
  const Image out = align(src, tgt, 0.05);
  CHECK(mean_value(out) > mean_value(src));
  CHECK(std::abs(mean_value(out) - mean_value(tgt)) <
        std::abs(mean_value(src) - mean_value(tgt)));
}

TEST_CASE("property: deviation from the source grows with alpha") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Image src = testing::random_image(rng(), 20, 28, 3);
    const Image tgt = brightened(testing::random_image(rng(), 20, 28, 3), 0.1);
    double previous_unclipped = 0.0, previous_clipped = 0.0;
    for (double alpha : {0.0, 0.05, 0.1, 0.15, 0.2, 0.3, 0.45}) {
      const AlignResult r = align_detailed(src, tgt, alpha);
      const double unclipped = rms(r.unclipped.data(), src.data());
      const double clipped = rms(r.aligned.data(), src.data());
      CHECK(unclipped >= previous_unclipped - 1e-12);
      CHECK(clipped >= previous_clipped - 1e-12);
      previous_unclipped = unclipped;
      previous_clipped = clipped;
    }
  }
}

TEST_CASE("concentration of identical singletons is zero") {
  const Image a = testing::random_image(3, 16, 16, 3);
  CHECK(concentration({&a, 1}, {&a, 1}, 0.1) == 0.0);
}

TEST_CASE("concentration of constant sets equals the DC feature distance") {
  const std::vector<Image> a = {Image(16, 16, 3, 0.2)};
  const std::vector<Image> b = {Image(16, 16, 3, 0.8)};
  const double dc = std::log1p(0.8 * 256) - std::log1p(0.2 * 256);
  CHECK(concentration(a, b, 0.1) ==
        doctest::Approx(std::sqrt(3.0) * dc).epsilon(1e-12));
  const std::vector<Image> pair = {Image(16, 16, 3, 0.2), Image(16, 16, 3, 0.8)};
  CHECK(concentration(pair, b, 0.1) ==
        doctest::Approx(std::sqrt(3.0) * dc / 2).epsilon(1e-12));
}

TEST_CASE("property: concentration is symmetric and zero only on equal features") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Image> a, b;
    for (int i = 0; i < 3; ++i) a.push_back(testing::random_image(rng(), 12, 12, 1));
    for (int i = 0; i < 2; ++i) b.push_back(testing::random_image(rng(), 12, 12, 1));
    const double ab = concentration(a, b, 0.2);
    CHECK(ab > 0.0);
    CHECK(ab == doctest::Approx(concentration(b, a, 0.2)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(concentration({}, std::vector<Image>{Image(4, 4, 1)}, 0.1),
                  ValidationError);
  const Image x(8, 8, 1, 0.5);
  CHECK_THROWS_AS(amplitude_features(x, 0.0), ValidationError);
}

TEST_CASE("alignment concentrates a brightness-shifted domain") {
  std::vector<Image> a, b;
  for (int i = 0; i < 4; ++i) {
    SceneParams p;
    p.height = 32;
    p.width = 32;
    p.seed = 100 + i;
    a.push_back(synthesize_scene(p));
    p.seed = 200 + i;
    p.brightness = 0.25;
    p.color_cast[0] = 0.1;
    p.color_cast[2] = -0.1;
    b.push_back(synthesize_scene(p));
  }
  for (double alpha : {0.05, 0.1}) {
    std::vector<Image> aligned;
    for (std::size_t i = 0; i < b.size(); ++i) {
      aligned.push_back(align(b[i], a[i], alpha));
    }
    CHECK(concentration(a, aligned, 0.1) < concentration(a, b, 0.1));
  }
}

TEST_CASE("PNM files round trip 8-bit data byte for byte") {
  for (int channels : {1, 3}) {
    SceneParams p;
    p.height = 9;
    p.width = 14;
    p.channels = channels;
    p.seed = 3;
    const Image img = synthesize_scene(p);
    const std::string bytes = format_pnm(img);
    CHECK(bytes.substr(0, 2) == (channels == 1 ? "P5" : "P6"));
    const Image back = parse_pnm(bytes);
    CHECK(back == img);
    CHECK(format_pnm(back) == bytes);
    const std::string path = channels == 1 ? "da_test.pgm" : "da_test.ppm";
    write_pnm(path, img);
    CHECK(read_pnm(path) == img);
    std::remove(path.c_str());
  }
}

TEST_CASE("PNM parser accepts comments and rejects damage") {
  const std::string ok = std::string("P5\n# made by hand\n2 1\n255\n") + '\x00' + '\xff';
  const Image img = parse_pnm(ok);
  CHECK(img.at(0, 0, 0) == 0.0);
  CHECK(img.at(0, 1, 0) == 1.0);
  CHECK_THROWS_AS(parse_pnm("P3\n2 1\n255\n0 0"), IoError);
  CHECK_THROWS_AS(parse_pnm(std::string("P5\n2 1\n255\n") + 'x'), IoError);
  CHECK_THROWS_AS(parse_pnm(std::string("P5\n2 1\n65535\n") + "xxxx"), IoError);
  CHECK_THROWS_AS(read_pnm("/nonexistent/image.ppm"), IoError);
}
