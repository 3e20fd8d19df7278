#include "uot/gen.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <vector>

namespace uot {

namespace {

// pinned uniform in [0, 1): mt19937_64 output is fixed by the standard, the
// distribution classes are not
double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

std::uint32_t read_be32(std::istream& in, const std::string& path, std::size_t& offset) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in)
    throw ParseError(path + ": truncated at byte offset " + std::to_string(offset));
  offset += 4;
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

}  // namespace

ProblemSpec gen_gaussian_pair(Index bins, std::uint64_t seed) {
  if (bins < 2) throw DomainError("gen_gaussian_pair: bins must be >= 2");
  std::mt19937_64 rng(seed);
  const double bn = static_cast<double>(bins);
  const double mean_a = (0.25 + 0.5 * u01(rng)) * bn;
  const double sigma_a = (0.05 + 0.15 * u01(rng)) * bn;
  const double mean_b = (0.25 + 0.5 * u01(rng)) * bn;
  const double sigma_b = (0.05 + 0.15 * u01(rng)) * bn;

  ProblemSpec spec;
  spec.n = bins;
  spec.m = bins;
  spec.a.resize(static_cast<std::size_t>(bins));
  spec.b.resize(static_cast<std::size_t>(bins));
  double sum_a = 0.0, sum_b = 0.0;
  for (Index i = 0; i < bins; ++i) {
    const double x = static_cast<double>(i) + 0.5;
    const double da = (x - mean_a) / sigma_a;
    const double db = (x - mean_b) / sigma_b;
    spec.a[static_cast<std::size_t>(i)] = std::exp(-0.5 * da * da);
    spec.b[static_cast<std::size_t>(i)] = std::exp(-0.5 * db * db);
    sum_a += spec.a[static_cast<std::size_t>(i)];
    sum_b += spec.b[static_cast<std::size_t>(i)];
  }
  for (Index i = 0; i < bins; ++i) {
    spec.a[static_cast<std::size_t>(i)] /= sum_a;
    spec.b[static_cast<std::size_t>(i)] /= sum_b;
  }

  spec.c.resize(static_cast<std::size_t>(bins * bins));
  const double scale = (bn - 1.0) * (bn - 1.0);  // max squared bin-center gap
  for (Index i = 0; i < bins; ++i) {
    for (Index j = 0; j < bins; ++j) {
      const double d = static_cast<double>(i - j);
      spec.c[static_cast<std::size_t>(i * bins + j)] = d * d / scale;
    }
  }
  spec.lambda = 0.1;
  spec.penalty = Penalty::L2;
  spec.epsilon = 0.0;
  return spec;
}

ProblemSpec load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                           Index index_a, Index index_b) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw ParseError(images_path + ": cannot open");
  std::size_t off = 0;
  const std::uint32_t magic = read_be32(img, images_path, off);
  if (magic != 2051)
    throw ParseError(images_path + ": bad magic " + std::to_string(magic) +
                     " at byte offset 0 (expected 2051)");
  const std::uint32_t count = read_be32(img, images_path, off);
  const std::uint32_t rows = read_be32(img, images_path, off);
  const std::uint32_t cols = read_be32(img, images_path, off);

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw ParseError(labels_path + ": cannot open");
  std::size_t loff = 0;
  const std::uint32_t lmagic = read_be32(lab, labels_path, loff);
  if (lmagic != 2049)
    throw ParseError(labels_path + ": bad magic " + std::to_string(lmagic) +
                     " at byte offset 0 (expected 2049)");
  const std::uint32_t lcount = read_be32(lab, labels_path, loff);
  if (lcount != count)
    throw ParseError(labels_path + ": label count " + std::to_string(lcount) +
                     " does not match image count " + std::to_string(count));

  if (index_a < 0 || index_b < 0 || index_a >= count || index_b >= count)
    throw ParseError(images_path + ": image index out of range (count " +
                     std::to_string(count) + ")");

  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  auto read_image = [&](Index idx) {
    std::vector<unsigned char> buf(pixels);
    const std::size_t pos = 16 + static_cast<std::size_t>(idx) * pixels;
    img.seekg(static_cast<std::streamoff>(pos));
    img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
    if (!img)
      throw ParseError(images_path + ": truncated at byte offset " + std::to_string(pos));
    return buf;
  };
  const std::vector<unsigned char> imga = read_image(index_a);
  const std::vector<unsigned char> imgb = read_image(index_b);

  struct Bin {
    double r, c, mass;
  };
  auto histogram = [&](const std::vector<unsigned char>& px, Index idx) {
    std::vector<Bin> bins;
    double total = 0.0;
    for (std::size_t k = 0; k < pixels; ++k) {
      if (px[k] == 0) continue;
      bins.push_back(Bin{static_cast<double>(k / cols), static_cast<double>(k % cols),
                         static_cast<double>(px[k])});
      total += static_cast<double>(px[k]);
    }
    if (bins.empty())
      throw ParseError(images_path + ": image " + std::to_string(idx) +
                       " is all zero, empty histogram");
    for (Bin& b : bins) b.mass /= total;
    return bins;
  };
  const std::vector<Bin> ha = histogram(imga, index_a);
  const std::vector<Bin> hb = histogram(imgb, index_b);

  ProblemSpec spec;
  spec.n = static_cast<Index>(ha.size());
  spec.m = static_cast<Index>(hb.size());
  spec.a.reserve(ha.size());
  spec.b.reserve(hb.size());
  for (const Bin& x : ha) spec.a.push_back(x.mass);
  for (const Bin& x : hb) spec.b.push_back(x.mass);
  spec.c.resize(ha.size() * hb.size());
  double cmax = 0.0;
  for (std::size_t i = 0; i < ha.size(); ++i) {
    for (std::size_t j = 0; j < hb.size(); ++j) {
      const double dr = ha[i].r - hb[j].r;
      const double dc = ha[i].c - hb[j].c;
      const double d = dr * dr + dc * dc;
      spec.c[i * hb.size() + j] = d;
      cmax = std::max(cmax, d);
    }
  }
  if (cmax > 0.0)
    for (double& v : spec.c) v /= cmax;
  spec.lambda = 0.1;
  spec.penalty = Penalty::L2;
  spec.epsilon = 0.0;
  return spec;
}

}  // namespace uot
