#include "qvsum/image.hpp"

#include <png.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "qvsum/error.hpp"

namespace qvsum {
namespace {

struct Netpbm {
  char kind = 0;  // '2', '3', '5' or '6'
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> samples;  // channels * width * height
};

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string dummy;
      std::getline(in, dummy);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_value(std::istream& in, const std::filesystem::path& path) {
  skip_space_and_comments(in);
  long long v = -1;
  in >> v;
  if (!in || v < 0) throw InputError("malformed netpbm header: " + path.string());
  return static_cast<std::size_t>(v);
}

Netpbm read_netpbm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open image: " + path.string());
  std::array<char, 2> magic{};
  in.read(magic.data(), 2);
  if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' &&
                                 magic[1] != '6')) {
    throw InputError("not a PPM/PGM file: " + path.string());
  }
  Netpbm img;
  img.kind = magic[1];
  img.width = read_header_value(in, path);
  img.height = read_header_value(in, path);
  const std::size_t maxval = read_header_value(in, path);
  if (maxval == 0 || maxval > 255) {
    throw InputError("only 8-bit netpbm images are supported: " + path.string());
  }
  const std::size_t channels = (img.kind == '3' || img.kind == '6') ? 3 : 1;
  const std::size_t count = channels * img.width * img.height;
  img.samples.resize(count);
  if (img.kind == '5' || img.kind == '6') {
    in.get();  // single whitespace byte after maxval
    in.read(reinterpret_cast<char*>(img.samples.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
      throw InputError("truncated image data: " + path.string());
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      int v = -1;
      in >> v;
      if (!in || v < 0 || static_cast<std::size_t>(v) > maxval) {
        throw InputError("bad ascii sample in " + path.string());
      }
      img.samples[k] = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& v : img.samples) v = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  }
  return img;
}

RgbImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
    throw InputError("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbImage out(image.width, image.height);
  if (png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr) == 0) {
    png_image_free(&image);
    throw InputError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  return out;
}

}  // namespace

RgbImage read_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw InputError("cannot open image: " + path.string());
  std::array<unsigned char, 8> sig{};
  probe.read(reinterpret_cast<char*>(sig.data()), sig.size());
  probe.close();
  if (png_sig_cmp(sig.data(), 0, sig.size()) == 0) return read_png(path);

  Netpbm pnm = read_netpbm(path);
  RgbImage out(pnm.width, pnm.height);
  if (pnm.kind == '3' || pnm.kind == '6') {
    out.pixels = std::move(pnm.samples);
  } else {
    for (std::size_t p = 0; p < out.area(); ++p) {
      out.pixels[3 * p] = out.pixels[3 * p + 1] = out.pixels[3 * p + 2] = pnm.samples[p];
    }
  }
  return out;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  Netpbm pnm = read_netpbm(path);
  if (pnm.kind != '2' && pnm.kind != '5') throw InputError("expected a PGM file: " + path.string());
  return GrayImage{pnm.width, pnm.height, std::move(pnm.samples)};
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

}  // namespace qvsum
