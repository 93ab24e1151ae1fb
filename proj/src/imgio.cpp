#include "mammoscope/imgio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "mammoscope/error.hpp"

namespace mammoscope {
namespace {

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#'-to-end-of-line comments.
  void skip_header_space() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads one unsigned decimal token. Returns false at end of input.
  bool next_number(std::uint64_t& out, Errc on_garbage, const char* what) {
    skip_header_space();
    if (pos_ >= bytes_.size()) return false;
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') ++pos_;
    auto first = reinterpret_cast<const char*>(bytes_.data() + start);
    auto last = reinterpret_cast<const char*>(bytes_.data() + pos_);
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
      throw Error(on_garbage, std::string("non-numeric ") + what + " token '" + std::string(first, last) + "'");
    }
    return true;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::uint8_t at(std::size_t i) const { return bytes_[i]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint64_t header_value(Cursor& cur, const char* what) {
  std::uint64_t v = 0;
  if (!cur.next_number(v, Errc::MalformedHeader, what)) {
    throw Error(Errc::MalformedHeader, std::string("missing ") + what);
  }
  return v;
}

}  // namespace

RawImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw Error(Errc::MalformedHeader, "expected magic P2 or P5");
  }
  const bool binary = bytes[1] == '5';
  if (bytes.size() > 2 && !is_space(bytes[2]) && bytes[2] != '#') {
    throw Error(Errc::MalformedHeader, "magic must be followed by whitespace");
  }
  Cursor cur(bytes);
  cur.advance(2);

  RawImage raw;
  std::uint64_t w = header_value(cur, "width");
  std::uint64_t h = header_value(cur, "height");
  std::uint64_t maxval = header_value(cur, "maxval");
  if (w == 0 || h == 0) throw Error(Errc::MalformedHeader, "width and height must be positive");
  if (maxval == 0 || maxval > 65535) throw Error(Errc::MalformedHeader, "maxval must be in [1, 65535]");
  raw.width = static_cast<std::size_t>(w);
  raw.height = static_cast<std::size_t>(h);
  raw.maxval = static_cast<std::uint32_t>(maxval);
  const std::size_t count = raw.width * raw.height;
  raw.samples.resize(count);

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (cur.remaining() == 0 || !is_space(cur.at(cur.pos()))) {
      throw Error(Errc::TruncatedData, "missing raster");
    }
    cur.advance(1);
    const std::size_t bps = raw.maxval > 255 ? 2 : 1;
    if (cur.remaining() < count * bps) {
      throw Error(Errc::TruncatedData, "expected " + std::to_string(count * bps) + " raster bytes, got " +
                                           std::to_string(cur.remaining()));
    }
    std::size_t p = cur.pos();
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t s = bps == 2 ? (std::uint32_t{cur.at(p)} << 8) | cur.at(p + 1) : cur.at(p);
      p += bps;
      if (s > raw.maxval) throw Error(Errc::SampleOutOfRange, "sample " + std::to_string(s) + " exceeds maxval");
      raw.samples[i] = s;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t s = 0;
      if (!cur.next_number(s, Errc::MalformedHeader, "sample")) {
        throw Error(Errc::TruncatedData, "expected " + std::to_string(count) + " samples, got " + std::to_string(i));
      }
      if (s > raw.maxval) throw Error(Errc::SampleOutOfRange, "sample " + std::to_string(s) + " exceeds maxval");
      raw.samples[i] = static_cast<std::uint32_t>(s);
    }
  }
  return raw;
}

RawImage read_pgm_file(const std::filesystem::path& path) {
  auto bytes = read_file(path);
  return read_pgm(bytes);
}

std::vector<std::uint8_t> encode_pgm(const RawImage& raw, bool binary) {
  std::string header = std::string(binary ? "P5" : "P2") + "\n" + std::to_string(raw.width) + "\n" +
                       std::to_string(raw.height) + "\n" + std::to_string(raw.maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (binary) {
    const bool wide = raw.maxval > 255;
    out.reserve(out.size() + raw.samples.size() * (wide ? 2 : 1));
    for (std::uint32_t s : raw.samples) {
      if (wide) out.push_back(static_cast<std::uint8_t>(s >> 8));
      out.push_back(static_cast<std::uint8_t>(s & 0xff));
    }
  } else {
    std::string body;
    for (std::size_t y = 0; y < raw.height; ++y) {
      for (std::size_t x = 0; x < raw.width; ++x) {
        if (x) body += ' ';
        body += std::to_string(raw.samples[y * raw.width + x]);
      }
      body += '\n';
    }
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

GrayImage to_gray(const RawImage& raw) {
  GrayImage img(raw.width, raw.height);
  const double scale = static_cast<double>(raw.maxval);
  std::transform(raw.samples.begin(), raw.samples.end(), img.pixels.begin(),
                 [scale](std::uint32_t s) { return static_cast<double>(s) / scale; });
  return img;
}

RawImage quantize(const GrayImage& img, std::uint32_t maxval) {
  if (maxval == 0 || maxval > 65535) throw Error(Errc::InvalidArgument, "maxval must be in [1, 65535]");
  RawImage raw{img.width, img.height, maxval, std::vector<std::uint32_t>(img.pixels.size())};
  const double m = static_cast<double>(maxval);
  std::transform(img.pixels.begin(), img.pixels.end(), raw.samples.begin(), [m](double p) {
    double q = std::floor(p * m + 0.5);
    return static_cast<std::uint32_t>(std::clamp(q, 0.0, m));
  });
  return raw;
}

std::vector<std::uint8_t> write_pgm(const GrayImage& img, std::uint32_t maxval, bool binary) {
  return encode_pgm(quantize(img, maxval), binary);
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "write failed for '" + path.string() + "'");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace mammoscope
