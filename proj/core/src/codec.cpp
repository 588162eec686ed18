#include "quakescore/codec.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "atomic_file.hpp"
#include "quakescore/error.hpp"

namespace quakescore {
namespace {

// Decoded PNG in its stored layout; only sub-byte samples are unpacked.
struct RawPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int channels = 0;
  std::vector<Rgb> palette;
  std::vector<png_byte> pixels;  // height rows of rowbytes each
  std::size_t rowbytes = 0;
};

struct ErrorSink {
  char message[256] = {};
};

extern "C" void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

extern "C" void on_png_warning(png_structp, png_const_charp) {}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw InputError(path.string() + ": " + what);
}

// Every C++ object touched after setjmp is owned by the caller, so a
// longjmp out of libpng never skips a destructor in this frame.
bool decode(std::FILE* fp, RawPng& out, ErrorSink& sink) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (png == nullptr) {
    std::snprintf(sink.message, sizeof(sink.message), "out of memory");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep>* rows = new std::vector<png_bytep>();

  if (setjmp(png_jmpbuf(png))) {
    delete rows;
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  if (info == nullptr) png_error(png, "out of memory");

  png_init_io(png, fp);
  png_read_info(png, info);
  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  out.color_type = png_get_color_type(png, info);
  out.channels = png_get_channels(png, info);

  png_colorp palette = nullptr;
  int num_palette = 0;
  if (out.color_type == PNG_COLOR_TYPE_PALETTE &&
      png_get_PLTE(png, info, &palette, &num_palette) != 0) {
    out.palette.resize(static_cast<std::size_t>(num_palette));
    for (int i = 0; i < num_palette; ++i) {
      out.palette[i] = Rgb{palette[i].red, palette[i].green, palette[i].blue};
    }
  }

  // Sub-byte palette and grayscale samples are unpacked to one byte each
  // without rescaling, so indices and class codes survive unchanged.
  if (out.bit_depth < 8) png_set_packing(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  out.rowbytes = png_get_rowbytes(png, info);
  out.pixels.resize(out.rowbytes * out.height);
  rows->resize(out.height);
  for (png_uint_32 y = 0; y < out.height; ++y) {
    (*rows)[y] = out.pixels.data() + y * out.rowbytes;
  }
  png_read_image(png, rows->data());
  png_read_end(png, nullptr);

  delete rows;
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

RawPng read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(path, std::string("cannot open: ") + std::strerror(errno));

  png_byte signature[8] = {};
  if (std::fread(signature, 1, sizeof(signature), fp.get()) != sizeof(signature) ||
      png_sig_cmp(signature, 0, sizeof(signature)) != 0) {
    fail(path, "not a PNG file");
  }
  std::rewind(fp.get());

  RawPng raw;
  ErrorSink sink;
  if (!decode(fp.get(), raw, sink)) fail(path, std::string("decode error: ") + sink.message);
  if (raw.width == 0 || raw.height == 0) fail(path, "zero width or height");
  return raw;
}

struct PngWriteSpec {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 8;
  int color_type = PNG_COLOR_TYPE_GRAY;
  std::vector<png_color> palette;
  const std::vector<png_byte>* pixels = nullptr;
  std::size_t rowbytes = 0;
};

bool encode(std::FILE* fp, const PngWriteSpec& spec, ErrorSink& sink) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (png == nullptr) {
    std::snprintf(sink.message, sizeof(sink.message), "out of memory");
    return false;
  }
  png_infop info = png_create_info_struct(png);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  if (info == nullptr) png_error(png, "out of memory");

  png_init_io(png, fp);
  png_set_IHDR(png, info, spec.width, spec.height, spec.bit_depth, spec.color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (!spec.palette.empty()) {
    png_set_PLTE(png, info, spec.palette.data(), static_cast<int>(spec.palette.size()));
  }
  png_write_info(png, info);
  for (png_uint_32 y = 0; y < spec.height; ++y) {
    png_write_row(png, spec.pixels->data() + y * spec.rowbytes);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void write_png(const std::filesystem::path& path, const PngWriteSpec& spec) {
  detail::AtomicFile file(path);
  ErrorSink sink;
  if (!encode(file.stream(), spec, sink)) fail(path, std::string("encode error: ") + sink.message);
  file.commit();
}

std::string at_xy(std::size_t i, std::size_t width) {
  std::ostringstream os;
  os << "(" << i % width << "," << i / width << ")";
  return os.str();
}

std::optional<DamageClass> class_of_color(Rgb c) noexcept {
  for (DamageClass cls : kAllClasses) {
    if (color_of(cls) == c) return cls;
  }
  return std::nullopt;
}

}  // namespace

SegMask load_mask(const std::filesystem::path& path) {
  const RawPng raw = read_png(path);
  const bool packed_ok = raw.color_type == PNG_COLOR_TYPE_PALETTE ||
                         raw.color_type == PNG_COLOR_TYPE_GRAY;
  if (raw.bit_depth != 8 && !(packed_ok && raw.bit_depth < 8)) {
    fail(path, "expected 8-bit mask, got " + std::to_string(raw.bit_depth) + "-bit");
  }

  const std::size_t width = raw.width;
  const std::size_t n = std::size_t{raw.width} * raw.height;
  std::vector<DamageClass> classes(n);

  switch (raw.color_type) {
    case PNG_COLOR_TYPE_PALETTE: {
      std::vector<std::optional<DamageClass>> lut(raw.palette.size());
      for (std::size_t i = 0; i < raw.palette.size(); ++i) {
        lut[i] = class_of_color(raw.palette[i]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t entry = raw.pixels[(i / width) * raw.rowbytes + i % width];
        if (entry >= lut.size()) {
          fail(path, "palette index " + std::to_string(entry) + " out of range at " +
                         at_xy(i, width));
        }
        if (!lut[entry]) fail(path, "unknown class color at " + at_xy(i, width));
        classes[i] = *lut[entry];
      }
      break;
    }
    case PNG_COLOR_TYPE_RGB: {
      for (std::size_t i = 0; i < n; ++i) {
        const png_byte* p = raw.pixels.data() + (i / width) * raw.rowbytes + 3 * (i % width);
        const auto cls = class_of_color(Rgb{p[0], p[1], p[2]});
        if (!cls) fail(path, "unknown class color at " + at_xy(i, width));
        classes[i] = *cls;
      }
      break;
    }
    case PNG_COLOR_TYPE_GRAY: {
      for (std::size_t i = 0; i < n; ++i) {
        const int value = raw.pixels[(i / width) * raw.rowbytes + i % width];
        const auto cls = damage_class_from_code(value);
        if (!cls) fail(path, "unknown class value " + std::to_string(value) + " at " + at_xy(i, width));
        classes[i] = *cls;
      }
      break;
    }
    default:
      fail(path, "unsupported mask color type (expected palette, RGB or grayscale)");
  }
  return SegMask(raw.width, raw.height, std::move(classes));
}

void save_mask(const SegMask& mask, const std::filesystem::path& path) {
  std::vector<png_byte> pixels(mask.pixel_count());
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = code(mask[i]);

  PngWriteSpec spec;
  spec.width = static_cast<png_uint_32>(mask.width());
  spec.height = static_cast<png_uint_32>(mask.height());
  spec.bit_depth = 8;
  spec.color_type = PNG_COLOR_TYPE_PALETTE;
  for (const Rgb& c : kClassColors) spec.palette.push_back(png_color{c.r, c.g, c.b});
  spec.pixels = &pixels;
  spec.rowbytes = mask.width();
  write_png(path, spec);
}

DepthMap load_depth(const std::filesystem::path& path) {
  const RawPng raw = read_png(path);
  if (raw.color_type != PNG_COLOR_TYPE_GRAY || raw.channels != 1) {
    fail(path, "expected single-channel grayscale depth");
  }
  if (raw.bit_depth != 16) {
    fail(path, "expected 16-bit depth, got " + std::to_string(raw.bit_depth) + "-bit");
  }

  const std::size_t width = raw.width;
  std::vector<double> values(std::size_t{raw.width} * raw.height);
  for (std::size_t i = 0; i < values.size(); ++i) {
    // PNG stores 16-bit samples big-endian.
    const png_byte* p = raw.pixels.data() + (i / width) * raw.rowbytes + 2 * (i % width);
    values[i] = static_cast<double>((unsigned{p[0]} << 8) | p[1]);
  }
  return DepthMap(raw.width, raw.height, std::move(values));
}

void save_depth(const DepthMap& depth, const std::filesystem::path& path) {
  const auto values = depth.values();
  std::vector<png_byte> pixels(2 * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (v > 65535.0 || v != std::floor(v)) {
      fail(path, "depth value " + std::to_string(v) + " at " + at_xy(i, depth.width()) +
                     " is not a 16-bit sample");
    }
    const auto s = static_cast<unsigned>(v);
    pixels[2 * i] = static_cast<png_byte>(s >> 8);
    pixels[2 * i + 1] = static_cast<png_byte>(s & 0xFF);
  }

  PngWriteSpec spec;
  spec.width = static_cast<png_uint_32>(depth.width());
  spec.height = static_cast<png_uint_32>(depth.height());
  spec.bit_depth = 16;
  spec.color_type = PNG_COLOR_TYPE_GRAY;
  spec.pixels = &pixels;
  spec.rowbytes = 2 * depth.width();
  write_png(path, spec);
}

}  // namespace quakescore
