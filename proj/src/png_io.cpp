#include "shforge/png_io.hpp"

#include <png.h>

#include <cstring>

#include "shforge/error.hpp"

namespace shforge {

void write_png(const std::filesystem::path& path, const ImageU8& img) {
  require(!img.empty(), "write_png: empty image");
  require(img.channels() == 1 || img.channels() == 3,
          "write_png: expected 1 or 3 channels");

  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  if (!png_image_write_to_file(&png, path.string().c_str(), 0, img.data(), 0,
                               nullptr)) {
    throw IoError("png write failed: " + path.string() + ": " + png.message);
  }
}

ImageU8 read_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;

  if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
    throw IoError("png read failed: " + path.string() + ": " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  ImageU8 img(static_cast<int>(png.width), static_cast<int>(png.height),
              color ? 3 : 1);
  if (!png_image_finish_read(&png, nullptr, img.data(), 0, nullptr)) {
    png_image_free(&png);
    throw IoError("png read failed: " + path.string() + ": " + png.message);
  }
  return img;
}

}  // namespace shforge
