#include "polydither/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace polydither {

namespace {

// Skips PNM whitespace and '#' comments, then reads one unsigned integer.
int pnmInt(std::istream& is) {
    int c = is.get();
    while (c == '#' || std::isspace(c)) {
        if (c == '#')
            while (c != '\n' && c != EOF)
                c = is.get();
        c = is.get();
    }
    int value = -1;
    while (c >= '0' && c <= '9') {
        value = (value < 0 ? 0 : value) * 10 + (c - '0');
        c = is.get();
    }
    if (value < 0)
        throw ImageIOError("malformed PNM header");
    return value;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void pngFail(const std::string& what) {
    throw ImageIOError("png: " + what);
}

}  // namespace

GrayImage readPGM(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ImageIOError("cannot open " + path);
    char p, kind;
    f.get(p);
    f.get(kind);
    if (p != 'P' || (kind != '5' && kind != '2'))
        throw ImageIOError(path + " is not a P5/P2 PGM file");
    int w = pnmInt(f), h = pnmInt(f), maxval = pnmInt(f);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 255)
        throw ImageIOError("unsupported PGM geometry or maxval in " + path);
    GrayImage img(w, h);
    if (kind == '5') {
        f.read(reinterpret_cast<char*>(img.pixels.data()),
               static_cast<std::streamsize>(img.pixels.size()));
        if (f.gcount() != static_cast<std::streamsize>(img.pixels.size()))
            throw ImageIOError("truncated PGM data in " + path);
    } else {
        for (auto& px : img.pixels)
            px = static_cast<std::uint8_t>(pnmInt(f));
    }
    if (maxval != 255)
        for (auto& px : img.pixels)
            px = static_cast<std::uint8_t>(px * 255 / maxval);
    return img;
}

void writePGM(const GrayImage& image, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ImageIOError("cannot write " + path);
    f << "P5\n" << image.width << " " << image.height << "\n255\n";
    f.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

void writePBM(const BinaryImage& image, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ImageIOError("cannot write " + path);
    f << "P4\n" << image.width << " " << image.height << "\n";
    int rowBytes = (image.width + 7) / 8;
    std::vector<std::uint8_t> row(rowBytes);
    for (int y = 0; y < image.height; ++y) {
        std::fill(row.begin(), row.end(), 0);
        for (int x = 0; x < image.width; ++x)
            if (image.at(x, y))
                row[x >> 3] |= static_cast<std::uint8_t>(0x80u >> (x & 7));
        f.write(reinterpret_cast<const char*>(row.data()), rowBytes);
    }
}

BinaryImage readPBM(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ImageIOError("cannot open " + path);
    char p, kind;
    f.get(p);
    f.get(kind);
    if (p != 'P' || kind != '4')
        throw ImageIOError(path + " is not a P4 PBM file");
    int w = pnmInt(f), h = pnmInt(f);
    if (w < 1 || h < 1)
        throw ImageIOError("bad PBM geometry in " + path);
    BinaryImage img(w, h);
    int rowBytes = (w + 7) / 8;
    std::vector<char> row(rowBytes);
    for (int y = 0; y < h; ++y) {
        f.read(row.data(), rowBytes);
        if (f.gcount() != rowBytes)
            throw ImageIOError("truncated PBM data in " + path);
        for (int x = 0; x < w; ++x)
            img.at(x, y) = (static_cast<std::uint8_t>(row[x >> 3]) >> (7 - (x & 7))) & 1;
    }
    return img;
}

GrayImage readGrayPNG(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f)
        throw ImageIOError("cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                             nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        pngFail("allocation failed");
    }
    GrayImage img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        pngFail("error reading " + path);
    }
    png_init_io(png, f.get());
    png_read_info(png, info);
    png_uint_32 w = png_get_image_width(png, info), h = png_get_image_height(png, info);
    int depth = png_get_bit_depth(png, info), color = png_get_color_type(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageIOError(path + " is not a grayscale PNG");
    }
    if (depth == 16)
        png_set_strip_16(png);
    if (depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * w;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

namespace {

void writePNG8(const std::uint8_t* pixels, int width, int height, const std::string& path,
               const std::string& provenance) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw ImageIOError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                              nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        pngFail("allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        pngFail("error writing " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (!provenance.empty()) {
        png_text text;
        std::memset(&text, 0, sizeof(text));
        char key[] = "provenance";
        text.compression = PNG_TEXT_COMPRESSION_NONE;
        text.key = key;
        text.text = const_cast<char*>(provenance.c_str());
        text.text_length = provenance.size();
        png_set_text(png, info, &text, 1);
    }
    png_write_info(png, info);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(pixels + static_cast<std::size_t>(y) * width);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void writeGrayPNG(const GrayImage& image, const std::string& path,
                  const std::string& provenance) {
    writePNG8(image.pixels.data(), image.width, image.height, path, provenance);
}

void writeBinaryPNG(const BinaryImage& image, const std::string& path,
                    const std::string& provenance) {
    std::vector<std::uint8_t> gray(image.pixels.size());
    for (std::size_t i = 0; i < gray.size(); ++i)
        gray[i] = image.pixels[i] ? 0 : 255;
    writePNG8(gray.data(), image.width, image.height, path, provenance);
}

void writeGray16PNG(const std::vector<std::uint16_t>& pixels, int width, int height,
                    const std::string& path) {
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw ImageIOError("16-bit pixel buffer size mismatch");
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw ImageIOError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                              nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        pngFail("allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        pngFail("error writing " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    // PNG is big-endian; swap on the way out.
    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 2);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::uint16_t v = pixels[static_cast<std::size_t>(y) * width + x];
            row[2 * x] = static_cast<std::uint8_t>(v >> 8);
            row[2 * x + 1] = static_cast<std::uint8_t>(v & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

namespace {

bool endsWith(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

GrayImage readGrayImage(const std::string& path) {
    if (endsWith(path, ".png"))
        return readGrayPNG(path);
    if (endsWith(path, ".pgm"))
        return readPGM(path);
    throw ImageIOError("unsupported input image format: " + path);
}

void writeBinaryImage(const BinaryImage& image, const std::string& path,
                      const std::string& provenance) {
    if (endsWith(path, ".png")) {
        writeBinaryPNG(image, path, provenance);
    } else if (endsWith(path, ".pbm")) {
        writePBM(image, path);
    } else if (endsWith(path, ".pgm")) {
        GrayImage gray(image.width, image.height);
        for (std::size_t i = 0; i < gray.pixels.size(); ++i)
            gray.pixels[i] = image.pixels[i] ? 0 : 255;
        writePGM(gray, path);
    } else {
        throw ImageIOError("unsupported output image format: " + path);
    }
}

}  // namespace polydither
