#include "mitfas/image_io.hpp"

#include "mitfas/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace fs = std::filesystem;

namespace mitfas {

namespace {

std::string lower_ext(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
bool next_token(std::istream& in, std::string& token) {
    token.clear();
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) return false;
    token.push_back(static_cast<char>(c));
    while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') token.push_back(static_cast<char>(in.get()));
    return true;
}

Frame read_netpbm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    const auto fail = [&](const std::string& why) { return InputError("cannot decode " + path.string() + ": " + why); };

    std::string magic, w, h, maxval;
    if (!next_token(in, magic) || (magic != "P5" && magic != "P6")) throw fail("not a binary PGM/PPM file");
    if (!next_token(in, w) || !next_token(in, h) || !next_token(in, maxval)) throw fail("truncated header");
    int width = 0, height = 0, max = 0;
    try {
        width = std::stoi(w);
        height = std::stoi(h);
        max = std::stoi(maxval);
    } catch (const std::exception&) {
        throw fail("malformed header");
    }
    if (width < 1 || height < 1) throw fail("nonpositive dimensions");
    if (max < 1 || max > 255) throw fail("only 8-bit samples are supported");
    in.get();  // single whitespace byte after maxval

    const int channels = magic == "P5" ? 1 : 3;
    std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * channels);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size())) throw fail("truncated pixel data");
    if (max != 255) {
        for (auto& v : data) v = static_cast<std::uint8_t>((std::min<int>(v, max) * 255 + max / 2) / max);
    }
    return Frame(width, height, channels, std::move(data));
}

Frame read_png(const fs::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw InputError("cannot decode " + path.string() + ": " + image.message);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
    png_color background{0, 0, 0};
    if (!png_image_finish_read(&image, &background, data.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw InputError("cannot decode " + path.string() + ": " + msg);
    }
    return Frame(static_cast<int>(image.width), static_cast<int>(image.height), color ? 3 : 1, std::move(data));
}

void write_netpbm(const fs::path& path, int width, int height, int channels, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + path.string());
    out << (channels == 1 ? "P5" : "P6") << '\n' << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw RuntimeError("write failed for " + path.string());
}

}  // namespace

Frame read_image(const fs::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".pgm" || ext == ".ppm") return read_netpbm(path);
    if (ext == ".png") return read_png(path);
    throw InputError("unsupported image format: " + path.string());
}

void write_pgm(const fs::path& path, const PixelPatch& patch) {
    write_netpbm(path, patch.width(), patch.height(), 1, patch.values());
}

void write_pgm(const fs::path& path, const Frame& frame) {
    write_netpbm(path, frame.width(), frame.height(), frame.channels(), frame.values());
}

void write_png(const fs::path& path, const PixelPatch& patch) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(patch.width());
    image.height = static_cast<png_uint_32>(patch.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, patch.values().data(), 0, nullptr)) {
        throw RuntimeError("cannot write " + path.string() + ": " + image.message);
    }
}

void write_patch(const fs::path& path, const PixelPatch& patch, PatchFormat format) {
    if (format == PatchFormat::Png) {
        write_png(path, patch);
    } else {
        write_pgm(path, patch);
    }
}

const char* patch_extension(PatchFormat format) noexcept { return format == PatchFormat::Png ? ".png" : ".pgm"; }

}  // namespace mitfas
