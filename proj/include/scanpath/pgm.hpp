#pragma once

#include "scanpath/scene.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace scanpath::pgm {

namespace detail {

inline void skip_space_and_comments(std::istream& in) {
    while (in) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
}

inline int read_header_int(std::istream& in) {
    skip_space_and_comments(in);
    int v = -1;
    if (!(in >> v)) throw Error("malformed PGM header");
    return v;
}

}  // namespace detail

/// Binary P5, maxval 255. Scale is not stored in the file.
inline Scene read(std::istream& in, double scale_um_per_px) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') throw Error("not a binary PGM (P5) file");
    const int w = detail::read_header_int(in);
    const int h = detail::read_header_int(in);
    const int maxval = detail::read_header_int(in);
    if (maxval != 255) throw Error("only 8-bit PGM (maxval 255) is supported");
    if (!std::isspace(in.get())) throw Error("malformed PGM header");
    Scene scene(w, h, scale_um_per_px);
    in.read(reinterpret_cast<char*>(scene.pixels().data()), static_cast<std::streamsize>(scene.pixels().size()));
    if (in.gcount() != static_cast<std::streamsize>(scene.pixels().size())) throw Error("truncated PGM raster");
    return scene;
}

inline Scene read_file(const std::string& path, double scale_um_per_px) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return read(in, scale_um_per_px);
}

inline void write(std::ostream& out, const Scene& scene) {
    out << "P5\n" << scene.width() << ' ' << scene.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(scene.pixels().data()), static_cast<std::streamsize>(scene.pixels().size()));
}

inline void write_file(const std::string& path, const Scene& scene) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    write(out, scene);
}

}  // namespace scanpath::pgm
