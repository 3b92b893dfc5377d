#include "prt/error.hpp"
#include "prt/io.hpp"

#include <fstream>
#include <sstream>

namespace prt {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw LoadError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw LoadError("cannot write " + path.string());
        out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw LoadError("write failed for " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_light_file(const std::filesystem::path &path, const LightCoeffs &l) {
    std::ostringstream os;
    write_sh_text(os, l);
    const std::string s = os.str();
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t *>(s.data()), s.size()));
}

LightCoeffs read_light_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw LoadError("cannot open light file " + path.string());
    try {
        return read_sh_rgb_text(in);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.detail(), e.offset());
    }
}

}  // namespace prt
