#include "prt/error.hpp"
#include "prt/geometry.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace prt {

namespace {

struct Corner {
    int v = 0, vt = 0, vn = 0;  // 0-based, -1 when absent
    auto key() const { return std::tie(v, vt, vn); }
    bool operator<(const Corner &o) const { return key() < o.key(); }
};

int resolve(int idx, std::size_t count, std::size_t line_offset) {
    if (idx > 0 && static_cast<std::size_t>(idx) <= count)
        return idx - 1;
    if (idx < 0 && static_cast<std::size_t>(-idx) <= count)
        return static_cast<int>(count) + idx;
    throw ParseError("OBJ index " + std::to_string(idx) + " out of range", line_offset);
}

}  // namespace

void load_obj(TriScene &scene, const std::filesystem::path &path, std::uint32_t material) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw LoadError("cannot open OBJ file " + path.string());

    std::vector<Vec3> positions, normals;
    std::vector<Vec2> uvs;
    std::map<Corner, std::uint32_t> vertex_of;
    std::string line;
    std::size_t offset = 0;

    while (std::getline(in, line)) {
        const std::size_t line_offset = offset;
        offset += line.size() + 1;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#')
            continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z()))
                throw ParseError("malformed OBJ vertex", line_offset);
            positions.push_back(p);
        } else if (tag == "vn") {
            Vec3 n;
            if (!(ls >> n.x() >> n.y() >> n.z()))
                throw ParseError("malformed OBJ normal", line_offset);
            normals.push_back(n);
        } else if (tag == "vt") {
            Vec2 t;
            if (!(ls >> t.x() >> t.y()))
                throw ParseError("malformed OBJ texture coordinate", line_offset);
            uvs.push_back(t);
        } else if (tag == "f") {
            std::vector<Corner> corners;
            std::string tok;
            while (ls >> tok) {
                Corner c{-1, -1, -1};
                int parts[3] = {0, 0, 0};
                bool present[3] = {false, false, false};
                std::size_t start = 0;
                for (int k = 0; k < 3 && start <= tok.size(); ++k) {
                    const std::size_t slash = tok.find('/', start);
                    const std::string field = tok.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
                    if (!field.empty()) {
                        try {
                            parts[k] = std::stoi(field);
                        } catch (const std::exception &) {
                            throw ParseError("malformed OBJ face index '" + tok + "'", line_offset);
                        }
                        present[k] = true;
                    }
                    if (slash == std::string::npos)
                        break;
                    start = slash + 1;
                }
                if (!present[0])
                    throw ParseError("OBJ face corner without a vertex index", line_offset);
                c.v = resolve(parts[0], positions.size(), line_offset);
                if (present[1])
                    c.vt = resolve(parts[1], uvs.size(), line_offset);
                if (present[2])
                    c.vn = resolve(parts[2], normals.size(), line_offset);
                corners.push_back(c);
            }
            if (corners.size() < 3)
                throw ParseError("OBJ face with fewer than three corners", line_offset);

            // Faces lacking normals get the face normal on unshared vertices.
            Vec3 face_n = (positions[corners[1].v] - positions[corners[0].v])
                              .cross(positions[corners[2].v] - positions[corners[0].v]);
            std::vector<std::uint32_t> ids;
            for (const Corner &c : corners) {
                const Vec2 uv = c.vt >= 0 ? uvs[c.vt] : Vec2::Zero();
                if (c.vn < 0) {
                    ids.push_back(scene.add_vertex(positions[c.v], face_n, uv));
                    continue;
                }
                auto it = vertex_of.find(c);
                if (it == vertex_of.end())
                    it = vertex_of.emplace(c, scene.add_vertex(positions[c.v], normals[c.vn], uv)).first;
                ids.push_back(it->second);
            }
            for (std::size_t k = 1; k + 1 < ids.size(); ++k)
                scene.add_triangle(ids[0], ids[k], ids[k + 1], material);
        }
        // other statements (o, g, s, usemtl, mtllib) are ignored
    }
}

}  // namespace prt
