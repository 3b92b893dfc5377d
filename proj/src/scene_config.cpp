#include "prt/scene_config.hpp"

#include "prt/error.hpp"
#include "prt/io.hpp"

#include <fstream>
#include <sstream>

namespace prt {

using nlohmann::json;

namespace {

Vec3 read_vec3(const json &j, const char *key) {
    if (!j.is_array() || j.size() != 3)
        throw ArgumentError(std::string("'") + key + "' must be an array of three numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number())
            throw ArgumentError(std::string("'") + key + "' must be an array of three numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

template <typename T> T get_or(const json &j, const char *key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ArgumentError(std::string("config field '") + key + "' has the wrong type");
    }
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

void require_file(const std::filesystem::path &p, const char *what) {
    if (!std::filesystem::exists(p))
        throw LoadError(std::string(what) + " not found: " + p.string());
}

SphereSampler::Kind parse_transport_sampling(const std::string &s) {
    if (s == "stratified")
        return SphereSampler::Kind::Stratified;
    if (s == "uniform")
        return SphereSampler::Kind::Independent;
    throw ArgumentError("transport sampling must be 'stratified' or 'uniform'");
}

MaterialConfig parse_material(const json &j, const std::filesystem::path &base) {
    MaterialConfig m;
    m.name = get_or<std::string>(j, "name", m.name);
    if (j.contains("albedo"))
        m.albedo = read_vec3(j["albedo"], "albedo");
    m.roughness = get_or(j, "roughness", m.roughness);
    m.metallic = get_or(j, "metallic", m.metallic);
    m.transparency = get_or(j, "transparency", m.transparency);
    for (double v : {m.albedo.x(), m.albedo.y(), m.albedo.z(), m.roughness, m.metallic, m.transparency})
        if (!(v >= 0.0 && v <= 1.0))
            throw ArgumentError("material '" + m.name + "' has a parameter outside [0, 1]");
    if (j.contains("albedo_texture")) {
        m.albedo_texture = resolve(base, j["albedo_texture"].get<std::string>());
        require_file(*m.albedo_texture, "albedo texture");
    }
    return m;
}

}  // namespace

json parse_json_text(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
}

json load_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw LoadError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json_text(ss.str());
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.detail(), e.offset());
    }
}

SceneConfig parse_scene_config(const json &j, const std::filesystem::path &base) {
    if (!j.is_object())
        throw ArgumentError("scene config must be a JSON object");
    SceneConfig c;
    c.name = get_or<std::string>(j, "name", c.name);
    if (j.contains("mesh")) {
        const json &m = j["mesh"];
        c.mesh.type = get_or<std::string>(m, "type", c.mesh.type);
        c.mesh.radius = get_or(m, "radius", c.mesh.radius);
        c.mesh.segments = get_or(m, "segments", c.mesh.segments);
        if (c.mesh.type == "obj") {
            if (!m.contains("path"))
                throw ArgumentError("obj mesh needs a 'path'");
            c.mesh.path = resolve(base, m["path"].get<std::string>());
            require_file(c.mesh.path, "mesh");
        } else if (c.mesh.type != "sphere" && c.mesh.type != "sphere-on-plane" && c.mesh.type != "capsule-person" &&
                   c.mesh.type != "plane") {
            throw ArgumentError("unknown mesh type '" + c.mesh.type + "'");
        }
        if (!(c.mesh.radius > 0.0) || c.mesh.segments < 3)
            throw ArgumentError("mesh radius must be positive and segments >= 3");
    }
    if (c.mesh.type == "sphere-on-plane") {
        c.ground_plane.enabled = true;
        c.ground_plane.height = -c.mesh.radius;
    }
    if (j.contains("ground_plane")) {
        const json &g = j["ground_plane"];
        c.ground_plane.enabled = get_or(g, "enabled", c.ground_plane.enabled);
        c.ground_plane.camera_visible = get_or(g, "camera_visible", c.ground_plane.camera_visible);
        c.ground_plane.height = get_or(g, "height", c.ground_plane.height);
        c.ground_plane.half_extent = get_or(g, "half_extent", c.ground_plane.half_extent);
    }
    if (j.contains("materials")) {
        if (!j["materials"].is_array())
            throw ArgumentError("'materials' must be an array");
        for (const auto &m : j["materials"])
            c.materials.push_back(parse_material(m, base));
    }
    if (c.materials.empty())
        c.materials.push_back(MaterialConfig{});
    if (j.contains("camera")) {
        const json &k = j["camera"];
        if (k.contains("position"))
            c.camera.position = read_vec3(k["position"], "position");
        if (k.contains("look_at"))
            c.camera.look_at = read_vec3(k["look_at"], "look_at");
        if (k.contains("up"))
            c.camera.up = read_vec3(k["up"], "up");
        c.camera.fov = get_or(k, "fov", c.camera.fov);
        c.camera.width = get_or(k, "width", c.camera.width);
        c.camera.height = get_or(k, "height", c.camera.height);
    }
    const int degree = get_or(j, "degree", 4);
    if (degree != 2 && degree != 4)
        throw ArgumentError("degree must be 2 or 4");
    c.degree = ShDegree(degree);
    if (j.contains("transport")) {
        const json &t = j["transport"];
        c.transport_mode = parse_transport_mode(get_or<std::string>(t, "mode", to_string(c.transport_mode)));
        c.transport_samples = get_or(t, "samples", c.transport_samples);
        c.transport_sampling = parse_transport_sampling(get_or<std::string>(t, "sampling", "stratified"));
    }
    if (j.contains("pt")) {
        const json &p = j["pt"];
        c.pt_spp = get_or(p, "spp", c.pt_spp);
        c.pt_bounces = get_or(p, "bounces", c.pt_bounces);
        c.pt_sampling = parse_env_sampling(get_or<std::string>(p, "sampling", to_string(c.pt_sampling)));
        c.pt_band_limited = get_or(p, "band_limit", c.pt_band_limited);
    }
    if (c.transport_samples < 1 || c.pt_spp < 1)
        throw ArgumentError("sample counts must be >= 1");
    if (c.pt_bounces < 0 || c.pt_bounces > 1)
        throw ArgumentError("pt.bounces must be 0 or 1");
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    make_camera(c);
    return c;
}

SceneConfig load_scene_config(const std::filesystem::path &path) {
    return parse_scene_config(load_json_file(path), path.parent_path());
}

json to_json(const SceneConfig &c) {
    json mats = json::array();
    for (const auto &m : c.materials) {
        json jm = {{"name", m.name},
                   {"albedo", {m.albedo.x(), m.albedo.y(), m.albedo.z()}},
                   {"roughness", m.roughness},
                   {"metallic", m.metallic},
                   {"transparency", m.transparency}};
        if (m.albedo_texture)
            jm["albedo_texture"] = m.albedo_texture->string();
        mats.push_back(jm);
    }
    json mesh = {{"type", c.mesh.type}, {"radius", c.mesh.radius}, {"segments", c.mesh.segments}};
    if (c.mesh.type == "obj")
        mesh["path"] = c.mesh.path.string();
    const auto &k = c.camera;
    return {{"name", c.name},
            {"mesh", mesh},
            {"ground_plane",
             {{"enabled", c.ground_plane.enabled},
              {"camera_visible", c.ground_plane.camera_visible},
              {"height", c.ground_plane.height},
              {"half_extent", c.ground_plane.half_extent}}},
            {"materials", mats},
            {"camera",
             {{"position", {k.position.x(), k.position.y(), k.position.z()}},
              {"look_at", {k.look_at.x(), k.look_at.y(), k.look_at.z()}},
              {"up", {k.up.x(), k.up.y(), k.up.z()}},
              {"fov", k.fov},
              {"width", k.width},
              {"height", k.height}}},
            {"degree", c.degree.n()},
            {"transport",
             {{"mode", to_string(c.transport_mode)},
              {"samples", c.transport_samples},
              {"sampling", c.transport_sampling == SphereSampler::Kind::Stratified ? "stratified" : "uniform"}}},
            {"pt",
             {{"spp", c.pt_spp},
              {"bounces", c.pt_bounces},
              {"sampling", to_string(c.pt_sampling)},
              {"band_limit", c.pt_band_limited}}},
            {"seed", c.seed}};
}

DatasetConfig parse_dataset_config(const json &j, const std::filesystem::path &base) {
    if (!j.is_object())
        throw ArgumentError("dataset config must be a JSON object");
    DatasetConfig d;
    if (!j.contains("scenes") || !j["scenes"].is_array() || j["scenes"].empty())
        throw ArgumentError("dataset config needs a non-empty 'scenes' array");
    if (!j.contains("lights") || !j["lights"].is_array() || j["lights"].empty())
        throw ArgumentError("dataset config needs a non-empty 'lights' array");
    for (const auto &s : j["scenes"]) {
        if (s.is_string()) {
            const auto path = resolve(base, s.get<std::string>());
            require_file(path, "scene config");
            d.scenes.push_back(load_scene_config(path));
        } else {
            d.scenes.push_back(parse_scene_config(s, base));
        }
    }
    for (const auto &l : j["lights"]) {
        LightSpec spec;
        if (l.is_string()) {
            spec.env = l.get<std::string>();
        } else {
            if (!l.contains("env"))
                throw ArgumentError("light entry needs an 'env'");
            spec.env = l["env"].get<std::string>();
            if (l.contains("rotation"))
                spec.rotation = read_vec3(l["rotation"], "rotation");
        }
        if (!is_procedural_env(spec.env)) {
            spec.env = resolve(base, spec.env).string();
            require_file(spec.env, "environment");
        }
        d.lights.push_back(spec);
    }
    if (j.contains("normalize")) {
        d.target_min = get_or(j["normalize"], "min", d.target_min);
        d.target_max = get_or(j["normalize"], "max", d.target_max);
    }
    if (!(d.target_min > 0.0 && d.target_min <= d.target_max))
        throw ArgumentError("normalization range must satisfy 0 < min <= max");
    d.seed = get_or<std::uint64_t>(j, "seed", d.seed);
    return d;
}

DatasetConfig load_dataset_config(const std::filesystem::path &path) {
    return parse_dataset_config(load_json_file(path), path.parent_path());
}

TriScene build_scene(const SceneConfig &c) {
    TriScene scene;
    std::vector<std::uint32_t> ids;
    for (const auto &m : c.materials) {
        MaterialSlot slot{m.name, Material::make(m.albedo, m.roughness, m.metallic, m.transparency), std::nullopt};
        if (m.albedo_texture) {
            Image tex = read_pfm_file(*m.albedo_texture);
            if (tex.channels() != 3)
                throw LoadError("albedo texture must be RGB: " + m.albedo_texture->string());
            slot.albedo_texture = std::move(tex);
        }
        ids.push_back(scene.add_material(std::move(slot)));
    }
    if (ids.empty())
        ids.push_back(scene.add_material(MaterialSlot{"default", Material{}, std::nullopt}));
    auto mat = [&](std::size_t i) { return ids[std::min(i, ids.size() - 1)]; };
    const int seg = c.mesh.segments;
    if (c.mesh.type == "sphere" || c.mesh.type == "sphere-on-plane")
        add_uv_sphere(scene, Vec3::Zero(), c.mesh.radius, seg, 2 * seg, mat(0));
    else if (c.mesh.type == "capsule-person")
        add_capsule_person(scene, mat(0), mat(1), mat(2));
    else if (c.mesh.type == "plane")
        add_ground_plane(scene, 0.0, c.mesh.radius, mat(0));
    else if (c.mesh.type == "obj")
        load_obj(scene, c.mesh.path, mat(0));
    if (c.ground_plane.enabled) {
        const std::size_t plane_mat = c.mesh.type == "capsule-person" ? 3 : 1;
        add_ground_plane(scene, c.ground_plane.height, c.ground_plane.half_extent, mat(plane_mat),
                         c.ground_plane.camera_visible);
    }
    scene.build();
    return scene;
}

Camera make_camera(const SceneConfig &c) {
    const auto &k = c.camera;
    return Camera::look_at(k.position, k.look_at, k.up, k.fov, k.width, k.height);
}

TransportConfig transport_config(const SceneConfig &c, int workers) {
    TransportConfig t;
    t.mode = c.transport_mode;
    t.degree = c.degree;
    t.samples = c.transport_samples;
    t.sampling = c.transport_sampling;
    t.seed = c.seed;
    t.workers = workers;
    return t;
}

PtConfig pt_config(const SceneConfig &c, int workers) {
    PtConfig p;
    p.spp = c.pt_spp;
    p.seed = derive_seed(c.seed, 0x7074);
    p.max_bounces = c.pt_bounces;
    p.sampling = c.pt_sampling;
    if (c.pt_band_limited)
        p.band_limit_light = c.degree;
    p.workers = workers;
    return p;
}

EnvironmentMap load_light_env(const LightSpec &spec) {
    EnvironmentMap env = is_procedural_env(spec.env) ? make_procedural_env(spec.env) : load_environment(spec.env);
    if (!spec.rotation.isZero())
        env = rotate_env_map(env, Rotation3::yaw_pitch_roll(spec.rotation.x(), spec.rotation.y(), spec.rotation.z()));
    return env;
}

}  // namespace prt
