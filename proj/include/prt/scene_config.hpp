#pragma once

#include "prt/geometry.hpp"
#include "prt/oracle_pt.hpp"
#include "prt/transport.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prt {

struct MaterialConfig {
    std::string name = "default";
    Vec3 albedo{0.8, 0.8, 0.8};
    double roughness = 0.5;
    double metallic = 0.0;
    double transparency = 0.0;
    std::optional<std::filesystem::path> albedo_texture;  // RGB .pfm
};

struct MeshConfig {
    /// sphere, sphere-on-plane, capsule-person, plane or obj
    std::string type = "sphere";
    std::filesystem::path path;  // obj only
    double radius = 1.0;
    int segments = 48;
};

struct GroundPlaneConfig {
    bool enabled = false;
    bool camera_visible = true;
    double height = -1.0;
    double half_extent = 20.0;
};

struct CameraConfig {
    Vec3 position{0.0, -4.0, 0.0};
    Vec3 look_at = Vec3::Zero();
    Vec3 up = Vec3::UnitZ();
    double fov = 40.0;
    int width = 128;
    int height = 128;
};

/// One view of one object: geometry, materials, camera and sampling
/// parameters. See docs/scene_config.md for the JSON schema.
struct SceneConfig {
    std::string name = "scene";
    MeshConfig mesh;
    GroundPlaneConfig ground_plane;
    std::vector<MaterialConfig> materials;
    CameraConfig camera;
    ShDegree degree{4};
    TransportMode transport_mode = TransportMode::FullReflectance;
    int transport_samples = 1024;
    SphereSampler::Kind transport_sampling = SphereSampler::Kind::Stratified;
    int pt_spp = 256;
    int pt_bounces = 0;
    EnvSampling pt_sampling = EnvSampling::Uniform;
    bool pt_band_limited = false;
    std::uint64_t seed = 0;
};

/// Environment reference: a procedural name or a file path, plus a rotation
/// (yaw, pitch, roll in degrees).
struct LightSpec {
    std::string env;
    Vec3 rotation = Vec3::Zero();
};

/// Scenes x lights grid for dataset generation.
struct DatasetConfig {
    std::vector<SceneConfig> scenes;
    std::vector<LightSpec> lights;
    double target_min = 0.7;
    double target_max = 0.9;
    std::uint64_t seed = 0;
};

/// Throws ArgumentError for invalid values and LoadError for referenced
/// files that do not exist. Relative paths resolve against base_dir.
SceneConfig parse_scene_config(const nlohmann::json &j, const std::filesystem::path &base_dir);
SceneConfig load_scene_config(const std::filesystem::path &path);
nlohmann::json to_json(const SceneConfig &c);

DatasetConfig parse_dataset_config(const nlohmann::json &j, const std::filesystem::path &base_dir);
DatasetConfig load_dataset_config(const std::filesystem::path &path);

/// Parses JSON text; throws ParseError with the byte offset on bad syntax.
nlohmann::json parse_json_text(const std::string &text);
nlohmann::json load_json_file(const std::filesystem::path &path);

TriScene build_scene(const SceneConfig &c);
Camera make_camera(const SceneConfig &c);
TransportConfig transport_config(const SceneConfig &c, int workers = 0);
PtConfig pt_config(const SceneConfig &c, int workers = 0);

/// Loads a light's radiance map (procedural name or .hdr/.pfm path) and
/// applies its rotation.
EnvironmentMap load_light_env(const LightSpec &spec);

}  // namespace prt
