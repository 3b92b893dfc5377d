#include "fixtures.hpp"

#include "prt/error.hpp"
#include "prt/io.hpp"
#include "prt/scene_config.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace prt;
using nlohmann::json;

TEST(SceneConfig, DefaultsFromEmptyObject) {
    const SceneConfig c = parse_scene_config(json::object(), ".");
    EXPECT_EQ(c.mesh.type, "sphere");
    EXPECT_EQ(c.materials.size(), 1u);
    EXPECT_EQ(c.degree.n(), 4);
    EXPECT_EQ(c.transport_mode, TransportMode::FullReflectance);
    EXPECT_EQ(c.transport_samples, 1024);
    EXPECT_EQ(c.transport_sampling, SphereSampler::Kind::Stratified);
    EXPECT_FALSE(c.ground_plane.enabled);
    EXPECT_EQ(c.camera.width, 128);
}

TEST(SceneConfig, SphereOnPlaneEnablesGround) {
    const SceneConfig c = parse_scene_config(json{{"mesh", {{"type", "sphere-on-plane"}, {"radius", 0.5}}}}, ".");
    EXPECT_TRUE(c.ground_plane.enabled);
    EXPECT_DOUBLE_EQ(c.ground_plane.height, -0.5);
}

TEST(SceneConfig, RejectsInvalidValues) {
    const json bad[] = {
        json::array(),
        {{"degree", 3}},
        {{"mesh", {{"type", "teapot"}}}},
        {{"mesh", {{"radius", -1.0}}}},
        {{"mesh", {{"type", "obj"}}}},
        {{"materials", {{{"albedo", {1.5, 0.0, 0.0}}}}}},
        {{"materials", {{{"albedo", {0.5, 0.5}}}}}},
        {{"materials", {{{"roughness", "high"}}}}},
        {{"camera", {{"fov", 180.0}}}},
        {{"camera", {{"width", 0}}}},
        {{"transport", {{"mode", "magic"}}}},
        {{"transport", {{"samples", 0}}}},
        {{"transport", {{"sampling", "sobol"}}}},
        {{"pt", {{"bounces", 2}}}},
        {{"pt", {{"sampling", "mis"}}}},
    };
    for (const json &j : bad)
        EXPECT_THROW(parse_scene_config(j, "."), ArgumentError) << j.dump();
}

TEST(SceneConfig, MissingReferencedFilesAreLoadErrors) {
    const auto dir = fixtures::temp_dir("config_missing");
    try {
        parse_scene_config(json{{"mesh", {{"type", "obj"}, {"path", "nope.obj"}}}}, dir);
        FAIL();
    } catch (const LoadError &e) {
        EXPECT_NE(std::string(e.what()).find("nope.obj"), std::string::npos);
    }
    EXPECT_THROW(parse_scene_config(json{{"materials", {{{"albedo_texture", "tex.pfm"}}}}}, dir), LoadError);
    EXPECT_THROW(load_scene_config(dir / "absent.json"), LoadError);
}

TEST(SceneConfig, BadJsonReportsOffset) {
    try {
        parse_json_text("{\"name\": \"x\",, }");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.offset(), 14u);
    }
    const auto dir = fixtures::temp_dir("config_badjson");
    std::ofstream(dir / "bad.json") << "{\n  \"degree\": 4\n  \"name\": 1\n}";
    try {
        load_scene_config(dir / "bad.json");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
        EXPECT_GT(e.offset(), 10u);
    }
}

TEST(SceneConfig, JsonRoundTrip) {
    const auto dir = fixtures::temp_dir("config_roundtrip");
    std::ofstream(dir / "tri.obj") << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
    const json j = {{"name", "custom"},
                    {"mesh", {{"type", "obj"}, {"path", "tri.obj"}}},
                    {"ground_plane", {{"enabled", true}, {"camera_visible", false}, {"height", -2.0}}},
                    {"materials", {{{"name", "red"}, {"albedo", {0.9, 0.1, 0.1}}, {"roughness", 0.2}}}},
                    {"camera", {{"position", {0, -5, 1}}, {"fov", 30.0}, {"width", 64}, {"height", 48}}},
                    {"degree", 2},
                    {"transport", {{"mode", "cosvis"}, {"samples", 256}, {"sampling", "uniform"}}},
                    {"pt", {{"spp", 64}, {"bounces", 1}, {"sampling", "importance"}, {"band_limit", true}}},
                    {"seed", 42}};
    const SceneConfig c = parse_scene_config(j, dir);
    EXPECT_EQ(c.mesh.path, dir / "tri.obj");
    EXPECT_EQ(c.degree.n(), 2);
    EXPECT_EQ(c.transport_mode, TransportMode::CosineVisibility);
    EXPECT_EQ(c.transport_sampling, SphereSampler::Kind::Independent);
    EXPECT_EQ(c.pt_sampling, EnvSampling::Importance);
    EXPECT_EQ(c.seed, 42u);
    const json out = to_json(c);
    const SceneConfig back = parse_scene_config(out, "/");
    EXPECT_EQ(to_json(back), out);
    EXPECT_EQ(back.materials[0].albedo, Vec3(0.9, 0.1, 0.1));
    EXPECT_FALSE(back.ground_plane.camera_visible);
    EXPECT_EQ(back.camera.height, 48);
}

TEST(DatasetConfig, InlineAndPathScenesAndLights) {
    const auto dir = fixtures::temp_dir("config_dataset");
    std::ofstream(dir / "scene.json") << R"({"name": "from-file", "mesh": {"type": "plane"}})";
    const EnvironmentMap env = make_procedural_env("constant", 8, 4);
    write_pfm_file(dir / "env.pfm", env.image());
    const json j = {{"scenes", {"scene.json", {{"name", "inline"}}}},
                    {"lights", {"sunset", {{"env", "env.pfm"}, {"rotation", {90, 0, 0}}}}},
                    {"normalize", {{"min", 0.5}, {"max", 0.6}}},
                    {"seed", 7}};
    const DatasetConfig d = parse_dataset_config(j, dir);
    ASSERT_EQ(d.scenes.size(), 2u);
    EXPECT_EQ(d.scenes[0].name, "from-file");
    EXPECT_EQ(d.scenes[1].name, "inline");
    ASSERT_EQ(d.lights.size(), 2u);
    EXPECT_EQ(d.lights[0].env, "sunset");
    EXPECT_EQ(d.lights[1].env, (dir / "env.pfm").string());
    EXPECT_EQ(d.lights[1].rotation, Vec3(90, 0, 0));
    EXPECT_DOUBLE_EQ(d.target_min, 0.5);
    EXPECT_EQ(d.seed, 7u);
    const EnvironmentMap loaded = load_light_env(d.lights[1]);
    EXPECT_EQ(loaded.width(), 8);
}

TEST(DatasetConfig, Errors) {
    const auto dir = fixtures::temp_dir("config_dataset_errors");
    EXPECT_THROW(parse_dataset_config(json{{"lights", {"sunset"}}}, dir), ArgumentError);
    EXPECT_THROW(parse_dataset_config(json{{"scenes", {json::object()}}, {"lights", json::array()}}, dir),
                 ArgumentError);
    EXPECT_THROW(parse_dataset_config(json{{"scenes", {"missing.json"}}, {"lights", {"sunset"}}}, dir), LoadError);
    EXPECT_THROW(parse_dataset_config(json{{"scenes", {json::object()}}, {"lights", {"missing.hdr"}}}, dir),
                 LoadError);
    EXPECT_THROW(parse_dataset_config(json{{"scenes", {json::object()}}, {"lights", {json::object()}}}, dir),
                 ArgumentError);
    EXPECT_THROW(parse_dataset_config(
                     json{{"scenes", {json::object()}}, {"lights", {"sunset"}}, {"normalize", {{"min", 0.9}, {"max", 0.5}}}},
                     dir),
                 ArgumentError);
}

TEST(BuildScene, MeshTypes) {
    SceneConfig c;
    c.mesh.segments = 8;
    const TriScene sphere = build_scene(c);
    EXPECT_EQ(sphere.materials().size(), 1u);
    EXPECT_GT(sphere.triangle_count(), 0u);
    c.mesh.type = "sphere-on-plane";
    c.ground_plane.enabled = true;
    c.ground_plane.height = -1.0;
    EXPECT_EQ(build_scene(c).triangle_count(), sphere.triangle_count() + 2);
    c.ground_plane.enabled = false;
    c.mesh.type = "plane";
    EXPECT_EQ(build_scene(c).triangle_count(), 2u);
    c.mesh.type = "capsule-person";
    EXPECT_GT(build_scene(c).triangle_count(), 100u);
}

TEST(BuildScene, CameraAndConfigs) {
    SceneConfig c;
    c.camera.width = 32;
    c.camera.height = 16;
    c.transport_samples = 77;
    c.seed = 9;
    c.pt_band_limited = true;
    c.degree = ShDegree(2);
    const Camera cam = make_camera(c);
    EXPECT_EQ(cam.width, 32);
    EXPECT_EQ(cam.height, 16);
    EXPECT_NEAR(cam.forward.y(), 1.0, 1e-12);
    const TransportConfig t = transport_config(c, 3);
    EXPECT_EQ(t.samples, 77);
    EXPECT_EQ(t.seed, 9u);
    EXPECT_EQ(t.workers, 3);
    EXPECT_EQ(t.degree.n(), 2);
    const PtConfig p = pt_config(c);
    ASSERT_TRUE(p.band_limit_light.has_value());
    EXPECT_EQ(p.band_limit_light->n(), 2);
    EXPECT_NE(p.seed, c.seed);
}
