#include "prt/service.hpp"

#include "prt/error.hpp"
#include "prt/io.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <iostream>

namespace prt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ServiceResponse json_response(int status, const json &j) { return {status, "application/json", j.dump()}; }

ServiceResponse error_response(int status, const std::string &message) {
    return json_response(status, {{"error", message}});
}

std::string lower_ext(const fs::path &p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

struct BadRequest {
    int status;
    std::string message;
};

double number_field(const json &obj, const char *key, double fallback) {
    if (!obj.contains(key))
        return fallback;
    const json &v = obj.at(key);
    if (!v.is_number())
        throw BadRequest{422, std::string("'") + key + "' must be a number"};
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw BadRequest{422, std::string("'") + key + "' must be finite"};
    return d;
}

bool bool_field(const json &obj, const char *key, bool fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_boolean())
        throw BadRequest{422, std::string("'") + key + "' must be a boolean"};
    return obj.at(key).get<bool>();
}

double parse_query_angle(const std::string &s, const char *name) {
    if (s.empty())
        return 0.0;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v))
            return v;
    } catch (const std::exception &) {
    }
    throw BadRequest{422, std::string("invalid ") + name};
}

constexpr double kMaxAbsExposure = 20.0;
constexpr double kMaxAbsAngle = 3600.0;

}  // namespace

LightCoeffs prepare_env(const EnvironmentMap &env) {
    return normalize_env(project_env(env, ShDegree(4)), kDefaultNormalizationTarget);
}

RelightService::RelightService(ServiceConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.assets.empty())
        return;
    if (!fs::is_directory(cfg_.assets))
        throw LoadError("asset root not found: " + cfg_.assets.string());
    const fs::path scenes = cfg_.assets / "scenes";
    if (fs::is_directory(scenes)) {
        for (const auto &e : fs::directory_iterator(scenes))
            if (e.is_regular_file() && lower_ext(e.path()) == ".shc")
                add_scene(e.path().stem().string(), load_decomposed(e.path()));
    }
    const fs::path envs = cfg_.assets / "envs";
    if (fs::is_directory(envs)) {
        for (const auto &e : fs::directory_iterator(envs)) {
            if (!e.is_regular_file())
                continue;
            const std::string ext = lower_ext(e.path());
            if (ext == ".hdr" || ext == ".pfm") {
                add_env(e.path().stem().string(), prepare_env(load_environment(e.path())));
            } else if (ext == ".txt") {
                LightCoeffs l = read_light_file(e.path());
                const double ref = reference_radiance(l);
                if (!(ref >= 0.7 && ref <= 0.9))
                    l = normalize_env(l, kDefaultNormalizationTarget);
                add_env(e.path().stem().string(), l);
            }
        }
    }
}

RelightService::~RelightService() { stop(); }

std::size_t RelightService::env_count() const {
    std::lock_guard lock(upload_mutex_);
    return envs_.size() + uploads_.size();
}

void RelightService::add_scene(const std::string &id, DecomposedScene scene) {
    scene.validate();
    scenes_[id] = SceneEntry{id, id, std::make_shared<const DecomposedScene>(std::move(scene))};
}

void RelightService::add_env(const std::string &id, LightCoeffs coeffs) {
    envs_.insert_or_assign(id, EnvEntry{id, id, std::move(coeffs)});
}

std::optional<EnvEntry> RelightService::find_env(const std::string &id) const {
    if (auto it = envs_.find(id); it != envs_.end())
        return it->second;
    std::lock_guard lock(upload_mutex_);
    if (auto it = uploads_.find(id); it != uploads_.end())
        return it->second;
    return std::nullopt;
}

ServiceResponse RelightService::list_scenes() const {
    json out = json::array();
    for (const auto &[id, e] : scenes_)
        out.push_back({{"id", id},
                       {"name", e.name},
                       {"width", e.scene->width()},
                       {"height", e.scene->height()},
                       {"degree", e.scene->degree().n()}});
    return json_response(200, out);
}

ServiceResponse RelightService::list_envs() const {
    std::map<std::string, const EnvEntry *> all;
    std::lock_guard lock(upload_mutex_);
    for (const auto &[id, e] : envs_)
        all[id] = &e;
    for (const auto &[id, e] : uploads_)
        all[id] = &e;
    json out = json::array();
    for (const auto &[id, e] : all)
        out.push_back({{"id", id}, {"name", e->name}, {"reference_radiance", reference_radiance(e->coeffs)}});
    return json_response(200, out);
}

ServiceResponse RelightService::upload_env(const std::string &bytes, const std::string &filename) {
    if (bytes.size() > cfg_.max_upload_bytes)
        return error_response(413, "upload exceeds " + std::to_string(cfg_.max_upload_bytes) + " bytes");
    LightCoeffs coeffs{ShDegree(4)};
    try {
        const auto *data = reinterpret_cast<const std::uint8_t *>(bytes.data());
        coeffs = prepare_env(load_hdr(std::span(data, bytes.size())));
    } catch (const ParseError &e) {
        return error_response(400, e.what());
    } catch (const NormalizationError &e) {
        return error_response(400, e.what());
    } catch (const ArgumentError &e) {
        return error_response(400, e.what());
    }
    std::lock_guard lock(upload_mutex_);
    const std::string id = "upload-" + std::to_string(next_upload_++);
    const std::string name = filename.empty() ? id : fs::path(filename).stem().string();
    uploads_.emplace(id, EnvEntry{id, name, std::move(coeffs)});
    return json_response(200, {{"id", id}});
}

ServiceResponse RelightService::relight(const std::string &body) const {
    try {
        json req;
        try {
            req = json::parse(body);
        } catch (const json::parse_error &e) {
            return error_response(400, std::string("invalid JSON: ") + e.what());
        }
        if (!req.is_object())
            return error_response(400, "request body must be a JSON object");
        if (!req.contains("scene_id") || !req["scene_id"].is_string() || !req.contains("env_id") ||
            !req["env_id"].is_string())
            return error_response(422, "scene_id and env_id are required strings");
        const std::string scene_id = req["scene_id"];
        const std::string env_id = req["env_id"];
        const auto scene_it = scenes_.find(scene_id);
        if (scene_it == scenes_.end())
            return error_response(404, "unknown scene '" + scene_id + "'");
        const auto env = find_env(env_id);
        if (!env)
            return error_response(404, "unknown environment '" + env_id + "'");

        Vec3 ypr = Vec3::Zero();
        if (req.contains("rotation")) {
            const json &r = req["rotation"];
            if (!r.is_object())
                return error_response(422, "rotation must be an object {yaw, pitch, roll}");
            ypr = Vec3(number_field(r, "yaw", 0.0), number_field(r, "pitch", 0.0), number_field(r, "roll", 0.0));
            if (ypr.cwiseAbs().maxCoeff() > kMaxAbsAngle)
                return error_response(422, "rotation angles must lie within +-3600 degrees");
        }
        DisplayOptions display;
        display.exposure = number_field(req, "exposure", 0.0);
        if (std::abs(display.exposure) > kMaxAbsExposure)
            return error_response(422, "exposure must lie within +-20 stops");
        display.gamma = number_field(req, "gamma", display.gamma);
        if (!(display.gamma > 0.0) || display.gamma > 10.0)
            return error_response(422, "gamma must lie in (0, 10]");
        const double residual_scale = number_field(req, "residual_scale", kDefaultResidualScale);
        if (residual_scale < 0.0)
            return error_response(422, "residual_scale must be >= 0");
        TermSelection terms;
        if (req.contains("terms")) {
            const json &t = req["terms"];
            if (!t.is_object())
                return error_response(422, "terms must be an object");
            terms.albedo = bool_field(t, "albedo", true);
            terms.shading = bool_field(t, "shading", true);
            terms.residual = bool_field(t, "residual", true);
        }

        const DecomposedScene &scene = *scene_it->second.scene;
        LightCoeffs l = env->coeffs;
        if (l.degree().n() > scene.degree().n())
            l = l.resized(scene.degree());
        else if (l.degree() != scene.degree())
            return error_response(422, "environment degree is lower than the scene degree");
        l = rotate_env(l, Rotation3::yaw_pitch_roll(ypr.x(), ypr.y(), ypr.z()));
        const Image linear = term_image(scene, l, terms, residual_scale);
        return {200, "image/png", [&] {
                    const auto png = encode_png(to_display(linear, scene.mask, display));
                    return std::string(png.begin(), png.end());
                }()};
    } catch (const BadRequest &e) {
        return error_response(e.status, e.message);
    }
}

ServiceResponse RelightService::coeffs(const std::string &env_id, const std::string &yaw, const std::string &pitch,
                                       const std::string &roll) const {
    const auto env = find_env(env_id);
    if (!env)
        return error_response(404, "unknown environment '" + env_id + "'");
    try {
        const Rotation3 r = Rotation3::yaw_pitch_roll(parse_query_angle(yaw, "yaw"), parse_query_angle(pitch, "pitch"),
                                                      parse_query_angle(roll, "roll"));
        const LightCoeffs l = rotate_env(env->coeffs, r);
        json channels = json::array();
        for (int c = 0; c < 3; ++c)
            channels.push_back(std::vector<double>(l[c].coeffs().begin(), l[c].coeffs().end()));
        return json_response(200, {{"env_id", env_id}, {"degree", l.degree().n()}, {"coeffs", channels}});
    } catch (const BadRequest &e) {
        return error_response(e.status, e.message);
    }
}

void RelightService::mount(httplib::Server &server) {
    auto send = [](httplib::Response &res, const ServiceResponse &r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", cfg_.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.set_payload_max_length(cfg_.max_upload_bytes);
    server.Options(R"(/api/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });
    server.Get("/api/scenes", [this, send](const httplib::Request &, httplib::Response &res) {
        send(res, list_scenes());
    });
    server.Get("/api/envs", [this, send](const httplib::Request &, httplib::Response &res) {
        send(res, list_envs());
    });
    server.Post("/api/envs", [this, send](const httplib::Request &req, httplib::Response &res) {
        if (req.is_multipart_form_data()) {
            if (!req.has_file("file")) {
                send(res, error_response(400, "multipart upload needs a 'file' field"));
                return;
            }
            const auto file = req.get_file_value("file");
            send(res, upload_env(file.content, file.filename));
        } else {
            send(res, upload_env(req.body, ""));
        }
    });
    server.Post("/api/relight", [this, send](const httplib::Request &req, httplib::Response &res) {
        send(res, relight(req.body));
    });
    server.Get("/api/coeffs", [this, send](const httplib::Request &req, httplib::Response &res) {
        if (!req.has_param("env_id")) {
            send(res, error_response(422, "env_id is required"));
            return;
        }
        send(res, coeffs(req.get_param_value("env_id"), req.get_param_value("yaw"), req.get_param_value("pitch"),
                         req.get_param_value("roll")));
    });
    server.set_exception_handler([](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
        std::string msg = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception &e) {
            msg = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(json{{"error", msg}}.dump(), "application/json");
    });
}

bool RelightService::listen() {
    if (!server_) {
        server_ = std::make_unique<httplib::Server>();
        mount(*server_);
    }
    return server_->listen(cfg_.host, cfg_.port);
}

int RelightService::bind_any_port() {
    if (!server_) {
        server_ = std::make_unique<httplib::Server>();
        mount(*server_);
    }
    return server_->bind_to_any_port(cfg_.host);
}

bool RelightService::listen_after_bind() { return server_ && server_->listen_after_bind(); }

void RelightService::stop() {
    if (server_)
        server_->stop();
}

bool RelightService::running() const { return server_ && server_->is_running(); }

}  // namespace prt
