#pragma once

#include "prt/envlight.hpp"
#include "prt/relight.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace prt {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Scenes from <assets>/scenes/*.shc; environments from
    /// <assets>/envs/*.{hdr,pfm,txt}. Empty means no assets.
    std::filesystem::path assets;
    std::size_t max_upload_bytes = 32u << 20;
    std::string cors_origin = "*";
};

struct SceneEntry {
    std::string id;
    std::string name;
    std::shared_ptr<const DecomposedScene> scene;
};

struct EnvEntry {
    std::string id;
    std::string name;
    LightCoeffs coeffs{ShDegree(4)};
};

/// HTTP response produced by the handlers (transport-independent so the
/// handlers can be tested without sockets).
struct ServiceResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// Relighting service: read-only scene/environment catalogs loaded at start
/// plus an append-only upload store.
class RelightService {
  public:
    explicit RelightService(ServiceConfig cfg);
    ~RelightService();

    std::size_t scene_count() const { return scenes_.size(); }
    std::size_t env_count() const;

    void add_scene(const std::string &id, DecomposedScene scene);
    void add_env(const std::string &id, LightCoeffs coeffs);

    ServiceResponse list_scenes() const;
    ServiceResponse list_envs() const;
    ServiceResponse upload_env(const std::string &bytes, const std::string &filename);
    ServiceResponse relight(const std::string &json_body) const;
    ServiceResponse coeffs(const std::string &env_id, const std::string &yaw, const std::string &pitch,
                           const std::string &roll) const;

    /// Registers the routes on an existing server.
    void mount(httplib::Server &server);
    /// Binds host:port and blocks until stop().
    bool listen();
    /// Binds to an ephemeral port on host and returns it (-1 on failure);
    /// then call listen_after_bind().
    int bind_any_port();
    bool listen_after_bind();
    void stop();
    bool running() const;

  private:
    std::optional<EnvEntry> find_env(const std::string &id) const;

    ServiceConfig cfg_;
    std::map<std::string, SceneEntry> scenes_;
    std::map<std::string, EnvEntry> envs_;
    std::map<std::string, EnvEntry> uploads_;
    mutable std::mutex upload_mutex_;
    std::uint64_t next_upload_ = 1;
    std::unique_ptr<httplib::Server> server_;
};

/// Catalog-ready coefficients for an uploaded or stored map: degree 4,
/// normalized to the default target.
LightCoeffs prepare_env(const EnvironmentMap &env);

}  // namespace prt
