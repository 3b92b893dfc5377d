#include "prt/commands.hpp"

#include "prt/error.hpp"
#include "prt/io.hpp"
#include "prt/metrics.hpp"
#include "prt/oracle_pt.hpp"
#include "prt/relight.hpp"
#include "prt/residual_fit.hpp"
#include "prt/scene_config.hpp"
#include "prt/service.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

namespace prt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

void write_json_file(const fs::path &path, const json &j) {
    const std::string s = j.dump(2) + "\n";
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t *>(s.data()), s.size()));
}

json rotation_json(const Vec3 &r) { return {{"yaw", r.x()}, {"pitch", r.y()}, {"roll", r.z()}}; }

Rotation3 to_rotation(const Vec3 &ypr) { return Rotation3::yaw_pitch_roll(ypr.x(), ypr.y(), ypr.z()); }

/// Writes <dir>/manifest.json (or <stem>.manifest.json beside a file output).
void write_manifest(const fs::path &out, bool out_is_dir, const std::string &command,
                    const std::vector<std::string> &args, json details) {
    details["command"] = command;
    details["version"] = kVersion;
    details["args"] = args;
    fs::path path = out_is_dir ? out / "manifest.json" : fs::path(out.string() + ".manifest.json");
    write_json_file(path, details);
}

LightCoeffs fit_degree(const LightCoeffs &l, ShDegree degree, const std::string &what) {
    if (l.degree() == degree)
        return l;
    if (l.degree().n() > degree.n())
        return l.resized(degree);
    throw ArgumentError(what + " has degree " + std::to_string(l.degree().n()) + " but the scene needs " +
                        std::to_string(degree.n()));
}

// ---------------------------------------------------------------- project-env

struct ProjectEnvOptions {
    std::string env;
    int degree = 4;
    std::string rotation;
    std::optional<double> normalize;
    std::string out;
};

int cmd_project_env(const ProjectEnvOptions &o, const std::vector<std::string> &args, std::ostream &out) {
    const ShDegree degree(o.degree);
    EnvironmentMap env = is_procedural_env(o.env) ? make_procedural_env(o.env) : load_environment(o.env);
    LightCoeffs l = project_env(env, degree);
    const Vec3 ypr = o.rotation.empty() ? Vec3::Zero() : parse_rotation(o.rotation);
    if (!ypr.isZero())
        l = rotate_env(l, to_rotation(ypr));
    double scale = 1.0;
    if (o.normalize) {
        scale = normalization_scale(l, *o.normalize);
        l = l * scale;
    }
    write_light_file(o.out, l);
    write_manifest(o.out, false, "project-env", args,
                   {{"inputs", {{"env", o.env}}},
                    {"parameters",
                     {{"degree", o.degree}, {"rotation", rotation_json(ypr)}, {"normalization_scale", scale}}},
                    {"outputs", {o.out}},
                    {"reference_radiance", reference_radiance(l)}});
    out << "wrote " << o.out << " (reference radiance " << reference_radiance(l) << ")\n";
    return kExitOk;
}

// ------------------------------------------------------------------ transport

struct TransportOptions {
    std::string scene;
    std::optional<int> degree;
    std::optional<std::string> mode;
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    int workers = 0;
    std::string out;
};

int cmd_transport(const TransportOptions &o, const std::vector<std::string> &args, std::ostream &out) {
    SceneConfig cfg = load_scene_config(o.scene);
    if (o.degree) {
        if (*o.degree != 2 && *o.degree != 4)
            throw ArgumentError("--degree must be 2 or 4");
        cfg.degree = ShDegree(*o.degree);
    }
    if (o.mode)
        cfg.transport_mode = parse_transport_mode(*o.mode);
    if (o.samples) {
        if (*o.samples < 1)
            throw ArgumentError("--samples must be >= 1");
        cfg.transport_samples = *o.samples;
    }
    if (o.seed)
        cfg.seed = *o.seed;
    const TriScene scene = build_scene(cfg);
    const DecomposedScene d = render_decomposed(scene, make_camera(cfg), transport_config(cfg, o.workers));
    save_decomposed(d, o.out);
    write_manifest(o.out, false, "transport", args,
                   {{"inputs", {{"scene", o.scene}}},
                    {"seeds", {{"transport", cfg.seed}}},
                    {"parameters", to_json(cfg)},
                    {"outputs", {o.out}}});
    out << "wrote " << o.out << " (" << d.width() << "x" << d.height() << ", degree " << d.degree().n() << ")\n";
    return kExitOk;
}

// --------------------------------------------------------------- fit-residual

struct FitOptions {
    std::string scene;
    std::string train_lights;
    std::string lambda = "1e-4";
    int workers = 0;
    std::string out;
};

int cmd_fit_residual(const FitOptions &o, const std::vector<std::string> &args, std::ostream &out) {
    DecomposedScene scene = load_decomposed(o.scene);
    if (!fs::is_directory(o.train_lights))
        throw LoadError("training light directory not found: " + o.train_lights);
    std::vector<fs::path> dirs;
    for (const auto &e : fs::directory_iterator(o.train_lights))
        if (e.is_directory() && fs::exists(e.path() / "light.txt") && fs::exists(e.path() / "pt.pfm"))
            dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty())
        throw LoadError("no <dir>/light.txt + <dir>/pt.pfm pairs under " + o.train_lights);
    std::vector<LightCoeffs> lights;
    std::vector<Image> pts;
    for (const auto &d : dirs) {
        lights.push_back(fit_degree(read_light_file(d / "light.txt"), scene.degree(), (d / "light.txt").string()));
        pts.push_back(read_pfm_file(d / "pt.pfm"));
    }
    ResidualFitConfig cfg;
    cfg.workers = o.workers;
    json selection;
    if (o.lambda == "auto") {
        if (lights.size() < 2)
            throw ArgumentError("--lambda auto needs at least two training lights");
        const auto candidates = default_lambda_candidates();
        const LambdaSelection sel =
            select_lambda(scene, pts, lights, candidates, std::min<int>(5, static_cast<int>(lights.size())),
                          o.workers);
        cfg.lambda = sel.lambda;
        selection = {{"candidates", sel.candidates}, {"validation_mse", sel.validation_error}};
    } else {
        try {
            std::size_t used = 0;
            cfg.lambda = std::stod(o.lambda, &used);
            if (used != o.lambda.size())
                throw std::invalid_argument("");
        } catch (const std::exception &) {
            throw ArgumentError("--lambda must be a number >= 0 or 'auto'");
        }
    }
    ResidualFitReport report;
    scene.residual = fit_residual(scene, pts, lights, cfg, &report);
    scene.residual_missing = false;
    save_decomposed(scene, o.out);
    json per_light = json::array();
    for (std::size_t k = 0; k < dirs.size(); ++k)
        per_light.push_back(
            {{"light", dirs[k].filename().string()}, {"l2_x100_before", report.l2_before[k]}, {"l2_x100_after",
                                                                                               report.l2_after[k]}});
    json report_json = {{"lambda", cfg.lambda},
                              {"lights", dirs.size()},
                              {"max_normal_residual", report.max_normal_residual},
                              {"per_light", per_light}};
    if (!selection.is_null())
        report_json["cross_validation"] = selection;
    write_json_file(o.out + ".fit.json", report_json);
    write_manifest(o.out, false, "fit-residual", args,
                   {{"inputs", {{"scene", o.scene}, {"train_lights", o.train_lights}}},
                    {"parameters", {{"lambda", cfg.lambda}, {"lambda_option", o.lambda}}},
                    {"outputs", {o.out, o.out + ".fit.json"}}});
    double before = 0.0, after = 0.0;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        before += report.l2_before[k];
        after += report.l2_after[k];
    }
    out << "fitted residual on " << dirs.size() << " lights: mean L2x100 " << before / dirs.size() << " -> "
        << after / dirs.size() << "\n";
    return kExitOk;
}

// -------------------------------------------------------------------- relight

struct RelightOptions {
    std::string scene;
    std::string light;
    std::string env;
    std::string rotation;
    double exposure = 0.0;
    double gamma = 2.2;
    double normalize = kDefaultNormalizationTarget;
    std::string out;
    std::string linear;
};

int cmd_relight(const RelightOptions &o, const std::vector<std::string> &args, std::ostream &out) {
    if (o.light.empty() == o.env.empty())
        throw ArgumentError("exactly one of --light or --env is required");
    if (!fs::exists(o.scene))
        throw LoadError("scene not found: " + o.scene);
    const DecomposedScene scene = load_decomposed(o.scene);
    LightCoeffs l = o.light.empty() ? load_light_source(o.env, ShDegree(4), o.normalize) : read_light_file(o.light);
    l = fit_degree(l, scene.degree(), "light");
    const Vec3 ypr = o.rotation.empty() ? Vec3::Zero() : parse_rotation(o.rotation);
    const LightCoeffs rotated = rotate_env(l, to_rotation(ypr));
    const Image linear = reconstruct(scene, rotated);
    const DisplayOptions display{o.exposure, o.gamma};
    write_png_file(o.out, to_display(linear, scene.mask, display));
    std::vector<std::string> outputs{o.out};
    if (!o.linear.empty()) {
        write_pfm_file(o.linear, linear);
        outputs.push_back(o.linear);
    }
    write_manifest(o.out, false, "relight", args,
                   {{"inputs", {{"scene", o.scene}, {"light", o.light.empty() ? o.env : o.light}}},
                    {"parameters",
                     {{"rotation", rotation_json(ypr)}, {"exposure", o.exposure}, {"gamma", o.gamma}}},
                    {"outputs", outputs}});
    if (scene.residual_missing)
        out << "warning: " << o.scene << " has no residual planes; using E = 0\n";
    out << "wrote " << o.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- dataset-gen

struct DatasetOptions {
    std::string config;
    std::string out;
    int workers = 0;
};

Rgba8Image preview(const Image &linear, const Image &mask) { return to_display(linear, mask, DisplayOptions{}); }

void generate_cell(const SceneConfig &cfg, const TriScene &scene, const Camera &cam, const DecomposedScene &stored,
                   const LightSpec &spec, double target, std::uint64_t cell_seed, int workers, const fs::path &dir,
                   json &cell) {
    EnvironmentMap env = load_light_env(spec);
    const LightCoeffs projected = project_env(env, cfg.degree);
    const double scale = normalization_scale(projected, target);
    const LightCoeffs light = projected * scale;
    env = env.scaled(scale);

    fs::create_directories(dir);
    write_light_file(dir / "light.txt", light);
    const LightCoeffs stored_light = read_light_file(dir / "light.txt");

    PtConfig pt = pt_config(cfg, workers);
    pt.seed = cell_seed;
    Image pt_image = cfg.pt_band_limited ? render_pt(scene, stored_light, cam, pt) : render_pt(scene, env, cam, pt);
    pt_image.quantize_to_float();
    Image prt_image = reconstruct(stored, stored_light);
    prt_image.quantize_to_float();

    write_pfm_file(dir / "pt.pfm", pt_image);
    write_pfm_file(dir / "prt.pfm", prt_image);
    save_decomposed(stored, dir / "decomposed.shc");
    write_png_file(dir / "preview_pt.png", preview(pt_image, stored.mask));
    write_png_file(dir / "preview_prt.png", preview(prt_image, stored.mask));
    cell["normalization_target"] = target;
    cell["normalization_scale"] = scale;
    cell["pt_seed"] = cell_seed;
    cell["outputs"] = {"pt.pfm", "prt.pfm", "decomposed.shc", "light.txt", "preview_pt.png", "preview_prt.png"};
    write_json_file(dir / "manifest.json", cell);
}

int cmd_dataset_gen(const DatasetOptions &o, const std::vector<std::string> &args, std::ostream &out,
                    std::ostream &err) {
    const DatasetConfig grid = load_dataset_config(o.config);
    std::vector<double> targets;
    for (std::size_t k = 0; k < grid.lights.size(); ++k) {
        Rng rng(derive_seed(grid.seed, k));
        targets.push_back(grid.target_min + (grid.target_max - grid.target_min) * rng.uniform());
    }
    json cells = json::array();
    int failures = 0;
    std::set<std::string> names;
    for (std::size_t s = 0; s < grid.scenes.size(); ++s) {
        const SceneConfig &cfg = grid.scenes[s];
        std::string name = cfg.name;
        if (!names.insert(name).second)
            name += "_" + std::to_string(s);
        std::optional<TriScene> scene;
        std::optional<DecomposedScene> stored;
        std::string scene_error;
        try {
            scene = build_scene(cfg);
            const DecomposedScene d = render_decomposed(*scene, make_camera(cfg), transport_config(cfg, o.workers));
            stored = from_container(to_container(d));
        } catch (const std::exception &e) {
            scene_error = e.what();
        }
        for (std::size_t k = 0; k < grid.lights.size(); ++k) {
            char label[16];
            std::snprintf(label, sizeof label, "%03zu", k);
            const fs::path dir = fs::path(o.out) / name / label;
            json cell = {{"scene", name},
                         {"light_index", k},
                         {"env", grid.lights[k].env},
                         {"rotation", rotation_json(grid.lights[k].rotation)},
                         {"transport_seed", cfg.seed},
                         {"scene_config", to_json(cfg)}};
            try {
                if (!scene_error.empty())
                    throw LoadError(scene_error);
                generate_cell(cfg, *scene, make_camera(cfg), *stored, grid.lights[k], targets[k],
                              derive_seed(derive_seed(cfg.seed, 0x7074), k), o.workers, dir, cell);
                cell["status"] = "ok";
            } catch (const std::exception &e) {
                ++failures;
                cell["status"] = "failed";
                cell["error"] = e.what();
                err << "error: " << name << "/" << label << ": " << e.what() << "\n";
            }
            cells.push_back(cell);
        }
    }
    write_manifest(o.out, true, "dataset-gen", args,
                   {{"inputs", {{"config", o.config}}},
                    {"seeds", {{"dataset", grid.seed}}},
                    {"normalization_targets", targets},
                    {"cells", cells},
                    {"failures", failures}});
    out << "generated " << cells.size() - failures << "/" << cells.size() << " cells in " << o.out << "\n";
    return failures ? kExitInternal : kExitOk;
}

// ----------------------------------------------------------------------- eval

struct EvalOptions {
    std::string pred;
    std::string gt;
    bool mask = true;
    std::string out;
};

std::set<std::string> collect_images(const fs::path &root) {
    std::set<std::string> files;
    for (const auto &e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file())
            continue;
        const std::string ext = lower(e.path().extension().string());
        if ((ext == ".pfm" || ext == ".png") && e.path().filename() != "mask.pfm")
            files.insert(fs::relative(e.path(), root).generic_string());
    }
    return files;
}

Image load_eval_image(const fs::path &p, Image *alpha) {
    if (lower(p.extension().string()) == ".pfm") {
        Image img = read_pfm_file(p);
        if (img.channels() == 1) {
            Image rgb(img.width(), img.height(), 3);
            for (std::size_t i = 0; i < img.pixel_count(); ++i)
                rgb.set_rgb(i, Vec3::Constant(img.at(i, 0)));
            return rgb;
        }
        return img;
    }
    const Rgba8Image png = decode_png(read_file_bytes(p));
    Image img(png.width, png.height, 3);
    if (alpha)
        *alpha = Image(png.width, png.height, 1);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        for (int c = 0; c < 3; ++c)
            img.at(i, c) = png.pixels[4 * i + c] / 255.0;
        if (alpha)
            alpha->at(i, 0) = png.pixels[4 * i + 3] / 255.0;
    }
    return img;
}

std::optional<Image> find_mask(const fs::path &gt_file, const Image *png_alpha) {
    const fs::path dir = gt_file.parent_path();
    if (fs::exists(dir / "mask.pfm"))
        return read_pfm_file(dir / "mask.pfm");
    if (fs::exists(dir / "decomposed.shc"))
        return load_decomposed(dir / "decomposed.shc").mask;
    if (png_alpha && !png_alpha->empty())
        return *png_alpha;
    return std::nullopt;
}

std::string buffer_class(const std::string &file) {
    const std::string stem = lower(fs::path(file).stem().string());
    if (stem.find("albedo") != std::string::npos)
        return "albedo";
    if (stem.find("shading") != std::string::npos)
        return "shading";
    return "image";
}

json report_json(const MetricReport &r) {
    return {{"l1_x100", r.l1_x100},
            {"l2_x100", r.l2_x100},
            {"psnr", r.psnr},
            {"pixel_count", r.pixel_count},
            {"masked", r.masked}};
}

int cmd_eval(const EvalOptions &o, const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    for (const auto &d : {o.pred, o.gt})
        if (!fs::is_directory(d))
            throw LoadError("directory not found: " + d);
    const auto pred = collect_images(o.pred);
    const auto gt = collect_images(o.gt);
    json pairs = json::array();
    json unpaired = json::array();
    std::map<std::string, std::vector<MetricReport>> by_class;
    std::vector<MetricReport> all;
    for (const auto &f : pred)
        if (!gt.count(f))
            unpaired.push_back("pred:" + f);
    for (const auto &f : gt)
        if (!pred.count(f))
            unpaired.push_back("gt:" + f);
    for (const auto &f : gt) {
        if (!pred.count(f))
            continue;
        Image alpha;
        const fs::path gt_path = fs::path(o.gt) / f;
        const Image b = clamp_unit(load_eval_image(gt_path, &alpha));
        const Image a = clamp_unit(load_eval_image(fs::path(o.pred) / f, nullptr));
        if (!a.same_shape(b))
            throw ArgumentError("image sizes differ for " + f);
        std::optional<Image> mask;
        if (o.mask)
            mask = find_mask(gt_path, &alpha);
        const MetricReport r = image_metrics(a, b, mask ? &*mask : nullptr);
        json entry = report_json(r);
        entry["file"] = f;
        entry["class"] = buffer_class(f);
        pairs.push_back(entry);
        by_class[buffer_class(f)].push_back(r);
        all.push_back(r);
    }
    auto mean_of = [](const std::vector<MetricReport> &rs) {
        json j = {{"count", rs.size()}, {"l1_x100", 0.0}, {"l2_x100", 0.0}, {"psnr", 0.0}};
        if (rs.empty())
            return j;
        double l1 = 0, l2 = 0, psnr = 0;
        for (const auto &r : rs) {
            l1 += r.l1_x100;
            l2 += r.l2_x100;
            psnr += r.psnr;
        }
        const double n = static_cast<double>(rs.size());
        j["l1_x100"] = l1 / n;
        j["l2_x100"] = l2 / n;
        j["psnr"] = psnr / n;
        return j;
    };
    json classes = json::object();
    for (const auto &[name, rs] : by_class)
        classes[name] = mean_of(rs);
    const json report = {{"masked", o.mask}, {"pairs", pairs}, {"classes", classes}, {"aggregate", mean_of(all)},
                         {"unpaired", unpaired}};
    if (o.out.empty()) {
        out << report.dump(2) << "\n";
    } else {
        write_json_file(o.out, report);
        write_manifest(o.out, false, "eval", args,
                       {{"inputs", {{"pred", o.pred}, {"gt", o.gt}}}, {"parameters", {{"mask", o.mask}}},
                        {"outputs", {o.out}}});
        out << "wrote " << o.out << "\n";
    }
    if (!unpaired.empty()) {
        for (const auto &u : unpaired)
            err << "unpaired: " << u.get<std::string>() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------- serve

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string assets;
    double max_upload_mb = 32.0;
};

int cmd_serve(const ServeOptions &o, std::ostream &out) {
    ServiceConfig cfg;
    cfg.host = o.host;
    cfg.port = o.port;
    if (!o.assets.empty())
        cfg.assets = o.assets;
    cfg.max_upload_bytes = static_cast<std::size_t>(o.max_upload_mb * 1024 * 1024);
    RelightService service(cfg);
    out << "serving " << service.scene_count() << " scenes and " << service.env_count() << " environments on http://"
        << o.host << ":" << o.port << "\n"
        << std::flush;
    return service.listen() ? kExitOk : kExitInternal;
}

}  // namespace

Vec3 parse_rotation(const std::string &s) {
    Vec3 r = Vec3::Zero();
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    parts.push_back(cur);
    const char *names[3] = {"yaw", "pitch", "roll"};
    auto number = [&](const std::string &t) {
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size() || !std::isfinite(v))
                throw ArgumentError("");
            return v;
        } catch (const std::exception &) {
            throw ArgumentError("invalid rotation '" + s + "' (expected yaw,pitch,roll in degrees)");
        }
    };
    if (parts.size() > 3)
        throw ArgumentError("invalid rotation '" + s + "' (expected yaw,pitch,roll in degrees)");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos) {
            r[static_cast<int>(i)] = number(parts[i]);
            continue;
        }
        const std::string key = parts[i].substr(0, eq);
        const auto it = std::find(std::begin(names), std::end(names), key);
        if (it == std::end(names))
            throw ArgumentError("unknown rotation component '" + key + "'");
        r[static_cast<int>(it - std::begin(names))] = number(parts[i].substr(eq + 1));
    }
    return r;
}

LightCoeffs load_light_source(const std::string &source, ShDegree degree, double target) {
    if (is_procedural_env(source))
        return normalize_env(project_env(make_procedural_env(source), degree), target);
    if (!fs::exists(source))
        throw LoadError("light source not found: " + source);
    if (lower(fs::path(source).extension().string()) == ".txt")
        return read_light_file(source);
    return normalize_env(project_env(load_environment(source), degree), target);
}

std::vector<std::string> manifest_args(const json &manifest) {
    if (!manifest.contains("args") || !manifest["args"].is_array())
        throw ArgumentError("manifest has no 'args' array");
    return manifest["args"].get<std::vector<std::string>>();
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Precomputed radiance transfer relighting engine", "prt"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ProjectEnvOptions pe;
    auto *c_pe = app.add_subcommand("project-env", "Project an environment map onto SH coefficients");
    c_pe->add_option("--env", pe.env, "Radiance .hdr, RGB .pfm or procedural name")->required();
    c_pe->add_option("--degree", pe.degree, "SH degree")->check(CLI::IsMember({2, 4}));
    c_pe->add_option("--rotation", pe.rotation, "yaw,pitch,roll in degrees");
    c_pe->add_option("--normalize", pe.normalize, "Scale to this reference radiance");
    c_pe->add_option("--out", pe.out, "Light text file")->required();

    TransportOptions tr;
    auto *c_tr = app.add_subcommand("transport", "Render buffers and transport for a scene config");
    c_tr->add_option("--scene", tr.scene, "Scene config (JSON)")->required();
    c_tr->add_option("--degree", tr.degree, "SH degree")->check(CLI::IsMember({2, 4}));
    c_tr->add_option("--mode", tr.mode, "cos, cosvis or full")->check(CLI::IsMember({"cos", "cosvis", "full"}));
    c_tr->add_option("--samples", tr.samples, "Transport samples per pixel");
    c_tr->add_option("--seed", tr.seed, "Seed");
    c_tr->add_option("--workers", tr.workers, "Worker threads (0 = all)");
    c_tr->add_option("--out", tr.out, "Decomposed scene (.shc)")->required();

    FitOptions fr;
    auto *c_fr = app.add_subcommand("fit-residual", "Fit residual coefficients against path-traced images");
    c_fr->add_option("--scene", fr.scene, "Decomposed scene (.shc)")->required();
    c_fr->add_option("--train-lights", fr.train_lights, "Directory of <name>/light.txt + <name>/pt.pfm")
        ->required();
    c_fr->add_option("--lambda", fr.lambda, "Ridge weight, or 'auto' for cross-validation");
    c_fr->add_option("--workers", fr.workers, "Worker threads (0 = all)");
    c_fr->add_option("--out", fr.out, "Output decomposed scene (.shc)")->required();

    RelightOptions rl;
    auto *c_rl = app.add_subcommand("relight", "Relight a decomposed scene");
    c_rl->add_option("--scene", rl.scene, "Decomposed scene (.shc)")->required();
    c_rl->add_option("--light", rl.light, "Light text file");
    c_rl->add_option("--env", rl.env, "Radiance .hdr, RGB .pfm or procedural name");
    c_rl->add_option("--rotation", rl.rotation, "yaw,pitch,roll in degrees");
    c_rl->add_option("--exposure", rl.exposure, "Exposure in stops");
    c_rl->add_option("--gamma", rl.gamma, "Display gamma")->check(CLI::PositiveNumber);
    c_rl->add_option("--normalize", rl.normalize, "Reference radiance for --env maps")->check(CLI::PositiveNumber);
    c_rl->add_option("--out", rl.out, "Output PNG")->required();
    c_rl->add_option("--linear", rl.linear, "Also write the linear image (.pfm)");

    DatasetOptions ds;
    auto *c_ds = app.add_subcommand("dataset-gen", "Render a scenes x lights grid");
    c_ds->add_option("--config", ds.config, "Dataset config (JSON)")->required();
    c_ds->add_option("--out", ds.out, "Output directory")->required();
    c_ds->add_option("--workers", ds.workers, "Worker threads (0 = all)");

    EvalOptions ev;
    auto *c_ev = app.add_subcommand("eval", "Compare predicted and ground-truth images");
    c_ev->add_option("--pred", ev.pred, "Prediction directory")->required();
    c_ev->add_option("--gt", ev.gt, "Ground-truth directory")->required();
    c_ev->add_flag("--mask,!--no-mask", ev.mask, "Restrict metrics to the subject mask (default on)");
    c_ev->add_option("--out", ev.out, "JSON report (stdout when omitted)");

    ServeOptions sv;
    auto *c_sv = app.add_subcommand("serve", "Run the relighting HTTP service");
    c_sv->add_option("--host", sv.host, "Bind address");
    c_sv->add_option("--port", sv.port, "Port");
    c_sv->add_option("--assets", sv.assets, "Asset root with scenes/ and envs/");
    c_sv->add_option("--max-upload-mb", sv.max_upload_mb, "Upload size limit")->check(CLI::PositiveNumber);

    std::string manifest;
    auto *c_rr = app.add_subcommand("rerun", "Re-run the command recorded in a manifest");
    c_rr->add_option("--manifest", manifest, "manifest.json")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_pe->parsed())
            return cmd_project_env(pe, args, out);
        if (c_tr->parsed())
            return cmd_transport(tr, args, out);
        if (c_fr->parsed())
            return cmd_fit_residual(fr, args, out);
        if (c_rl->parsed())
            return cmd_relight(rl, args, out);
        if (c_ds->parsed())
            return cmd_dataset_gen(ds, args, out, err);
        if (c_ev->parsed())
            return cmd_eval(ev, args, out, err);
        if (c_sv->parsed())
            return cmd_serve(sv, out);
        if (c_rr->parsed())
            return run_cli(manifest_args(load_json_file(manifest)), out, err);
    } catch (const ArgumentError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const LoadError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NormalizationError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SolverError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace prt
