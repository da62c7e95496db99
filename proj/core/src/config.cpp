#include "softwg/config.hpp"

#include "softwg/errors.hpp"
#include "softwg/hamiltonian2d.hpp"
#include "softwg/numerics.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace softwg {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw ConfigError(std::string("config: unknown field \"") + it.key() + "\" in " +
                              where);
    }
}

double need_number(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError(std::string("config: ") + where + " needs numeric \"" + key + "\"");
    return obj[key].get<double>();
}

TransverseProfile parse_profile(const json& p, const std::string& base_dir, double a) {
    if (!p.is_object() || !p.contains("kind") || !p["kind"].is_string())
        throw ConfigError("config: profile needs a \"kind\" string");
    const std::string kind = p["kind"].get<std::string>();
    if (kind == "delta") {
        reject_unknown(p, "profile", {"kind", "alpha"});
        return DeltaWell{need_number(p, "profile", "alpha")};
    }
    if (kind == "square_well") {
        reject_unknown(p, "profile", {"kind", "V0"});
        // the cross-section fills the channel: half-width is the geometry's a
        return SquareWell{need_number(p, "profile", "V0"), a};
    }
    if (kind == "tabulated") {
        reject_unknown(p, "profile", {"kind", "table_path", "knots", "values"});
        TabulatedWell w;
        if (p.contains("table_path")) {
            const std::filesystem::path path =
                std::filesystem::path(base_dir) / p["table_path"].get<std::string>();
            std::ifstream in(path);
            if (!in) throw ConfigError("config: cannot open table " + path.string());
            double t, v;
            while (in >> t >> v) {
                w.knots.push_back(t);
                w.values.push_back(v);
            }
        } else {
            if (!p.contains("knots") || !p.contains("values"))
                throw ConfigError("config: tabulated profile needs table_path or knots+values");
            w.knots = p["knots"].get<std::vector<double>>();
            w.values = p["values"].get<std::vector<double>>();
        }
        return w;
    }
    throw ConfigError("config: profile kind must be delta, square_well or tabulated");
}

} // namespace

Experiment experiment_from_string(const std::string& name) {
    if (name == "transverse") return Experiment::transverse;
    if (name == "variational") return Experiment::variational;
    if (name == "spectrum") return Experiment::spectrum;
    if (name == "sweep") return Experiment::sweep;
    throw ConfigError("unknown experiment \"" + name + "\"");
}

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::transverse: return "transverse";
        case Experiment::variational: return "variational";
        case Experiment::spectrum: return "spectrum";
        case Experiment::sweep: return "sweep";
    }
    return "?";
}

OutputFormat format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format \"" + name + "\"");
}

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc, "config",
                   {"geometry", "profile", "grid", "solver", "transverse", "variational",
                    "sweep"});

    RunConfig cfg;

    if (!doc.contains("geometry")) throw ConfigError("config: missing \"geometry\"");
    const json& geo = doc["geometry"];
    reject_unknown(geo, "geometry", {"R", "theta", "a"});
    cfg.R = need_number(geo, "geometry", "R");
    cfg.theta = need_number(geo, "geometry", "theta");
    cfg.a = need_number(geo, "geometry", "a");
    (void)cfg.geometry(); // re-validate the module invariants

    if (!doc.contains("profile")) throw ConfigError("config: missing \"profile\"");
    cfg.profile = parse_profile(doc["profile"], base_dir, cfg.a);
    validate(cfg.profile);
    if (support_half_width(cfg.profile) > cfg.a * (1.0 + 1e-12))
        throw ConfigError("config: profile support must stay inside [-a, a]");

    if (doc.contains("grid")) {
        const json& gr = doc["grid"];
        reject_unknown(gr, "grid", {"h", "box", "refinement_levels"});
        if (gr.contains("h")) cfg.grid.h = need_number(gr, "grid", "h");
        if (gr.contains("box")) {
            const auto box = gr["box"].get<std::vector<double>>();
            if (box.size() != 4)
                throw ConfigError("config: grid.box must be [x_min, x_max, y_min, y_max]");
            cfg.grid.x_min = box[0];
            cfg.grid.x_max = box[1];
            cfg.grid.y_min = box[2];
            cfg.grid.y_max = box[3];
        }
        if (gr.contains("refinement_levels"))
            cfg.grid.refinement_levels = gr["refinement_levels"].get<int>();
        if (cfg.grid.refinement_levels < 2)
            throw ConfigError("config: refinement_levels must be at least 2");
    }

    if (doc.contains("solver")) {
        const json& so = doc["solver"];
        reject_unknown(so, "solver", {"k", "tol", "seed", "max_iterations"});
        if (so.contains("k")) cfg.solver.k = so["k"].get<int>();
        if (so.contains("tol")) cfg.solver.tol = need_number(so, "solver", "tol");
        if (so.contains("seed")) cfg.solver.seed = so["seed"].get<std::uint64_t>();
        if (so.contains("max_iterations"))
            cfg.solver.max_iterations = so["max_iterations"].get<int>();
        if (cfg.solver.k < 1) throw ConfigError("config: solver.k must be positive");
        if (!(cfg.solver.tol > 0.0)) throw ConfigError("config: solver.tol must be positive");
        if (cfg.solver.max_iterations < 1)
            throw ConfigError("config: solver.max_iterations must be positive");
    }

    if (doc.contains("transverse")) {
        const json& tr = doc["transverse"];
        reject_unknown(tr, "transverse", {"R_list"});
        if (tr.contains("R_list")) cfg.R_list = tr["R_list"].get<std::vector<double>>();
    }
    if (doc.contains("variational")) {
        const json& va = doc["variational"];
        reject_unknown(va, "variational", {"n_list"});
        if (va.contains("n_list")) cfg.n_list = va["n_list"].get<std::vector<int>>();
        for (int n : cfg.n_list)
            if (n < 1) throw ConfigError("config: variational n_list entries must be positive");
    }
    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        reject_unknown(sw, "sweep", {"theta_list"});
        if (sw.contains("theta_list"))
            cfg.theta_list = sw["theta_list"].get<std::vector<double>>();
        for (double t : cfg.theta_list)
            if (!(t > 0.0 && t < M_PI))
                throw ConfigError("config: sweep theta_list must lie strictly inside (0, pi)");
    }

    // the grid must be constructible (divisibility checks live there)
    (void)Grid2D{cfg.grid.x_min, cfg.grid.x_max, cfg.grid.y_min, cfg.grid.y_max, cfg.grid.h};
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_config(buf.str(), dir.empty() ? "." : dir);
}

std::string resolved_config_json(const RunConfig& cfg) {
    ordered doc;
    doc["geometry"] = {{"R", cfg.R}, {"theta", cfg.theta}, {"a", cfg.a}};
    if (const auto* d = std::get_if<DeltaWell>(&cfg.profile)) {
        doc["profile"] = {{"kind", "delta"}, {"alpha", d->alpha}};
    } else if (const auto* w = std::get_if<SquareWell>(&cfg.profile)) {
        doc["profile"] = {{"kind", "square_well"}, {"V0", w->depth}};
    } else {
        const auto& t = std::get<TabulatedWell>(cfg.profile);
        doc["profile"] = {{"kind", "tabulated"}, {"knots", t.knots}, {"values", t.values}};
    }
    doc["grid"] = {{"h", cfg.grid.h},
                   {"box", {cfg.grid.x_min, cfg.grid.x_max, cfg.grid.y_min, cfg.grid.y_max}},
                   {"refinement_levels", cfg.grid.refinement_levels}};
    doc["solver"] = {{"k", cfg.solver.k},
                     {"tol", cfg.solver.tol},
                     {"seed", cfg.solver.seed},
                     {"max_iterations", cfg.solver.max_iterations}};
    doc["transverse"] = {{"R_list", cfg.R_list}};
    doc["variational"] = {{"n_list", cfg.n_list}};
    doc["sweep"] = {{"theta_list", cfg.theta_list}};
    return doc.dump(2);
}

} // namespace softwg
