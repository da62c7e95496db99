#include "softwg/pipeline.hpp"

#include "softwg/errors.hpp"
#include "softwg/numerics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace softwg {

using ordered = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// json has no infinity; emit the value CSV prints
ordered json_number(double x) {
    if (std::isfinite(x)) return ordered(x);
    return ordered(format_g17(x));
}

ordered config_block(const RunConfig& cfg) { return ordered::parse(resolved_config_json(cfg)); }

std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

} // namespace

TransverseRunReport run_transverse(const RunConfig& cfg) {
    TransverseRunReport rep;
    const TransverseGroundState gs = solve_ground_state(cfg.profile);
    rep.E1 = gs.E1;
    rep.N_plus = gs.N_plus;
    rep.N_minus = gs.N_minus;
    rep.expected_slope = -2.0 * gs.decay_rate();

    for (double R : cfg.R_list) {
        const DoubleWellResult dw = solve_double_well(cfg.profile, R);
        rep.rows.push_back({R, dw.E1R, dw.upper_bound, gs.E1 - dw.E1R});
    }

    // least-squares fit of ln(gap) against R
    if (rep.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& row : rep.rows) {
            const double y = std::log(std::max(row.gap, 1e-300));
            sx += row.R;
            sy += y;
            sxx += row.R * row.R;
            sxy += row.R * y;
        }
        const double n = static_cast<double>(rep.rows.size());
        rep.gap_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
        rep.gap_slope = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

VariationalRunReport run_variational(const RunConfig& cfg) {
    VariationalRunReport rep;
    const WaveguideGeometry g = cfg.geometry();
    const TransverseGroundState gs = solve_ground_state(cfg.profile);

    for (int n : cfg.n_list) {
        const Mollifier m{std::max(n, static_cast<int>(std::ceil(g.junction_s())))};
        rep.breakdowns.push_back(q_tilde_full_quadrature(g, cfg.profile, gs, m));
    }

    if (g.theta == 0.0) {
        rep.straight = true;
        rep.limit = 0.0;
        rep.certificate_note = "no certificate (straight)";
        return rep;
    }
    if (g.theta >= M_PI) {
        rep.divergent = true;
        rep.limit = -kInf; // the exterior term keeps growing with n
    } else {
        rep.limit = variational_limit(g, gs);
    }
    rep.certificate = bound_state_certificate(g, cfg.profile);
    return rep;
}

SpectrumRunReport run_spectrum(const RunConfig& cfg, int threads,
                               const std::string& matrix_dump_path) {
    SpectrumRunReport rep;
    const WaveguideGeometry g = cfg.geometry();
    const Grid2D grid{cfg.grid.x_min, cfg.grid.x_max, cfg.grid.y_min, cfg.grid.y_max,
                      cfg.grid.h};

    if (!matrix_dump_path.empty()) {
        const PotentialField field = sample_potential(g, cfg.profile, grid, threads);
        const SparseSymMatrix A = assemble(grid, field);
        std::ofstream out(matrix_dump_path);
        if (!out) throw Error("cannot open matrix dump path " + matrix_dump_path);
        A.dump_coordinate(out);
    }

    rep.spectral = discrete_spectrum(g, cfg.profile, grid, cfg.solver.k, cfg.solver.tol,
                                     cfg.solver.seed, threads, cfg.grid.refinement_levels);
    if (g.theta == 0.0)
        rep.variational_limit = 0.0;
    else if (g.theta >= M_PI)
        rep.variational_limit = -kInf;
    else
        rep.variational_limit = variational_limit(g, solve_ground_state(cfg.profile));
    return rep;
}

std::vector<SweepRowReport> run_sweep(const RunConfig& cfg, int threads) {
    const std::size_t rows = cfg.theta_list.size();
    std::vector<SweepRowReport> out(rows);

    // worker pool over rows, buffered and emitted in input order; each row's
    // pipeline stays deterministic regardless of the pool size
    const int pool = std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>(rows)));
    const int inner = std::max(1, resolve_threads(threads) / pool);

    parallel_for(rows, pool, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            SweepRowReport& row = out[i];
            row.theta = cfg.theta_list[i];
            try {
                RunConfig local = cfg;
                local.theta = row.theta;
                const WaveguideGeometry g = local.geometry();
                const TransverseGroundState gs = solve_ground_state(local.profile);
                row.E1 = gs.E1;
                const SpectralReport sp =
                    discrete_spectrum(g, local.profile,
                                      Grid2D{local.grid.x_min, local.grid.x_max,
                                             local.grid.y_min, local.grid.y_max, local.grid.h},
                                      local.solver.k, local.solver.tol, local.solver.seed, inner,
                                      local.grid.refinement_levels);
                row.threshold = sp.threshold;
                row.lambdas = sp.eigenvalues;
                row.binding_count = sp.binding_count;
                row.variational_limit = variational_limit(g, gs);
                row.certificate_n0 = bound_state_certificate(g, local.profile).n0;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string to_csv(const TransverseRunReport& r) {
    std::string out = "R,E1,N_plus,N_minus,E1R,upper_bound,gap,gap_slope,expected_slope\n";
    for (const auto& row : r.rows) {
        out += csv_join({format_g17(row.R), format_g17(r.E1), format_g17(r.N_plus),
                         format_g17(r.N_minus), format_g17(row.E1R), format_g17(row.upper_bound),
                         format_g17(row.gap), format_g17(r.gap_slope),
                         format_g17(r.expected_slope)});
    }
    return out;
}

std::string to_csv(const VariationalRunReport& r) {
    std::string out = "n,q1,q2_int,q2_ext,total,limit,certificate_n0,certificate_value\n";
    const std::string n0 = r.certificate ? std::to_string(r.certificate->n0) : "0";
    const std::string cval =
        r.certificate ? format_g17(r.certificate->value) : std::string("nan");
    for (const auto& b : r.breakdowns) {
        out += csv_join({std::to_string(b.n), format_g17(b.q1), format_g17(b.q2_int),
                         format_g17(b.q2_ext), format_g17(b.total), format_g17(r.limit), n0,
                         cval});
    }
    return out;
}

std::string to_csv(const SpectrumRunReport& r, const RunConfig& cfg) {
    const int k = static_cast<int>(r.spectral.eigenvalues.size());
    std::vector<std::string> head{"R", "theta", "a", "h_coarse", "h_fine", "threshold"};
    for (int i = 1; i <= k; ++i) head.push_back("lambda_" + std::to_string(i));
    for (int i = 1; i <= k; ++i) head.push_back("margin_" + std::to_string(i));
    for (int i = 1; i <= k; ++i) head.push_back("disagreement_" + std::to_string(i));
    head.push_back("binding_count");
    head.push_back("variational_limit");

    std::vector<std::string> cells{
        format_g17(cfg.R),
        format_g17(cfg.theta),
        format_g17(cfg.a),
        format_g17(r.spectral.levels[r.spectral.levels.size() - 2].h),
        format_g17(r.spectral.levels.back().h),
        format_g17(r.spectral.threshold)};
    for (double v : r.spectral.eigenvalues) cells.push_back(format_g17(v));
    for (double v : r.spectral.margins) cells.push_back(format_g17(v));
    for (double v : r.spectral.disagreement) cells.push_back(format_g17(v));
    cells.push_back(std::to_string(r.spectral.binding_count));
    cells.push_back(format_g17(r.variational_limit));
    return csv_join(head) + csv_join(cells);
}

std::string to_csv(const std::vector<SweepRowReport>& rows, const RunConfig& cfg) {
    const int k = cfg.solver.k;
    std::vector<std::string> head{"theta", "E1", "threshold"};
    for (int i = 1; i <= k; ++i) head.push_back("lambda_" + std::to_string(i));
    head.insert(head.end(), {"binding_count", "variational_limit", "certificate_n0", "errors"});
    std::string out = csv_join(head);
    for (const auto& row : rows) {
        std::vector<std::string> cells{format_g17(row.theta), format_g17(row.E1),
                                       format_g17(row.threshold)};
        for (int i = 0; i < k; ++i)
            cells.push_back(i < static_cast<int>(row.lambdas.size())
                                ? format_g17(row.lambdas[i])
                                : std::string("nan"));
        cells.push_back(std::to_string(row.binding_count));
        cells.push_back(format_g17(row.variational_limit));
        cells.push_back(std::to_string(row.certificate_n0));
        cells.push_back(row.error.empty() ? "" : "\"" + row.error + "\"");
        out += csv_join(cells);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const TransverseRunReport& r, const RunConfig& cfg) {
    ordered doc;
    doc["experiment"] = "transverse";
    doc["config"] = config_block(cfg);
    doc["report"]["E1"] = r.E1;
    doc["report"]["N_plus"] = r.N_plus;
    doc["report"]["N_minus"] = r.N_minus;
    doc["report"]["gap_slope"] = json_number(r.gap_slope);
    doc["report"]["expected_slope"] = r.expected_slope;
    auto& rows = doc["report"]["double_well"];
    rows = ordered::array();
    for (const auto& row : r.rows)
        rows.push_back({{"R", row.R},
                        {"E1R", row.E1R},
                        {"upper_bound", row.upper_bound},
                        {"gap", row.gap}});
    return doc.dump(2);
}

std::string to_json(const VariationalRunReport& r, const RunConfig& cfg) {
    ordered doc;
    doc["experiment"] = "variational";
    doc["config"] = config_block(cfg);
    auto& rows = doc["report"]["breakdowns"];
    rows = ordered::array();
    for (const auto& b : r.breakdowns)
        rows.push_back({{"n", b.n},
                        {"q1", b.q1},
                        {"q2_int", b.q2_int},
                        {"q2_ext", b.q2_ext},
                        {"total", b.total}});
    doc["report"]["limit"] = json_number(r.limit);
    doc["report"]["straight"] = r.straight;
    doc["report"]["divergent"] = r.divergent;
    if (r.divergent) doc["report"]["limit_note"] = "-inf (divergent exterior term)";
    if (r.certificate) {
        doc["report"]["certificate"] = {{"n0", r.certificate->n0},
                                        {"value", r.certificate->value}};
    } else {
        doc["report"]["certificate"] = nullptr;
        doc["report"]["certificate_note"] = r.certificate_note;
    }
    return doc.dump(2);
}

std::string to_json(const SpectrumRunReport& r, const RunConfig& cfg) {
    ordered doc;
    doc["experiment"] = "spectrum";
    doc["config"] = config_block(cfg);
    doc["report"]["threshold"] = r.spectral.threshold;
    doc["report"]["eigenvalues"] = r.spectral.eigenvalues;
    doc["report"]["margins"] = r.spectral.margins;
    doc["report"]["disagreement"] = r.spectral.disagreement;
    doc["report"]["binding_count"] = r.spectral.binding_count;
    doc["report"]["variational_limit"] = json_number(r.variational_limit);
    auto& levels = doc["report"]["levels"];
    levels = ordered::array();
    for (const auto& lv : r.spectral.levels)
        levels.push_back({{"h", lv.h},
                          {"eigenvalues", lv.eigenvalues},
                          {"iterations", lv.iterations}});
    return doc.dump(2);
}

std::string to_json(const std::vector<SweepRowReport>& rows, const RunConfig& cfg) {
    ordered doc;
    doc["experiment"] = "sweep";
    doc["config"] = config_block(cfg);
    auto& arr = doc["report"]["rows"];
    arr = ordered::array();
    for (const auto& row : rows) {
        ordered r{{"theta", row.theta},
                  {"E1", row.E1},
                  {"threshold", row.threshold},
                  {"lambdas", row.lambdas},
                  {"binding_count", row.binding_count},
                  {"variational_limit", json_number(row.variational_limit)},
                  {"certificate_n0", row.certificate_n0}};
        if (!row.error.empty()) r["error"] = row.error;
        arr.push_back(std::move(r));
    }
    return doc.dump(2);
}

} // namespace softwg
