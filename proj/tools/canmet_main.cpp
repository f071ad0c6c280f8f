// canmet: period matrices, the canonical metric, and its Gaussian curvature
// on hyperelliptic curves, plus degeneration sweeps.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "canmet/degeneration.hpp"
#include "canmet/metric.hpp"
#include "canmet/parallel.hpp"
#include "canmet/polyroots.hpp"
#include "canmet/report.hpp"
#include "canmet/sampling.hpp"

using namespace canmet;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::string curve;
    std::string roots;
    double tol = 1e-10;
    int gl_order = 24;
    int max_depth = 12;
    int threads = 0;
    std::string out_dir = ".";
    bool want_json = true;
    bool want_csv = true;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_curve) {
    if (needs_curve) {
        cmd->add_option("--curve", o.curve, "monic polynomial in x, e.g. \"x^6-1\"");
        cmd->add_option("--roots", o.roots, "comma separated branch points, e.g. \"1,-1,2+1i\"");
    }
    cmd->add_option("--tol", o.tol, "quadrature relative tolerance");
    cmd->add_option("--gl-order", o.gl_order, "Gauss-Legendre order");
    cmd->add_option("--max-depth", o.max_depth, "bisection depth limit");
    cmd->add_option("--threads", o.threads, "worker cap (0 = all cores)");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_flag("--json,!--no-json", o.want_json, "emit JSON output");
    cmd->add_flag("--csv,!--no-csv", o.want_csv, "emit CSV output");
}

cplx parse_complex(std::string s) {
    // forms: "1", "-2.5", "3i", "1+2i", "-1.5e-3-2e-4i"
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i') return cplx(std::stod(s), 0.0);
    s.pop_back();
    if (s.empty() || s == "+") return cplx(0, 1);
    if (s == "-") return cplx(0, -1);
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return cplx(0, std::stod(s));
    const double re = std::stod(s.substr(0, split));
    const std::string im = s.substr(split);
    if (im == "+") return cplx(re, 1);
    if (im == "-") return cplx(re, -1);
    return cplx(re, std::stod(im));
}

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(parse_complex(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(parse_complex(cur));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(std::stod(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::stod(cur));
    return out;
}

struct Check {
    std::string name;
    bool pass;
};

struct Run {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::string root_finder;
    std::vector<Check> checks;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void param(const std::string& k, const std::string& v) { params.emplace_back(k, v); }
    void param(const std::string& k, double v) { params.emplace_back(k, format_g17(v)); }
    void param(const std::string& k, int v) { params.emplace_back(k, std::to_string(v)); }

    std::string canonical() const {
        std::string s = "cmd=" + command;
        for (const auto& [k, v] : params) s += ";" + k + "=" + v;
        return s;
    }
    std::string id() const { return run_id_from(canonical()); }

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

std::string utc_now() {
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit_manifest(const CommonOpts& o, Run& run) {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - run.t0)
            .count();
    JsonWriter j;
    j.begin_object();
    j.key("run_id").value(run.id());
    j.key("command").value(run.command);
    j.key("tool_version").value(kVersion);
    j.key("timestamp_utc").value(utc_now());
    j.key("wall_ms").value(ms);
    j.key("parameters").begin_object();
    for (const auto& [k, v] : run.params) j.key(k).value(v);
    j.end_object();
    if (!run.root_finder.empty()) j.key("root_finder").value(run.root_finder);
    j.key("checks").begin_array();
    for (const auto& c : run.checks) {
        j.begin_object();
        j.key("name").value(c.name);
        j.key("pass").value(c.pass);
        j.end_object();
    }
    j.end_array();
    j.key("outputs").begin_array();
    for (const auto& f : run.outputs) j.value(f);
    j.end_array();
    j.end_object();
    write_text_file(o.out_dir + "/" + run.id() + ".manifest.json", j.str() + "\n");
}

void emit_file(const CommonOpts& o, Run& run, const std::string& name,
               const std::string& content) {
    run.outputs.push_back(name);
    write_text_file(o.out_dir + "/" + name, content);
    std::cout << "wrote " << o.out_dir + "/" + name << "\n";
}

int finish(const CommonOpts& o, Run& run) {
    for (const auto& c : run.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "\n";
    emit_manifest(o, run);
    return run.all_pass() ? 0 : 2;
}

std::vector<cplx> resolve_branch_points(const CommonOpts& o, Run& run) {
    if (!o.curve.empty() && !o.roots.empty())
        throw std::invalid_argument("give either --curve or --roots, not both");
    if (!o.curve.empty()) {
        run.param("curve", o.curve);
        const auto coeffs = parse_monic_poly(o.curve);
        const int deg = static_cast<int>(coeffs.size()) - 1;
        if (deg < 4 || deg % 2 != 0)
            throw std::invalid_argument("polynomial degree must be even and >= 4");
        run.root_finder = "durand-kerner+newton";
        auto roots = poly_roots(coeffs);
        double scale = 1.0, gap = 1e300;
        for (cplx r : roots) scale = std::max(scale, std::abs(r));
        for (size_t i = 0; i < roots.size(); ++i)
            for (size_t j = i + 1; j < roots.size(); ++j)
                gap = std::min(gap, std::abs(roots[i] - roots[j]));
        if (gap < 1e-6 * scale)
            throw std::invalid_argument("polynomial has repeated (or nearly repeated) roots");
        return roots;
    }
    if (!o.roots.empty()) {
        run.param("roots", o.roots);
        return parse_complex_list(o.roots);
    }
    throw std::invalid_argument("a curve is required: --curve or --roots");
}

void common_params(const CommonOpts& o, Run& run) {
    run.param("tol", o.tol);
    run.param("gl_order", o.gl_order);
    run.param("max_depth", o.max_depth);
}

void json_matrix(JsonWriter& j, const Eigen::MatrixXcd& m) {
    j.begin_array();
    for (int i = 0; i < m.rows(); ++i) {
        j.begin_array();
        for (int k = 0; k < m.cols(); ++k) j.value(m(i, k));
        j.end_array();
    }
    j.end_array();
}

struct CurveContext {
    CurveModel curve;
    CycleBasis basis;
    RiemannMatrix rm;

    CurveContext(std::vector<cplx> pts, const QuadratureConfig& cfg)
        : curve(BranchSet::make(std::move(pts))),
          basis(cycle_basis(curve)),
          rm(riemann_matrix(curve, basis, cfg)) {}
};

int cmd_periods(const CommonOpts& o, Run& run) {
    const auto pts = resolve_branch_points(o, run);
    common_params(o, run);
    const QuadratureConfig cfg{o.gl_order, o.tol, o.max_depth};
    const CurveContext ctx(pts, cfg);

    run.checks.push_back({"symmetry_residual <= 1e-8", ctx.rm.symmetry_residual <= 1e-8});
    run.checks.push_back({"im_omega_positive_definite", ctx.rm.min_eig_im > 0});

    if (o.want_json) {
        JsonWriter j;
        j.begin_object();
        j.key("run_id").value(run.id());
        j.key("manifest").value(run.id() + ".manifest.json");
        j.key("genus").value(ctx.rm.genus);
        j.key("P");
        json_matrix(j, ctx.rm.P);
        j.key("Q");
        json_matrix(j, ctx.rm.Q);
        j.key("omega");
        json_matrix(j, ctx.rm.omega);
        j.key("symmetry_residual").value(ctx.rm.symmetry_residual);
        j.key("min_eig_im").value(ctx.rm.min_eig_im);
        j.end_object();
        emit_file(o, run, "periods-" + run.id() + ".json", j.str() + "\n");
    }
    return finish(o, run);
}

int cmd_curvature(const CommonOpts& o, Run& run, int nx, int ny, const std::string& window,
                  const std::string& sheets) {
    const auto pts = resolve_branch_points(o, run);
    common_params(o, run);
    run.param("nx", nx);
    run.param("ny", ny);
    run.param("sheets", sheets);
    const QuadratureConfig cfg{o.gl_order, o.tol, o.max_depth};
    const CurveContext ctx(pts, cfg);
    const MetricEvaluator ev(ctx.curve, ctx.rm);

    double x0, x1, y0, y1;
    if (!window.empty()) {
        run.param("window", window);
        const auto vals = parse_double_list(window);
        if (vals.size() != 4) throw std::invalid_argument("--window needs x0,x1,y0,y1");
        x0 = vals[0];
        x1 = vals[1];
        y0 = vals[2];
        y1 = vals[3];
    } else {
        double rmax = 0;
        for (cplx p : ctx.curve.branch().points) rmax = std::max(rmax, std::abs(p));
        const double r = 1.5 * rmax + 0.5;
        x0 = -r;
        x1 = r;
        y0 = -r;
        y1 = r;
    }

    std::vector<int> sheet_list;
    if (sheets == "both")
        sheet_list = {1, 2};
    else if (sheets == "1" || sheets == "2")
        sheet_list = {std::stoi(sheets)};
    else
        throw std::invalid_argument("--sheets must be 1, 2, or both");

    // rho is the x-chart density; near branch points it is evaluated in the
    // branch chart and converted (it is the same on both sheets).
    std::vector<MetricEvaluator::XSample> samples(static_cast<size_t>(nx) * ny);
    std::vector<cplx> grid(samples.size());
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double gx = (nx == 1) ? x0 : x0 + (x1 - x0) * ix / (nx - 1);
            const double gy = (ny == 1) ? y0 : y0 + (y1 - y0) * iy / (ny - 1);
            grid[static_cast<size_t>(iy) * nx + ix] = cplx(gx, gy);
        }
    parallel_for(samples.size(), [&](size_t i) { samples[i] = ev.sample_at_x(grid[i]); });

    if (o.want_csv) {
        CsvWriter csv({"re_x", "im_x", "sheet", "rho", "K"});
        for (int sheet : sheet_list)
            for (size_t i = 0; i < samples.size(); ++i)
                csv.row({grid[i].real(), grid[i].imag(), static_cast<double>(sheet),
                         samples[i].rho_x, samples[i].K});
        emit_file(o, run, "curvature-" + run.id() + ".csv", csv.str());
    }
    return finish(o, run);
}

int cmd_area(const CommonOpts& o, Run& run) {
    const auto pts = resolve_branch_points(o, run);
    common_params(o, run);
    const QuadratureConfig cfg{o.gl_order, o.tol, o.max_depth};
    const CurveContext ctx(pts, cfg);
    const MetricEvaluator ev(ctx.curve, ctx.rm);
    const int g = ctx.curve.genus();

    const double area = ev.surface_area();
    const double total = ev.total_curvature();
    const double gb = 2.0 * pi * (2.0 - 2.0 * g);
    const Eigen::MatrixXcd gram = ev.gram_matrix();
    const Eigen::MatrixXd im = ctx.rm.omega.imag();
    double gram_err = 0;
    for (int i = 0; i < g; ++i)
        for (int k = 0; k < g; ++k)
            gram_err = std::max(gram_err, std::abs(gram(i, k) - cplx(im(i, k), 0)));
    const double im_scale = im.cwiseAbs().maxCoeff();

    run.checks.push_back({"area within 1% of genus", std::abs(area - g) <= 0.01 * g});
    if (g == 1)
        run.checks.push_back({"total curvature within 0.05 of 0", std::abs(total) <= 0.05});
    else
        run.checks.push_back({"total curvature within 2% of 2pi(2-2g)",
                              std::abs(total - gb) <= 0.02 * std::abs(gb)});
    run.checks.push_back({"gram pairing within 1% of Im(omega)", gram_err <= 0.01 * im_scale});

    if (o.want_json) {
        JsonWriter j;
        j.begin_object();
        j.key("run_id").value(run.id());
        j.key("manifest").value(run.id() + ".manifest.json");
        j.key("genus").value(g);
        j.key("area").value(area);
        j.key("expected_g").value(static_cast<double>(g));
        j.key("total_curvature").value(total);
        j.key("expected_gauss_bonnet").value(gb);
        j.key("gram_vs_imomega_maxerr").value(gram_err);
        j.end_object();
        emit_file(o, run, "area-" + run.id() + ".json", j.str() + "\n");
    }
    return finish(o, run);
}

int cmd_weierstrass(const CommonOpts& o, Run& run) {
    const auto pts = resolve_branch_points(o, run);
    common_params(o, run);
    const QuadratureConfig cfg{o.gl_order, o.tol, o.max_depth};
    const CurveContext ctx(pts, cfg);
    const MetricEvaluator ev(ctx.curve, ctx.rm);
    const BranchSet& br = ctx.curve.branch();

    std::vector<double> branch_absK;
    for (int j = 0; j < br.count(); ++j)
        branch_absK.push_back(
            std::abs(ev.curvature(branch_chart_point(ctx.curve, j, cplx(0, 0))).K));

    double rmax = 0;
    for (cplx p : br.points) rmax = std::max(rmax, std::abs(p));
    const auto generic = generic_x_samples(br, 50, 405060, 1.2 * rmax, 1.3 * br.r_chart());
    std::vector<double> ks(generic.size());
    parallel_for(generic.size(), [&](size_t i) { ks[i] = ev.sample_at_x(generic[i]).K; });
    double kmin = ks[0], kmax = ks[0];
    for (double k : ks) {
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    double branch_max = 0;
    for (double v : branch_absK) branch_max = std::max(branch_max, v);

    run.checks.push_back({"|K| <= 1e-6 at every branch point", branch_max <= 1e-6});
    if (ctx.curve.genus() == 1)
        run.checks.push_back({"|K| <= 1e-8 at generic points (flat torus)",
                              std::max(std::abs(kmin), std::abs(kmax)) <= 1e-8});
    else
        run.checks.push_back({"K < 0 at generic points", kmax < 0});

    if (o.want_json) {
        JsonWriter j;
        j.begin_object();
        j.key("run_id").value(run.id());
        j.key("manifest").value(run.id() + ".manifest.json");
        j.key("genus").value(ctx.curve.genus());
        j.key("branch_abs_K").begin_array();
        for (double v : branch_absK) j.value(v);
        j.end_array();
        j.key("generic").begin_object();
        j.key("count").value(static_cast<int>(generic.size()));
        j.key("min_K").value(kmin);
        j.key("max_K").value(kmax);
        j.end_object();
        j.end_object();
        emit_file(o, run, "weierstrass-" + run.id() + ".json", j.str() + "\n");
    }
    return finish(o, run);
}

int cmd_pinch(const CommonOpts& o, Run& run, const std::string& kind, const std::string& t_grid,
              int angles, const std::string& alphas, const std::string& betas) {
    common_params(o, run);
    run.param("kind", kind);
    run.param("angles", angles);
    QuadratureConfig cfg{o.gl_order, o.tol, o.max_depth};
    if (cfg.max_depth < 26) cfg.max_depth = 26; // near-collision integrands need depth

    std::vector<double> grid;
    if (!t_grid.empty()) {
        run.param("t_grid", t_grid);
        grid = parse_double_list(t_grid);
    } else if (kind == "nonsep") {
        for (int k = 0; k <= 4; ++k) grid.push_back(std::pow(10.0, -2.0 - 0.5 * k));
    } else {
        grid = {1e-2, 1e-3, 1e-4};
    }
    std::vector<cplx> alpha_set = default_sep_alphas();
    std::vector<cplx> beta_set = (kind == "sep") ? default_sep_betas() : default_nonsep_betas();
    if (!alphas.empty()) {
        run.param("alphas", alphas);
        alpha_set = parse_complex_list(alphas);
    }
    if (!betas.empty()) {
        run.param("betas", betas);
        beta_set = parse_complex_list(betas);
    }

    if (kind == "nonsep") {
        const ScalingReport rep = nonsep_sweep(grid, angles, cfg, o.want_csv ? 12 : 0, beta_set);
        run.checks.push_back({"M_mid strictly increasing", rep.mid_increasing});
        run.checks.push_back({"M_mid/L within 1.3x band", rep.mid_band <= 1.3});
        run.checks.push_back({"M_outer within 2x band", rep.outer_band <= 2.0});
        run.checks.push_back({"M_inner strictly decreasing", rep.inner_decreasing});
        run.checks.push_back({"M_inner/(|t_p| L^2) within 3x band", rep.inner_band <= 3.0});
        bool collar_ok = true;
        for (const auto& r : rep.rows)
            collar_ok = collar_ok && r.c_low >= 1.0 / 20.0 && r.c_high <= 20.0;
        run.checks.push_back({"collar density within [1/20, 20]", collar_ok});
        run.checks.push_back(
            {"collar bounds stable within 2x", rep.c_low_band <= 2.0 && rep.c_high_band <= 2.0});
        bool iratio_ok = true;
        for (const auto& r : rep.rows)
            iratio_ok = iratio_ok && r.I_ratio >= 1.0 / 3.0 && r.I_ratio <= 3.0;
        run.checks.push_back({"collar integral ratio in [1/3, 3]", iratio_ok});
        run.checks.push_back({"collar integral stable within 30%", rep.I_band <= 1.3});
        run.checks.push_back(
            {"Im(omega) decade differences stable within 20%", rep.im_decade_var <= 0.2});
        run.checks.push_back({"a^11 L within 2x band", rep.a11_band <= 2.0});
        run.checks.push_back({"offdiag a^jk L within 2x band", rep.offdiag_band <= 2.0});

        if (o.want_json) {
            JsonWriter j;
            j.begin_object();
            j.key("run_id").value(run.id());
            j.key("manifest").value(run.id() + ".manifest.json");
            j.key("kind").value("nonsep");
            j.key("u_max").value(collar_u_max);
            j.key("angles").value(angles);
            j.key("rows").begin_array();
            for (const auto& r : rep.rows) {
                j.begin_object();
                j.key("t").value(r.t);
                j.key("L").value(r.L);
                j.key("m_outer").value(r.m_outer);
                j.key("m_mid").value(r.m_mid);
                j.key("m_inner").value(r.m_inner);
                j.key("mid_over_L").value(r.mid_over_L);
                j.key("inner_env").value(r.inner_env);
                j.key("c_low").value(r.c_low);
                j.key("c_high").value(r.c_high);
                j.key("collar_integral").value(r.collar_I);
                j.key("integral_ratio").value(r.I_ratio);
                j.key("im_omega_dom").value(r.gram.im_dom);
                j.key("a_dom_L").value(r.gram.a_dom_L);
                j.key("offdiag_L").value(r.gram.offdiag_L);
                j.key("dominant_index").value(r.gram.dominant);
                j.end_object();
            }
            j.end_array();
            j.key("bands").begin_object();
            j.key("mid").value(rep.mid_band);
            j.key("outer").value(rep.outer_band);
            j.key("inner_env").value(rep.inner_band);
            j.key("c_low").value(rep.c_low_band);
            j.key("c_high").value(rep.c_high_band);
            j.key("integral_ratio").value(rep.I_band);
            j.key("im_decade_variation").value(rep.im_decade_var);
            j.key("a_dom_L").value(rep.a11_band);
            j.key("offdiag_L").value(rep.offdiag_band);
            j.end_object();
            j.end_object();
            emit_file(o, run, "pinch-" + run.id() + ".json", j.str() + "\n");
        }
        if (o.want_csv) {
            CsvWriter csv({"t", "L", "radius", "max_abs_K", "median_abs_K"});
            for (const auto& r : rep.rows)
                for (const auto& st : r.profile)
                    csv.row({r.t, r.L, st.radius, st.max_abs_K, st.median_abs_K});
            emit_file(o, run, "pinch-" + run.id() + ".csv", csv.str());
        }
        return finish(o, run);
    }
    if (kind != "sep") throw std::invalid_argument("--kind must be nonsep or sep");

    const SepReport rep = sep_sweep(grid, cfg, alpha_set, beta_set);
    bool nonpos = true;
    for (const auto& r : rep.rows) nonpos = nonpos && r.max_K_signed <= 1e-9;
    run.checks.push_back({"max|K| at probes within 2x band", rep.k_band <= 2.0});
    run.checks.push_back({"max rho at probes within 2x band", rep.rho_band <= 2.0});
    run.checks.push_back({"K <= 1e-9 at every probe", nonpos});

    if (o.want_json) {
        JsonWriter j;
        j.begin_object();
        j.key("run_id").value(run.id());
        j.key("manifest").value(run.id() + ".manifest.json");
        j.key("kind").value("sep");
        j.key("rows").begin_array();
        for (const auto& r : rep.rows) {
            j.begin_object();
            j.key("eps").value(r.eps);
            j.key("max_abs_K").value(r.max_abs_K);
            j.key("max_rho").value(r.max_rho);
            j.key("max_K_signed").value(r.max_K_signed);
            j.key("edge_max_abs_K").value(r.edge_max_abs_K);
            j.key("edge_max_rho").value(r.edge_max_rho);
            j.end_object();
        }
        j.end_array();
        j.key("bands").begin_object();
        j.key("k").value(rep.k_band);
        j.key("rho").value(rep.rho_band);
        j.key("edge_k").value(rep.edge_k_band);
        j.key("edge_rho").value(rep.edge_rho_band);
        j.end_object();
        j.end_object();
        emit_file(o, run, "pinch-" + run.id() + ".json", j.str() + "\n");
    }
    if (o.want_csv) {
        CsvWriter csv({"eps", "max_abs_K", "max_rho", "edge_max_abs_K", "edge_max_rho"});
        for (const auto& r : rep.rows)
            csv.row({r.eps, r.max_abs_K, r.max_rho, r.edge_max_abs_K, r.edge_max_rho});
        emit_file(o, run, "pinch-" + run.id() + ".csv", csv.str());
    }
    return finish(o, run);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical metric and curvature on hyperelliptic curves"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts o;
    int nx = 40, ny = 40, angles = 64;
    std::string window, sheets = "both", kind = "nonsep", t_grid;

    CLI::App* periods = app.add_subcommand("periods", "period matrices and Riemann relations");
    add_common(periods, o, true);
    CLI::App* curvature = app.add_subcommand("curvature", "rho and K on a sample grid");
    add_common(curvature, o, true);
    curvature->add_option("--nx", nx, "grid columns");
    curvature->add_option("--ny", ny, "grid rows");
    curvature->add_option("--window", window, "x0,x1,y0,y1");
    curvature->add_option("--sheets", sheets, "1, 2, or both");
    CLI::App* area = app.add_subcommand("area", "surface area, total curvature, gram check");
    add_common(area, o, true);
    CLI::App* pinch = app.add_subcommand("pinch", "degenerating family sweeps");
    add_common(pinch, o, false);
    pinch->add_option("--kind", kind, "nonsep or sep");
    pinch->add_option("--t-grid", t_grid, "comma separated pinch parameters, descending");
    pinch->add_option("--angles", angles, "angular samples per circle");
    std::string alphas, betas;
    pinch->add_option("--alphas", alphas, "sep cluster shape override, |alpha| <= 1");
    pinch->add_option("--betas", betas, "fixed root override, |beta| >= 2");
    CLI::App* weier = app.add_subcommand("weierstrass", "curvature at and away from branch points");
    add_common(weier, o, true);

    CLI11_PARSE(app, argc, argv);
    set_max_threads(o.threads);

    Run run;
    try {
        if (periods->parsed()) {
            run.command = "periods";
            return cmd_periods(o, run);
        }
        if (curvature->parsed()) {
            run.command = "curvature";
            return cmd_curvature(o, run, nx, ny, window, sheets);
        }
        if (area->parsed()) {
            run.command = "area";
            return cmd_area(o, run);
        }
        if (pinch->parsed()) {
            run.command = "pinch";
            return cmd_pinch(o, run, kind, t_grid, angles, alphas, betas);
        }
        if (weier->parsed()) {
            run.command = "weierstrass";
            return cmd_weierstrass(o, run);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
