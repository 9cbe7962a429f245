#include "nlbem/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace nlbem {

using nlohmann::json;

SurfaceMesh build_scene(const SceneSpec& scene, int refinement)
{
    if (scene.from_file()) {
        if (!scene.cubes.empty())
            throw ValidationError("scene: give either cubes or mesh_file, not both");
        return load_mesh(scene.mesh_file, mesh_format_from_string(scene.mesh_format));
    }
    if (scene.cubes.empty())
        throw ValidationError("scene.cubes: at least one cube required");
    if (refinement < 1)
        throw ValidationError("scene.refinement: must be >= 1");
    std::vector<SurfaceMesh> parts;
    for (const CubeSpec& c : scene.cubes) {
        if (!(c.side > 0.0))
            throw ValidationError("scene.cubes.side: must be positive");
        parts.push_back(make_cube_mesh(c.center, c.side, refinement));
    }
    return parts.size() == 1 ? parts[0] : merge_meshes(parts);
}

SolverConfig ExperimentConfig::solver_config() const
{
    SolverConfig s;
    s.alpha = alpha;
    s.reg_eps = reg_eps;
    s.m = m;
    s.N = N;
    s.tau = tau();
    s.sigma = sigma;
    s.allow_unshifted = allow_unshifted;
    s.eps_acc = eps_acc;
    s.newton = newton;
    s.wave = wave;
    s.verbose = verbose;
    return s;
}

namespace {

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok)
        throw ValidationError("config field '" + field + "': " + what);
}

bool inside_cube(const CubeSpec& c, const Vec3& x)
{
    return ((x - c.center).cwiseAbs().array() <= 0.5 * c.side).all();
}

void check_levels(const ConvergeSpec& c, const std::string& name)
{
    if (c.levels.empty() && c.reference == 0)
        return;
    require(c.levels.size() >= 3, name + ".levels", "at least 3 refinement levels required");
    for (size_t k = 0; k < c.levels.size(); ++k) {
        require(c.levels[k] >= 1, name + ".levels", "levels must be positive");
        if (k > 0)
            require(c.levels[k] > c.levels[k - 1], name + ".levels", "levels must increase");
    }
    require(c.reference > c.levels.back(), name + ".reference", "must exceed the finest level");
}

}// namespace

void ExperimentConfig::validate() const
{
    require(alpha > 0.0 && alpha <= 1.0, "alpha", "must lie in (0,1]");
    require(reg_eps >= 0.0 && reg_eps < 1e-6, "reg_eps", "must lie in [0,1e-6)");
    require(m == 2 || m == 3, "m", "Radau IIA with 2 or 3 stages");
    require(N >= 1, "N", "must be >= 1");
    require(T > 0.0 && std::isfinite(T), "T", "must be positive");
    if (sigma)
        require(*sigma >= 0.0, "sigma", "must be >= 0");
    require(!points.empty(), "points", "at least one evaluation point");
    try {
        wave.validate();
    }
    catch (const ValidationError& e) {
        throw ValidationError(std::string("config field 'wave': ") + e.what());
    }
    require(newton.max_iter >= 1, "newton.max_iter", "must be >= 1");
    require(newton.max_halvings >= 0, "newton.max_halvings", "must be >= 0");
    require(newton.tol_abs >= 0.0 && newton.tol_rel >= 0.0, "newton", "tolerances must be >= 0");
    if (scene.from_file())
        require(scene.cubes.empty(), "scene", "give either cubes or mesh_file");
    else {
        require(!scene.cubes.empty(), "scene.cubes", "at least one cube");
        require(scene.refinement >= 1, "scene.refinement", "must be >= 1");
        for (const Vec3& p : points)
            for (const CubeSpec& c : scene.cubes)
                require(!inside_cube(c, p), "points", "evaluation points must lie outside the scatterer");
    }
    check_levels(time, "converge.time");
    check_levels(space, "converge.space");
    if (!space.levels.empty())
        require(!scene.from_file(), "converge.space", "the space axis needs a cube scene");
    try {
        solver_config().validate();
    }
    catch (const ValidationError& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
}

namespace {

Vec3 vec_from_json(const json& j, const std::string& field)
{
    require(j.is_array() && j.size() == 3, field, "expected [x, y, z]");
    Vec3 v;
    for (int k = 0; k < 3; ++k) {
        require(j[k].is_number(), field, "expected numbers");
        v[k] = j[k].get<double>();
    }
    return v;
}

json vec_to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed)
{
    require(j.is_object(), path.empty() ? "<root>" : path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("config field '" + (path.empty() ? "" : path + ".") + it.key() + "': unknown key");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& path)
{
    if (!j.contains(key))
        return;
    const std::string field = path.empty() ? std::string(key) : path + "." + key;
    try {
        out = j.at(key).get<T>();
    }
    catch (const json::exception&) {
        throw ValidationError("config field '" + field + "': wrong type");
    }
}

ConvergeSpec converge_from_json(const json& j, const std::string& path)
{
    check_keys(j, path, {"levels", "reference"});
    ConvergeSpec c;
    read(j, "levels", c.levels, path);
    read(j, "reference", c.reference, path);
    return c;
}

}// namespace

ExperimentConfig config_from_json(const json& j)
{
    check_keys(j, "", {"scene", "alpha", "reg_eps", "wave", "m", "N", "T", "sigma", "allow_unshifted", "eps_acc",
                       "newton", "points", "output_dir", "converge", "verbose"});
    ExperimentConfig c;
    if (j.contains("scene")) {
        const json& s = j["scene"];
        check_keys(s, "scene", {"cubes", "refinement", "mesh_file", "mesh_format"});
        if (s.contains("cubes")) {
            require(s["cubes"].is_array(), "scene.cubes", "expected an array");
            for (const json& cj : s["cubes"]) {
                check_keys(cj, "scene.cubes", {"center", "side"});
                CubeSpec cube;
                if (cj.contains("center"))
                    cube.center = vec_from_json(cj["center"], "scene.cubes.center");
                read(cj, "side", cube.side, "scene.cubes");
                c.scene.cubes.push_back(cube);
            }
        }
        read(s, "refinement", c.scene.refinement, "scene");
        read(s, "mesh_file", c.scene.mesh_file, "scene");
        read(s, "mesh_format", c.scene.mesh_format, "scene");
    }
    else
        c.scene.cubes.push_back(CubeSpec{Vec3(1.0, 0.0, 0.0), 1.0});
    read(j, "alpha", c.alpha, "");
    read(j, "reg_eps", c.reg_eps, "");
    if (j.contains("wave")) {
        const json& w = j["wave"];
        check_keys(w, "wave", {"direction", "polarization", "c", "t0", "amplitude"});
        if (w.contains("direction"))
            c.wave.direction = vec_from_json(w["direction"], "wave.direction");
        if (w.contains("polarization"))
            c.wave.polarization = vec_from_json(w["polarization"], "wave.polarization");
        read(w, "c", c.wave.c, "wave");
        read(w, "t0", c.wave.t0, "wave");
        read(w, "amplitude", c.wave.amplitude, "wave");
    }
    read(j, "m", c.m, "");
    read(j, "N", c.N, "");
    read(j, "T", c.T, "");
    if (j.contains("sigma") && !j["sigma"].is_null()) {
        double s = 0.0;
        read(j, "sigma", s, "");
        c.sigma = s;
    }
    read(j, "allow_unshifted", c.allow_unshifted, "");
    read(j, "eps_acc", c.eps_acc, "");
    if (j.contains("newton")) {
        const json& n = j["newton"];
        check_keys(n, "newton", {"tol_rel", "tol_abs", "max_iter", "max_halvings"});
        read(n, "tol_rel", c.newton.tol_rel, "newton");
        read(n, "tol_abs", c.newton.tol_abs, "newton");
        read(n, "max_iter", c.newton.max_iter, "newton");
        read(n, "max_halvings", c.newton.max_halvings, "newton");
    }
    if (j.contains("points")) {
        require(j["points"].is_array(), "points", "expected an array of [x, y, z]");
        c.points.clear();
        for (const json& p : j["points"])
            c.points.push_back(vec_from_json(p, "points"));
    }
    read(j, "output_dir", c.output_dir, "");
    if (j.contains("converge")) {
        const json& cv = j["converge"];
        check_keys(cv, "converge", {"time", "space"});
        if (cv.contains("time"))
            c.time = converge_from_json(cv["time"], "converge.time");
        if (cv.contains("space"))
            c.space = converge_from_json(cv["space"], "converge.space");
    }
    read(j, "verbose", c.verbose, "");
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c)
{
    json j;
    json scene;
    if (c.scene.from_file()) {
        scene["mesh_file"] = c.scene.mesh_file;
        scene["mesh_format"] = c.scene.mesh_format;
    }
    else {
        json cubes = json::array();
        for (const CubeSpec& cube : c.scene.cubes)
            cubes.push_back({{"center", vec_to_json(cube.center)}, {"side", cube.side}});
        scene["cubes"] = cubes;
        scene["refinement"] = c.scene.refinement;
    }
    j["scene"] = scene;
    j["alpha"] = c.alpha;
    j["reg_eps"] = c.reg_eps;
    j["wave"] = {{"direction", vec_to_json(c.wave.direction)},
                 {"polarization", vec_to_json(c.wave.polarization)},
                 {"c", c.wave.c},
                 {"t0", c.wave.t0},
                 {"amplitude", c.wave.amplitude}};
    j["m"] = c.m;
    j["N"] = c.N;
    j["T"] = c.T;
    j["sigma"] = c.sigma ? json(*c.sigma) : json(nullptr);
    j["allow_unshifted"] = c.allow_unshifted;
    j["eps_acc"] = c.eps_acc;
    j["newton"] = {{"tol_rel", c.newton.tol_rel},
                   {"tol_abs", c.newton.tol_abs},
                   {"max_iter", c.newton.max_iter},
                   {"max_halvings", c.newton.max_halvings}};
    json pts = json::array();
    for (const Vec3& p : c.points)
        pts.push_back(vec_to_json(p));
    j["points"] = pts;
    j["output_dir"] = c.output_dir;
    j["converge"] = {{"time", {{"levels", c.time.levels}, {"reference", c.time.reference}}},
                     {"space", {{"levels", c.space.levels}, {"reference", c.space.reference}}}};
    j["verbose"] = c.verbose;
    return j;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    }
    catch (const json::parse_error& e) {
        throw ValidationError("config file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void apply_override(json& j, const std::string& assignment)
{
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    }
    catch (const json::parse_error&) {
        value = text;   // bare string
    }
    json* node = &j;
    size_t start = 0;
    while (true) {
        const size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw ValidationError("override '" + assignment + "': empty key component");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            break;
        }
        if (!node->contains(part) || !(*node)[part].is_object())
            (*node)[part] = json::object();
        node = &(*node)[part];
        start = dot + 1;
    }
}

RunResult run_experiment(const ExperimentConfig& cfg, const RTSpace& space)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    ScatteringSolver solver(space, cfg.solver_config());
    r.history = solver.run();
    r.fields = evaluate_fields(space, solver.context(), solver.sigma(), r.history, cfg.points);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void write_fields_csv(std::ostream& out, const FieldSamples& f)
{
    out << "point,x,y,z,step,stage,t,E_abs,Ex,Ey,Ez,Hx,Hy,Hz\n";
    char buf[512];
    for (size_t p = 0; p < f.points.size(); ++p) {
        const Vec3& x = f.points[p];
        for (int n = 0; n < f.steps; ++n)
            for (int i = 0; i < f.m; ++i) {
                const Vec3& E = f.E[p][n * f.m + i];
                const Vec3& H = f.H[p][n * f.m + i];
                std::snprintf(buf, sizeof buf,
                              "%zu,%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p, x[0],
                              x[1], x[2], n, i, f.time(n, i), E.norm(), E[0], E[1], E[2], H[0], H[1], H[2]);
                out << buf;
            }
    }
}

void write_densities_csv(std::ostream& out, const DensityHistory& h, const RTSpace& space, double alpha)
{
    const Eigen::MatrixXd M = assemble_mass(space);
    out << "step,t,phi_L2,psi_L2,phi_L1pa,newton_iterations\n";
    char buf[256];
    const int last = static_cast<int>(h.c.size()) - 1;
    for (int n = 0; n < h.steps(); ++n) {
        const Eigen::VectorXd phi = h.phi[n].col(last), psi = h.psi[n].col(last);
        const double l2_phi = std::sqrt(std::max(0.0, phi.dot(M * phi)));
        const double l2_psi = std::sqrt(std::max(0.0, psi.dot(M * psi)));
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", n, h.stage_time(n, last), l2_phi, l2_psi,
                      lp_norm(space, phi, 1.0 + alpha), h.newton_iterations[n]);
        out << buf;
    }
}

Axis axis_from_string(const std::string& name)
{
    if (name == "time")
        return Axis::time;
    if (name == "space")
        return Axis::space;
    throw ValidationError("unknown convergence axis '" + name + "' (time, space)");
}

std::vector<double> ConvergenceTable::orders() const
{
    std::vector<double> o;
    for (const ConvergenceRow& r : rows)
        if (r.order)
            o.push_back(*r.order);
    return o;
}

double ConvergenceTable::fitted_order() const
{
    std::vector<double> x, y;
    for (const ConvergenceRow& r : rows)
        if (!r.reference && r.error > 0.0) {
            x.push_back(std::log(r.parameter));
            y.push_back(std::log(r.error));
        }
    if (x.size() < 2)
        throw ValidationError("fitted_order: need two nonzero errors");
    return least_squares_slope(x, y);
}

namespace {

// E at the evaluation points at the end of each step (last stage, c_m = 1)
std::vector<std::vector<Vec3>> step_end_fields(const FieldSamples& f)
{
    std::vector<std::vector<Vec3>> E(f.points.size());
    for (size_t p = 0; p < f.points.size(); ++p)
        for (int n = 0; n < f.steps; ++n)
            E[p].push_back(f.E[p][n * f.m + f.m - 1]);
    return E;
}

struct LevelRun {
    std::vector<std::vector<Vec3>> E;
    double parameter = 0.0;
    int dofs = 0;
};

LevelRun run_level(const ExperimentConfig& base, int N, int refinement, bool space_axis)
{
    ExperimentConfig cfg = base;
    cfg.N = N;
    cfg.scene.refinement = refinement;
    const RTSpace space(build_scene(cfg.scene, refinement));
    if (cfg.verbose)
        std::fprintf(stderr, "level N=%d n=%d: %d dofs\n", N, refinement, space.dim());
    const RunResult r = run_experiment(cfg, space);
    if (cfg.verbose)
        std::fprintf(stderr, "  %.1f s\n", r.seconds);
    LevelRun out;
    out.E = step_end_fields(r.fields);
    out.parameter = space_axis ? mesh_statistics(space.mesh()).h_max : cfg.tau();
    out.dofs = space.dim();
    return out;
}

}// namespace

ConvergenceTable run_convergence(const ExperimentConfig& cfg, Axis axis)
{
    const ConvergeSpec& spec = axis == Axis::time ? cfg.time : cfg.space;
    const std::string name = axis == Axis::time ? "converge.time" : "converge.space";
    require(spec.levels.size() >= 3 && spec.reference > 0, name, "at least 3 levels plus a reference required");
    const bool space_axis = axis == Axis::space;
    if (!space_axis)
        for (int N : spec.levels)
            require(spec.reference % N == 0, name + ".levels", "every level must divide the reference step count");

    auto run = [&](int level) {
        return space_axis ? run_level(cfg, cfg.N, level, true) : run_level(cfg, level, cfg.scene.refinement, false);
    };
    LevelRun ref;
    try {
        ref = run(spec.reference);
    }
    catch (const NumericalError& e) {
        throw NumericalError(std::string("reference run failed: ") + e.what());
    }

    ConvergenceTable table;
    table.axis = axis;
    for (int level : spec.levels) {
        const LevelRun lr = run(level);
        const int N = space_axis ? cfg.N : level;
        const int r = space_axis ? 1 : spec.reference / level;
        const double tau = cfg.T / N;
        double sum = 0.0;
        for (size_t p = 0; p < lr.E.size(); ++p)
            for (int j = 0; j < N; ++j)   // step ends in (0, T]
                sum += tau * (lr.E[p][j] - ref.E[p][(j + 1) * r - 1]).squaredNorm();
        ConvergenceRow row;
        row.level = level;
        row.parameter = lr.parameter;
        row.dofs = lr.dofs;
        row.error = std::sqrt(sum);
        if (!table.rows.empty()) {
            const ConvergenceRow& prev = table.rows.back();
            if (prev.error > 0.0 && row.error > 0.0)
                row.order = std::log(prev.error / row.error) / std::log(prev.parameter / row.parameter);
        }
        table.rows.push_back(row);
    }
    ConvergenceRow self;
    self.level = spec.reference;
    self.parameter = ref.parameter;
    self.dofs = ref.dofs;
    self.reference = true;
    double sum = 0.0;
    for (size_t p = 0; p < ref.E.size(); ++p)
        for (size_t j = 0; j < ref.E[p].size(); ++j)
            sum += (ref.E[p][j] - ref.E[p][j]).squaredNorm();
    self.error = std::sqrt(sum);
    table.rows.push_back(self);
    return table;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& t)
{
    out << "axis,level,parameter,dofs,error,order,reference\n";
    char buf[256];
    for (const ConvergenceRow& r : t.rows) {
        std::string order = r.order ? "" : "nan";
        if (r.order) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.order);
            order = buf;
        }
        std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%d,%.17g,%s,%d\n", t.axis == Axis::time ? "time" : "space", r.level,
                      r.parameter, r.dofs, r.error, order.c_str(), r.reference ? 1 : 0);
        out << buf;
    }
}

namespace {

int guarded(const std::function<void()>& body)
{
    try {
        body();
        return 0;
    }
    catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    }
    catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

std::ofstream open_output(const std::string& dir, const std::string& name)
{
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write " + path);
    return out;
}

}// namespace

int cmd_run(const ExperimentConfig& cfg)
{
    return guarded([&] {
        cfg.validate();
        const RTSpace space(build_scene(cfg.scene, cfg.scene.refinement));
        const RunResult r = run_experiment(cfg, space);
        {
            std::ofstream out = open_output(cfg.output_dir, "fields.csv");
            write_fields_csv(out, r.fields);
        }
        {
            std::ofstream out = open_output(cfg.output_dir, "densities.csv");
            write_densities_csv(out, r.history, space, cfg.alpha);
        }
        {
            std::ofstream out = open_output(cfg.output_dir, "config.json");
            out << config_to_json(cfg).dump(2) << "\n";
        }
        std::fprintf(stderr, "run: %d dofs, %d steps, %.1f s, output in %s\n", space.dim(), cfg.N + 1, r.seconds,
                     cfg.output_dir.c_str());
    });
}

int cmd_converge(const ExperimentConfig& cfg, Axis axis)
{
    return guarded([&] {
        cfg.validate();
        const ConvergenceTable t = run_convergence(cfg, axis);
        const std::string name = axis == Axis::time ? "convergence_time.csv" : "convergence_space.csv";
        std::ofstream out = open_output(cfg.output_dir, name);
        write_convergence_csv(out, t);
        write_convergence_csv(std::cout, t);
        std::fprintf(stderr, "fitted order %.3f\n", t.fitted_order());
    });
}

}// namespace nlbem
