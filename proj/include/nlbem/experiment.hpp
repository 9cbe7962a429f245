#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbem/scattering_solver.hpp"

namespace nlbem {

struct CubeSpec {
    Vec3 center = Vec3::Zero();
    double side = 1.0;
};

// Either a list of cubes meshed with n x n squares per face, or a mesh file.
struct SceneSpec {
    std::vector<CubeSpec> cubes;
    int refinement = 4;
    std::string mesh_file;
    std::string mesh_format = "off";

    bool from_file() const { return !mesh_file.empty(); }
};

SurfaceMesh build_scene(const SceneSpec& scene, int refinement);

struct ConvergeSpec {
    std::vector<int> levels;   // N for the time axis, refinement n for the space axis
    int reference = 0;
};

struct ExperimentConfig {
    SceneSpec scene;
    double alpha = 0.5;
    double reg_eps = 1e-10;
    IncidentWave wave;
    int m = 2;
    int N = 64;
    double T = 3.0;
    std::optional<double> sigma;
    bool allow_unshifted = false;
    double eps_acc = 1e-14;
    NewtonOptions newton;
    std::vector<Vec3> points{Vec3::Zero()};
    std::string output_dir = "out";
    ConvergeSpec time, space;
    bool verbose = false;

    double tau() const { return T / N; }
    SolverConfig solver_config() const;
    // Field names in the messages follow the JSON keys.
    void validate() const;
};

// Unknown keys are rejected with their path.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// Applies "key.sub=value" overrides, value parsed as JSON where possible.
void apply_override(nlohmann::json& j, const std::string& assignment);

struct RunResult {
    DensityHistory history;
    FieldSamples fields;
    double seconds = 0.0;
};

RunResult run_experiment(const ExperimentConfig& cfg, const RTSpace& space);

// fields.csv: point,x,y,z,step,stage,t,E_abs,Ex,Ey,Ez,Hx,Hy,Hz
void write_fields_csv(std::ostream& out, const FieldSamples& f);
// densities.csv: step,t,phi_L2,psi_L2,phi_L1pa,newton_iterations (last stage)
void write_densities_csv(std::ostream& out, const DensityHistory& h, const RTSpace& space, double alpha);

enum class Axis { time, space };
Axis axis_from_string(const std::string& name);

struct ConvergenceRow {
    int level = 0;          // N or refinement n
    double parameter = 0;   // tau or h_max
    int dofs = 0;
    double error = 0;
    std::optional<double> order;
    bool reference = false;
};

struct ConvergenceTable {
    Axis axis = Axis::time;
    std::vector<ConvergenceRow> rows;   // levels, then the reference row

    std::vector<double> orders() const;
    // least squares slope of log error against log parameter over the levels
    double fitted_order() const;
};

// Errors of E at the evaluation points against the reference run,
// (tau sum_n |E_level(t_n) - E_ref(t_n)|^2)^(1/2) over the coarse step
// end points t_n = (n+1) tau in (0, T], summed over points.
ConvergenceTable run_convergence(const ExperimentConfig& cfg, Axis axis);

// axis,level,parameter,dofs,error,order
void write_convergence_csv(std::ostream& out, const ConvergenceTable& t);

// Front ends used by the nlbem tool. Return the process exit code:
// 0 success, 1 validation error, 2 numerical failure.
int cmd_run(const ExperimentConfig& cfg);
int cmd_converge(const ExperimentConfig& cfg, Axis axis);

}// namespace nlbem
