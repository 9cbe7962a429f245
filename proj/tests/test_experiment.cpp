#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlbem/experiment.hpp"

using namespace nlbem;
using nlohmann::json;

namespace {

json small_json()
{
    return json::parse(R"({
        "scene": {"cubes": [{"center": [0, 0, 0], "side": 1.0}], "refinement": 1},
        "wave": {"c": 20.0, "t0": 1.0},
        "N": 16, "T": 3.0,
        "points": [[2.5, 0.0, 0.0]]
    })");
}

std::string message_of(const json& j)
{
    try {
        config_from_json(j).validate();
    }
    catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}// namespace

TEST_SUITE("experiment") {

TEST_CASE("config round trip")
{
    const ExperimentConfig a = config_from_json(small_json());
    const ExperimentConfig b = config_from_json(config_to_json(a));
    CHECK(config_to_json(a) == config_to_json(b));
    CHECK(a.tau() == doctest::Approx(3.0 / 16));
    CHECK(a.wave.c == 20.0);
    CHECK_NOTHROW(a.validate());
}

TEST_CASE("validation messages name the field")
{
    json j = small_json();
    j["alpha"] = 1.5;
    CHECK(message_of(j).find("'alpha'") != std::string::npos);
    j = small_json();
    j["wave"]["speed"] = 3;
    CHECK(message_of(j).find("'wave.speed'") != std::string::npos);
    j = small_json();
    j["points"] = json::array({json::array({0.1, 0.0, 0.0})});
    CHECK(message_of(j).find("'points'") != std::string::npos);
    j = small_json();
    j["m"] = 4;
    CHECK(message_of(j).find("'m'") != std::string::npos);
    j = small_json();
    j["N"] = "many";
    CHECK(message_of(j).find("'N'") != std::string::npos);
}

TEST_CASE("overrides")
{
    json j = small_json();
    apply_override(j, "alpha=0.7");
    apply_override(j, "wave.t0=-2");
    apply_override(j, "output_dir=some/where");
    const ExperimentConfig c = config_from_json(j);
    CHECK(c.alpha == 0.7);
    CHECK(c.wave.t0 == -2.0);
    CHECK(c.output_dir == "some/where");
    CHECK_THROWS_AS(apply_override(j, "alpha"), ValidationError);
    CHECK_THROWS_AS(apply_override(j, "wave..c=1"), ValidationError);
}

TEST_CASE("zero amplitude writes an all zero field table")
{
    json j = small_json();
    j["wave"]["amplitude"] = 0.0;
    const ExperimentConfig c = config_from_json(j);
    const RTSpace sp(build_scene(c.scene, c.scene.refinement));
    const RunResult r = run_experiment(c, sp);
    std::ostringstream os;
    write_fields_csv(os, r.fields);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "point,x,y,z,step,stage,t,E_abs,Ex,Ey,Ez,Hx,Hy,Hz");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        std::stringstream ls(line);
        std::string cell;
        for (int k = 0; std::getline(ls, cell, ','); ++k)
            if (k >= 7)
                CHECK(std::stod(cell) == 0.0);
    }
    CHECK(rows == (c.N + 1) * c.m);
}

TEST_CASE("run command writes byte identical output")
{
    const auto dir = std::filesystem::temp_directory_path() / "nlbem_test_run";
    std::filesystem::remove_all(dir);
    std::string content[2];
    for (int k = 0; k < 2; ++k) {
        json j = small_json();
        j["output_dir"] = (dir / std::to_string(k)).string();
        CHECK(cmd_run(config_from_json(j)) == 0);
        std::ifstream in(dir / std::to_string(k) / "fields.csv");
        std::stringstream ss;
        ss << in.rdbuf();
        content[k] = ss.str();
        CHECK(std::filesystem::exists(dir / std::to_string(k) / "densities.csv"));
    }
    CHECK(!content[0].empty());
    CHECK(content[0] == content[1]);
    std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes")
{
    json j = small_json();
    j["newton"] = {{"max_iter", 0}};
    CHECK_THROWS_AS(config_from_json(j), ValidationError);
    ExperimentConfig bad = config_from_json(small_json());
    bad.newton.max_iter = 0;
    CHECK(cmd_run(bad) == 1);
    j = small_json();
    j["newton"] = {{"max_iter", 1}};
    j["output_dir"] = (std::filesystem::temp_directory_path() / "nlbem_test_exit").string();
    CHECK(cmd_run(config_from_json(j)) == 2);
    std::filesystem::remove_all(j["output_dir"].get<std::string>());
}

TEST_CASE("small time convergence table")
{
    json j = small_json();
    j["converge"] = {{"time", {{"levels", {8, 16, 32}}, {"reference", 64}}}};
    const ExperimentConfig c = config_from_json(j);
    const ConvergenceTable t = run_convergence(c, Axis::time);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows.back().reference);
    CHECK(t.rows.back().error == 0.0);
    for (int k = 0; k < 3; ++k)
        CHECK(t.rows[k].error > 0.0);
    CHECK(t.orders().size() == 2);
    CHECK(t.fitted_order() > 1.0);
    std::ostringstream os;
    write_convergence_csv(os, t);
    CHECK(os.str().rfind("axis,level,parameter,dofs,error,order,reference\n", 0) == 0);
    // levels must divide the reference
    j["converge"]["time"]["levels"] = {8, 16, 24};
    CHECK_THROWS_AS(run_convergence(config_from_json(j), Axis::time), ValidationError);
    CHECK_THROWS_AS(axis_from_string("frequency"), ValidationError);
}

}
