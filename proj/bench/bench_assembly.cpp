// Serial reference against the OpenMP loops: Galerkin assembly of V and K,
// and point evaluation of the representation formula.

#include <benchmark/benchmark.h>

#include "nlbem/scattering_solver.hpp"

using namespace nlbem;

namespace {

void assembly(benchmark::State& st, Execution exec)
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, static_cast<int>(st.range(0))));
    AssemblyOptions opt;
    opt.exec = exec;
    for (auto _ : st) {
        BoundaryOperators op = assemble_boundary_operators(sp, cplx(2.0, 5.0), opt);
        benchmark::DoNotOptimize(op.V.data());
    }
    st.counters["dofs"] = sp.dim();
}

void fields(benchmark::State& st, Execution exec)
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    SolverConfig c;
    c.N = static_cast<int>(st.range(0));
    c.tau = 3.0 / c.N;
    c.wave.c = 20.0;
    c.wave.t0 = 1.0;
    ScatteringSolver s(sp, c);
    const DensityHistory h = s.run();
    const std::vector<Vec3> pts{Vec3(2, 0, 0), Vec3(0, 2.5, 0), Vec3(-1.5, -1.5, 1)};
    for (auto _ : st) {
        FieldSamples f = evaluate_fields(sp, s.context(), s.sigma(), h, pts, exec);
        benchmark::DoNotOptimize(f.E.data());
    }
}

void BM_assembly_serial(benchmark::State& st) { assembly(st, Execution::serial); }
void BM_assembly_parallel(benchmark::State& st) { assembly(st, Execution::parallel); }
void BM_fields_serial(benchmark::State& st) { fields(st, Execution::serial); }
void BM_fields_parallel(benchmark::State& st) { fields(st, Execution::parallel); }

}// namespace

BENCHMARK(BM_assembly_serial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assembly_parallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fields_serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fields_parallel)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
