// Translating bowl in R^3: launch from the axis, print a few profile values,
// write bowl.csv and bowl.obj into the directory given as argv[1] (default .).

#include "tsol/builder.hpp"
#include "tsol/io.hpp"
#include "tsol/singular_launcher.hpp"

#include <cstdio>
#include <filesystem>
#include <vector>

int main(int argc, char** argv) {
    using namespace tsol;
    const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
    const Signature sig{Sign::plus, Sign::plus};
    const GeometrySpec g = make_preset("euclidean", 2);

    try {
        const Trajectory t = launch_left(g, sig, {.delta = {}, .s_target = 10.0});
        const SolitonProfile p = build_profile(t, 0.0, g, sig);

        std::printf("outcome %s, %zu steps\n", outcome_name(p.outcome), t.accepted_steps);
        std::printf("%8s %14s %14s %12s\n", "s", "w", "f", "h*w");
        for (double s : {0.001, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            const ProfileState st = resample_at(p.trajectory, s);
            std::printf("%8.3f %14.8f %14.8f %12.6f\n", s, st.w, st.f, g.h(s) * st.w);
        }

        // 60 rings from near the axis to the end, 48 points each
        std::vector<double> grid;
        for (int i = 0; i < 60; ++i) grid.push_back(0.01 + (10.0 - 0.01) * i / 59.0);
        SolitonProfile coarse = p;
        coarse.trajectory.samples = resample(p.trajectory, grid);
        coarse.trajectory.slopes.assign(grid.size(), 0.0);

        io::StagedFiles files;
        files.stage(dir / "bowl.csv", io::profile_csv(p.trajectory.samples));
        files.stage(dir / "bowl.obj", io::mesh_obj(build_mesh(coarse, g, 48)));
        files.commit();
        std::printf("wrote %s and %s\n", (dir / "bowl.csv").c_str(), (dir / "bowl.obj").c_str());
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
