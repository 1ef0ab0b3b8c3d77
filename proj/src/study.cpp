#include "sfem/study.hpp"

#include "sfem/errors.hpp"
#include "sfem/solver.hpp"

#include <fmt/format.h>

#include <future>

namespace sfem {

std::vector<std::shared_ptr<const TriMesh>> mesh_hierarchy(const Surface& surface, int min_level, int max_level)
{
    if (min_level < 0 || max_level < min_level) {
        throw DomainError(fmt::format("invalid level range {}..{}", min_level, max_level));
    }
    std::vector<std::shared_ptr<const TriMesh>> meshes;
    auto mesh = std::make_shared<const TriMesh>(make_mesh(surface, min_level));
    meshes.push_back(mesh);
    for (int k = min_level + 1; k <= max_level; ++k) {
        mesh = std::make_shared<const TriMesh>(refine(*mesh));
        meshes.push_back(mesh);
    }
    return meshes;
}

ConvergenceTable convergence_study(const Surface& surface, const ManufacturedCase& c, int min_level, int max_level,
                                   double tol, bool parallel)
{
    const auto meshes = mesh_hierarchy(surface, min_level, max_level);
    const auto run = [&c, tol](const std::shared_ptr<const TriMesh>& m) { return error_norms(solve_case(m, c, tol)); };

    std::vector<ErrorRecord> records;
    if (parallel) {
        std::vector<std::future<ErrorRecord>> pending;
        for (const auto& m : meshes) {
            pending.push_back(std::async(std::launch::async, run, m));
        }
        for (auto& p : pending) {
            records.push_back(p.get());
        }
    } else {
        for (const auto& m : meshes) {
            records.push_back(run(m));
        }
    }
    return ConvergenceTable::from_records(std::move(records));
}

ConvergenceTable interpolation_convergence(const Surface& surface, const ManufacturedCase& c, int min_level,
                                           int max_level)
{
    std::vector<ErrorRecord> records;
    for (const auto& m : mesh_hierarchy(surface, min_level, max_level)) {
        records.push_back(interpolation_error_study(*m, c));
    }
    return ConvergenceTable::from_records(std::move(records));
}

} // namespace sfem
