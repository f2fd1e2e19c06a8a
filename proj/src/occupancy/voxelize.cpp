// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "occu/occupancy.hpp"
#include "occu/parallel.hpp"

namespace occu {

namespace {

struct FrameSamples {
    std::vector<Vec3> points;
    CapsuleBody body;
};

GridLayout bounding_layout(const std::vector<FrameSamples>& frames, double unit, int margin)
{
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& f : frames) {
        for (const auto& p : f.points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const auto [blo, bhi] = f.body.bounds();
        lo = lo.cwiseMin(blo);
        hi = hi.cwiseMax(bhi);
    }
    GridLayout l;
    l.unit = unit;
    for (int a = 0; a < 3; ++a) {
        const double first = std::floor(lo[a] / unit) - margin;
        const double last = std::floor(hi[a] / unit) + margin;
        l.origin[a] = first * unit;
        l.dims[a] = static_cast<int>(last - first) + 1;
    }
    return l;
}

// Rounding in floor(p / u) versus floor((p - origin) / u) can disagree by one
// cell; widen until every sample maps inside the volume.
GridLayout fit_samples(GridLayout l, const std::vector<FrameSamples>& frames)
{
    for (;;) {
        Index3 grow_lo{0, 0, 0}, grow_hi{0, 0, 0};
        for (const auto& f : frames)
            for (const auto& p : f.points) {
                const auto c = l.cell_of(p);
                for (int a = 0; a < 3; ++a) {
                    grow_lo[a] = std::max(grow_lo[a], -c[a]);
                    grow_hi[a] = std::max(grow_hi[a], c[a] - l.dims[a] + 1);
                }
            }
        if (grow_lo == Index3{0, 0, 0} && grow_hi == Index3{0, 0, 0}) return l;
        for (int a = 0; a < 3; ++a) {
            l.origin[a] -= grow_lo[a] * l.unit;
            l.dims[a] += grow_lo[a] + grow_hi[a];
        }
    }
}

void mark_interior(OccupancyGrid& grid, const CapsuleBody& body)
{
    const auto& l = grid.layout();
    for (const auto& c : body.capsules) {
        const Vec3 r = Vec3::Constant(c.radius);
        const Vec3 lo = c.a.cwiseMin(c.b) - r;
        const Vec3 hi = c.a.cwiseMax(c.b) + r;
        Index3 clo = l.cell_of(lo), chi = l.cell_of(hi);
        for (int a = 0; a < 3; ++a) {
            clo[a] = std::max(clo[a], 0);
            chi[a] = std::min(chi[a], l.dims[a] - 1);
        }
        for (int z = clo[2]; z <= chi[2]; ++z)
            for (int y = clo[1]; y <= chi[1]; ++y)
                for (int x = clo[0]; x <= chi[0]; ++x) {
                    const Index3 cell{x, y, z};
                    const auto li = l.linear(cell);
                    if (!grid.get(li) && c.contains(l.center(cell))) grid.set(li, true);
                }
    }
}

}  // namespace

OccupancyGrid voxelize_motion(const MotionSequence& seq, const std::vector<CapsuleBody>& bodies, double unit,
                              const VoxelizeOptions& options)
{
    if (seq.size() == 0) throw Error("voxelize_motion: empty sequence");
    if (!(unit > 0.0)) throw Error("voxelize_motion: unit must be positive");
    if (bodies.size() != seq.size()) throw Error("voxelize_motion: one body per frame required");
    if (options.margin_cells < 0) throw Error("voxelize_motion: margin must be >= 0");
    const double spacing = options.sample_fraction * unit;
    if (!(spacing > 0.0)) throw Error("voxelize_motion: sample spacing must be positive");

    std::vector<FrameSamples> frames(seq.size());
    parallel_for(seq.size(), options.threads, [&](std::size_t i, int) {
        const auto joints = forward_kinematics(seq.frames()[i], seq.skeleton());
        frames[i].body = bodies[i];
        frames[i].points = body_samples(joints, bodies[i], spacing);
    });

    const auto layout = fit_samples(bounding_layout(frames, unit, options.margin_cells), frames);

    // Step 1: every surface sample and joint occupies its voxel. Step 2: any
    // voxel whose center lies inside some frame's body. Bitwise OR of per-worker
    // grids keeps the result independent of scheduling.
    const int workers = std::max(1, std::min<int>(options.threads, static_cast<int>(frames.size())));
    std::vector<OccupancyGrid> partial(workers, OccupancyGrid(layout));
    parallel_for(frames.size(), workers, [&](std::size_t i, int w) {
        auto& g = partial[w];
        for (const auto& p : frames[i].points) g.set(layout.cell_of(p), true);
    });
    parallel_for(frames.size(), workers, [&](std::size_t i, int w) { mark_interior(partial[w], frames[i].body); });
    OccupancyGrid out(layout);
    for (const auto& g : partial) out |= g;
    return out;
}

OccupancyGrid voxelize_motion(const MotionSequence& seq, double unit, const VoxelizeOptions& options)
{
    std::vector<CapsuleBody> bodies;
    bodies.reserve(seq.size());
    for (const auto& pose : seq.frames()) bodies.push_back(body_geometry(pose, seq.skeleton()));
    return voxelize_motion(seq, bodies, unit, options);
}

OccupancyGrid motion_scene(const MotionSequence& seq, double unit, const VoxelizeOptions& options)
{
    return complement(voxelize_motion(seq, unit, options));
}

}  // namespace occu
