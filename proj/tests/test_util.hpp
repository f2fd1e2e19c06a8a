// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

// Shared generators for the test suites.

#pragma once

#include <random>

#include "occu/motion.hpp"

namespace occu::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 random_vec(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline Mat3 random_rotation(std::mt19937_64& rng)
{
    Eigen::Quaterniond q(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    q.normalize();
    return q.toRotationMatrix();
}

/// Random articulation of a skeleton, joint bends limited to +-max_angle.
inline Pose random_pose(const Skeleton& sk, std::mt19937_64& rng, double max_angle = 0.6)
{
    Pose p = Pose::rest(sk, random_vec(rng, -2.0, 2.0) + Vec3(0, 0, 1.0), uniform(rng, -kPi, kPi));
    for (auto& r : p.joint_rotations)
        r = matrix_to_rot6d(axis_angle(random_vec(rng), uniform(rng, -max_angle, max_angle)));
    return p;
}

}  // namespace occu::testing
