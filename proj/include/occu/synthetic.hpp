// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "occu/motion.hpp"

namespace occu {

enum class MotionKind { Walk, Turn, Sit, Crawl, Reach };

const char* to_string(MotionKind kind);
std::optional<MotionKind> motion_kind_from_string(const std::string& name);

struct SyntheticMotionSpec {
    MotionKind kind = MotionKind::Walk;
    double duration = 2.0;
    /// Travel speed in m/s (walk, turn, crawl); cycle pace for the others.
    double speed = 1.0;
    std::uint64_t seed = 0;
    double fps = 30.0;

    void validate() const;
};

/// Procedural motion on the humanoid skeleton. Heading, start offset and
/// amplitudes are drawn from the seed; the same spec always yields the same
/// frames.
MotionSequence generate_motion(const SyntheticMotionSpec& spec,
                               std::shared_ptr<const Skeleton> skeleton = Skeleton::humanoid());

/// Kind cycling walk, turn, crawl, sit by seed.
MotionKind mob_kind_for_seed(std::uint64_t seed);

}  // namespace occu
