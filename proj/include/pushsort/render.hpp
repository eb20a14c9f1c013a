#pragma once

#include <optional>
#include <string>

#include "pushsort/scene.hpp"

namespace pushsort {

// SVG snapshot of a scene: regions outlined, objects filled by category, the
// gripper marked, and optionally one action overlaid (grasp arrow to its
// placement, or pusher body plus travel arrow). Output bytes depend only on
// the inputs.
std::string render_svg(const SceneState& state, const std::optional<Action>& overlay = {});

void save_svg(const SceneState& state, const std::optional<Action>& overlay,
              const std::string& path);

}  // namespace pushsort
