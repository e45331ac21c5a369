#pragma once

#include "shforge/body_model.hpp"

namespace shforge {

/// Bundled low-poly articulated humanoid for tests and `--toy` generation.
/// 24 joints in SMPL order, 598 vertices, all 14 parts present. The joint
/// regressor puts uniform mass on the ring of six vertices centred on each
/// joint, so regressed joints reproduce toy_rest_joints() analytically, and
/// skinning uses at most two joints per vertex (parent bone with a linear
/// blend toward the child near the joint).
BodyModelDef make_toy_model();

/// The authored rest skeleton the toy regressor reproduces (24 x 3).
Points3 toy_rest_joints();

/// SMPL-convention parent table used by the toy model (root = -1).
const std::vector<int>& toy_parent_table();

}  // namespace shforge
