#pragma once

#include "shforge/dataset_io.hpp"

namespace shforge {

struct SplitOptions {
  double target_test_fraction = 0.2;
  double tolerance = 0.03;
  uint64_t seed = 0;
};

/// Subject-disjoint train/test assignment. Seeded greedy packing adds whole
/// subjects to the test side until the test frame fraction reaches
/// target - tolerance, never exceeding target + tolerance while a compliant
/// choice exists. Also holds out a seeded 20% of texture ids (stratified per
/// texture set), background ids and shape-bank ids for the test side, and
/// keeps any action tag with at least five sequences represented on both
/// sides (skipped when the manifest carries no action tags).
SplitAssignment assign_split(const DatasetManifest& manifest,
                             const BankCatalog& banks, const SplitOptions& options);

/// Test frame fraction of an assignment over a manifest.
double split_test_fraction(const DatasetManifest& manifest,
                           const SplitAssignment& split);

}  // namespace shforge
