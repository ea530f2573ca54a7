#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "srx/errors.hpp"

namespace srx {

struct DatasetConfig {
    int zoom = 4;
    int lr_size = 64;
    int hr_size = 256; // must equal lr_size * zoom
    std::array<double, 3> split_fractions{0.8, 0.1, 0.1}; // train, val, test
    std::uint64_t seed = 0;
    bool day_left = true; // which half of the composite is the day image
};

/// One sample of the benchmark. Paths are relative to the manifest's
/// directory. intermediate/output stay empty until a topology has run.
struct ManifestEntry {
    std::string id;
    std::string split; // train | val | test
    std::string night_lr;
    std::string night_hr_gt;
    std::string day_hr_gt;
    std::string intermediate;
    std::string output;
};

struct Violation {
    std::string id;
    std::string kind; // MissingFile | DimensionMismatch | DuplicateId
    std::string detail;
};

/// Floor-based split sizes with the remainder assigned to train.
std::array<std::size_t, 3> split_sizes(std::size_t total,
                                       const std::array<double, 3>& fractions);

/// Deterministic split assignment: ids are shuffled with the seed, the
/// first block is train, then val, then test. Returns split per input id.
std::vector<std::string> assign_splits(const std::vector<std::string>& ids,
                                       const std::array<double, 3>& fractions,
                                       std::uint64_t seed);

/// Builds the benchmark layout from side-by-side day|night composites:
/// splits each pair, bilinearly downsamples the night half to lr_size,
/// writes PNGs under out_dir/{split}/{role}/ and a manifest.jsonl.
std::vector<ManifestEntry> prepare(const std::filesystem::path& src_dir,
                                   const std::filesystem::path& out_dir,
                                   const DatasetConfig& cfg);

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path);

/// Checks every manifest invariant (files exist, LR x zoom = HR dims,
/// unique ids). Empty result means valid.
std::vector<Violation> validate_manifest(const std::filesystem::path& path, int zoom = 4);

} // namespace srx
