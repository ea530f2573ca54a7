#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "srx/dataset.hpp"
#include "srx/image.hpp"

namespace srx {

enum class StageKind { super_resolution, translation };
enum class TopologyId { M1, M2 }; // M1 = SR first, M2 = translation first
enum class PhaseId { Pre, Intermediate, Post };

/// External model stage. `command` is an executable plus fixed arguments;
/// the harness appends --input DIR --output DIR and sets SRX_SCALE.
/// Commands starting with "builtin:" run in-process:
///   builtin:nearest  nearest-neighbor upsample by output_scale (null SR)
///   builtin:copy     byte-identical copy (null translation)
struct StageSpec {
    std::string name;
    std::string command;
    StageKind kind = StageKind::translation;
    int output_scale = 1; // 4 for SR, 1 for translation
};

StageSpec null_sr_stage();
StageSpec null_translation_stage();

/// Runs one stage over a directory of PNGs and validates the contract:
/// one same-named output per input, dimensions = input * output_scale.
void run_stage(const StageSpec& stage,
               const std::filesystem::path& in_dir,
               const std::filesystem::path& out_dir);

/// Runs both stages of a topology over the manifest's entries (optionally
/// restricted to one split; empty = all). Writes intermediate and output
/// images under work_dir and returns the augmented manifest, which is also
/// written to work_dir/manifest.jsonl.
std::vector<ManifestEntry> run_topology(TopologyId topology,
                                        const std::filesystem::path& manifest_path,
                                        const StageSpec& sr,
                                        const StageSpec& translation,
                                        const std::filesystem::path& work_dir,
                                        const std::string& split = "test");

/// One evaluation pairing: candidate image path vs day ground truth path.
/// When upsample_to_reference is set the candidate is nearest-upsampled to
/// the reference's dimensions before comparison.
struct PhasePair {
    std::string id;
    std::filesystem::path candidate;
    std::filesystem::path reference;
    bool upsample_to_reference = false;
};

/// Materializes the (candidate, reference) pairings of one phase from an
/// augmented manifest. M2-Intermediate is off unless enable_m2_intermediate
/// is set, mirroring the omission in the benchmark definition.
std::vector<PhasePair> phase_pairs(PhaseId phase,
                                   TopologyId topology,
                                   const std::filesystem::path& augmented_manifest,
                                   bool enable_m2_intermediate = false);

/// Loads one pairing, applying the upsample rule.
std::pair<Image, Image> load_phase_pair(const PhasePair& pair);

} // namespace srx
