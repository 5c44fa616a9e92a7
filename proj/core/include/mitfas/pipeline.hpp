#pragma once

#include "mitfas/alignment.hpp"
#include "mitfas/image_io.hpp"
#include "mitfas/sampling.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mitfas {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kManifestSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Inputs

/// Frame files named <prefix><digits>.<pgm|ppm|png>, sorted by number.
/// Throws InputError on a gap or a repeated number.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir);

/// Decodes every frame of `dir` in numeric order; all must share one size.
std::vector<Frame> load_frames(const std::filesystem::path& dir);

enum class BBoxSource { Seed, Detector };

struct BBoxAnnotation {
    std::size_t frame_index = 0;
    BBox bbox;
    BBoxSource source = BBoxSource::Seed;

    friend bool operator==(const BBoxAnnotation&, const BBoxAnnotation&) = default;
};

struct FrameGeometry {
    int width = 0;
    int height = 0;
    std::size_t count = 0;
};

/// Reads `frame,x,y,w,h[,seed|detector]` lines (commas or blanks, `#`
/// comments) or a JSON array of {"frame","x","y","w","h"[,"source"]} objects.
/// Records for frame 0 default to seed, others to detector. When `geometry` is
/// given, every box is checked against the frame bounds and sequence length.
std::vector<BBoxAnnotation> load_bboxes(const std::filesystem::path& path,
                                        const std::optional<FrameGeometry>& geometry = std::nullopt);

void validate_annotations(const std::vector<BBoxAnnotation>& annotations, const FrameGeometry& geometry);

/// The frame-0 record (a seed one when several exist).
const BBoxAnnotation& seed_annotation(const std::vector<BBoxAnnotation>& annotations);

/// Detector hook that replays the non-seed annotations.
Detector annotation_detector(std::vector<BBoxAnnotation> annotations);

// ---------------------------------------------------------------------------
// Configuration

struct PipelineConfig {
    SearchConfig search;
    SamplingConfig sampling;
    bool sample_raw = false;
    PatchFormat patch_format = PatchFormat::Pgm;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

void validate(const PipelineConfig& config);

/// Behavioral snapshot keyed like the CLI flags (thread count excluded).
nlohmann::json config_to_json(const PipelineConfig& config);
/// Applies the keys present in `j` over `base`; unknown keys are errors.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});
PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base = {});

// ---------------------------------------------------------------------------
// Manifest

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

struct InputFingerprint {
    std::size_t frame_count = 0;
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint64_t> frame_hashes;
    std::uint64_t content_hash = 0;

    friend bool operator==(const InputFingerprint&, const InputFingerprint&) = default;
};

InputFingerprint fingerprint(const std::vector<Frame>& frames);

struct StageTimings {
    double load_ms = 0.0;
    double align_ms = 0.0;
    double sample_ms = 0.0;
    double write_ms = 0.0;
};

struct RunManifest {
    std::string tool_version = kToolVersion;
    PipelineConfig config;
    InputFingerprint input;
    BBox seed;
    AlignmentTrace trace;
    SampleResult sample;
    std::vector<std::string> aligned_files;  // relative to the output directory
    std::vector<std::string> sampled_files;
    StageTimings timings;  // informational only
};

/// Equality on every field except timings.
bool same_behavior(const RunManifest& a, const RunManifest& b);

nlohmann::json manifest_to_json(const RunManifest& manifest);
/// Unknown fields are skipped and reported through `warnings`.
RunManifest manifest_from_json(const nlohmann::json& j, std::vector<std::string>* warnings = nullptr);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Orchestration

/// Loads, aligns, samples and writes everything under `out_dir`:
/// aligned/<frame>.pgm, sampled/<rank>_<frame>.pgm and manifest.json.
/// On failure the files this call created are removed and no manifest exists.
RunManifest run_pipeline(const std::filesystem::path& frames_dir, const std::filesystem::path& bbox_file,
                         const std::filesystem::path& out_dir, const PipelineConfig& config);

}  // namespace mitfas
