#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "drift/grid.hpp"

namespace drift {

struct LocalizationRecord {
    double x1 = 0.0;
    double x2 = 0.0;
    std::int64_t frame = 1;  // 1-based raw frame index
};

struct LocalizationTable {
    std::vector<LocalizationRecord> records;
    std::int64_t total_frames = 0;  // T'
};

/// T binned frames of N x N intensities plus per-frame observation counts.
/// `mask` is optional: simulation marks exactly which pixel-time pairs carry
/// an observation; for stacks loaded from files it stays empty and nonzero
/// entries count as observed.
struct FrameStack {
    int T = 0;
    int N = 0;
    std::vector<Image> frames;
    std::vector<std::int64_t> counts;
    std::vector<std::vector<std::uint8_t>> mask;

    bool has_mask() const { return !mask.empty(); }
    bool observed(int t, int i1, int i2) const {
        if (has_mask())
            return mask[static_cast<std::size_t>(t)]
                       [static_cast<std::size_t>(i1) * N + static_cast<std::size_t>(i2)] != 0;
        return frames[static_cast<std::size_t>(t)](i1, i2) != 0.0;
    }
};

FrameStack make_empty_stack(int T, int N);

struct BinResult {
    FrameStack stack;
    std::int64_t rejected = 0;  // records with coordinates outside [0,1)
};

/// Bin raw localizations into T position histograms of N x N pixels. Raw
/// frame t' (1-based) maps to histogram ceil(t' * T / T'); a record at
/// (x1, x2) increments pixel (floor(x1 N), floor(x2 N)). T must divide T'.
BinResult bin_localizations(const LocalizationTable& table, int T, int N);

/// Pixel-wise sum over all frames.
Image superimpose(const FrameStack& stack);

// --- file formats -----------------------------------------------------------

LocalizationTable read_localization_table(const std::filesystem::path& file);
void write_localization_table(const std::filesystem::path& file, const LocalizationTable& table);

Image read_grid_text(const std::filesystem::path& file);
void write_grid_text(const std::filesystem::path& file, const Image& img);

/// Directory layout: frame_0000.txt ... plus counts.txt.
void write_stack_dir(const std::filesystem::path& dir, const FrameStack& stack);
FrameStack read_stack_dir(const std::filesystem::path& dir);

/// Single binary: 16-byte header (magic "DRFT", u32 version, u32 T, u32 N,
/// little-endian) followed by T*N*N little-endian f64 frame values
/// (frame-major, row-major within a frame) and T f64 counts.
void write_stack_binary(const std::filesystem::path& file, const FrameStack& stack);
FrameStack read_stack_binary(const std::filesystem::path& file);

/// Reads either format: a directory or a binary file.
FrameStack read_stack(const std::filesystem::path& path);

}  // namespace drift
