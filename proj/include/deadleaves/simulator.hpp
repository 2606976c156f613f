#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "deadleaves/model.hpp"

namespace deadleaves {

/// Raster window. Pixel (i, j) (column i, row j) is sampled at its center
/// origin + ((i + 1/2), (j + 1/2)) * pixel_size.
struct SimWindow
{
    std::uint32_t width = 1;
    std::uint32_t height = 1;
    double pixel_size = 1;
    Vec2 origin{};

    void validate() const;
    std::size_t pixel_count() const noexcept { return std::size_t(width) * height; }
    Vec2 pixel_center(std::uint32_t col, std::uint32_t row) const noexcept
    {
        return {origin.x + (col + 0.5) * pixel_size, origin.y + (row + 0.5) * pixel_size};
    }
};

struct Leaf
{
    Vec2 center;
    double scale = 0;
    //! Scaled and rotated grain, relative to the center.
    Shape shape = Shape::disk(1);
    std::uint32_t rank = 0;
    double color = 0;
};

inline constexpr std::uint32_t kUnlabeled = std::numeric_limits<std::uint32_t>::max();

/// Visible parts at pixel centers. labels[row * width + col] is the rank of
/// the owning leaf (rank 0 fell last); pixels outside the mask stay
/// kUnlabeled with intensity 0.
struct LabelField
{
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint32_t> labels;
    std::vector<float> intensity;
    std::uint64_t leaf_count = 0;
    bool complete = false;
    //! Populated when SimOptions::keep_leaves is set.
    std::vector<Leaf> leaves;
    //! Lower scale cutoff actually simulated.
    double effective_r0 = 0;
    bool resolution_limited = false;
    bool white_noise = false;

    std::uint32_t label(std::uint32_t col, std::uint32_t row) const { return labels[std::size_t(row) * width + col]; }
    float value(std::uint32_t col, std::uint32_t row) const { return intensity[std::size_t(row) * width + col]; }
};

struct SimOptions
{
    std::uint64_t max_leaves = std::uint64_t(1) << 32;
    bool keep_leaves = false;
    //! Nonzero entries mark the pixels to simulate; empty means all.
    std::span<const std::uint8_t> mask{};
};

class IncompleteCoverage : public std::runtime_error
{
  public:
    IncompleteCoverage(std::size_t uncovered, std::uint64_t leaves);
    std::size_t uncovered() const noexcept { return uncovered_; }
    std::uint64_t leaves() const noexcept { return leaves_; }

  private:
    std::size_t uncovered_;
    std::uint64_t leaves_;
};

/// Exact sample of the dead leaves field at the (masked) pixel centers.
///
/// Leaves hitting the bounding box of the active pixels are drawn one after
/// another, each falling below all earlier ones; a pixel belongs to the
/// first leaf that contains its center. Stops once every active pixel is
/// covered. Requires r0 > 0.
LabelField simulate(const ModelSpec& model, const SimWindow& window, std::uint64_t seed, const SimOptions& opts = {});

/// Default n for the cutoff pixel_size / 2^n: the smallest with r0 a2 <= pixel_size / 8.
unsigned default_resolution_bits(const ShapeDistribution& shape);

/// Approximation of the r0 = 0 field: simulates with r0 = pixel_size / 2^bits.
/// Refuses α >= 3, whose limit is white noise (see simulate_white_noise).
LabelField simulate_resolution_limited(const ModelSpec& model, const SimWindow& window, std::uint64_t seed,
                                       unsigned bits, const SimOptions& opts = {});
LabelField simulate_resolution_limited(const ModelSpec& model, const SimWindow& window, std::uint64_t seed,
                                       const SimOptions& opts = {});

/// The α >= 3, r0 → 0 limit: every pixel is its own visible part with an
/// independent uniform color.
LabelField simulate_white_noise(const SimWindow& window, std::uint64_t seed, const SimOptions& opts = {});

/// simulate for r0 > 0 and simulate_resolution_limited (default bits) for r0 = 0.
LabelField simulate_model(const ModelSpec& model, const SimWindow& window, std::uint64_t seed,
                          const SimOptions& opts = {});

enum class RenderMode
{
    gray,
    labels
};

struct Image
{
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t channels = 1;
    std::vector<std::uint8_t> data;
};

/// Gray: intensity I ↦ min(255, floor(256 I)). Labels: a fixed hash of the
/// rank to RGB; unlabeled pixels are black.
Image render(const LabelField& field, RenderMode mode);

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Binary PGM (1 channel) or PPM (3 channels), maxval 255. Each comment line
/// is written as "# <line>" after the magic.
void write_pnm(std::ostream& os, const Image& image, std::span<const std::string> comments = {});
void write_pnm(const std::string& path, const Image& image, std::span<const std::string> comments = {});

struct PnmFile
{
    Image image;
    std::vector<std::string> comments;
};
PnmFile read_pnm(std::istream& is);
PnmFile read_pnm(const std::string& path);

/// "DLLM", u32 width, u32 height, then width*height u32 ranks, all little-endian, row-major.
void write_label_map(std::ostream& os, const LabelField& field);
void write_label_map(const std::string& path, const LabelField& field);

struct LabelMap
{
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint32_t> labels;
};
LabelMap read_label_map(std::istream& is);
LabelMap read_label_map(const std::string& path);

/// Header comments describing how the field was produced.
std::vector<std::string> field_comments(const LabelField& field);

}  // namespace deadleaves
