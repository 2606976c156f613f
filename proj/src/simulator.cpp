#include "deadleaves/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "deadleaves/quadrature.hpp"

namespace deadleaves {
namespace {

// Scale law of leaves that hit the box B: f(r) area(B ⊕ D(a2 r)), a mixture
// of three truncated power laws. The exact hitting condition is enforced
// afterwards by rejection.
class HittingScaleSampler
{
  public:
    HittingScaleSampler(const SizeLaw& law, const Box& box, double a2) : law_(law)
    {
        const double a = law.alpha();
        const double coef[3] = {box.area(), 2 * (box.width() + box.height()) * a2, std::numbers::pi * a2 * a2};
        double total = 0;
        for (int k = 0; k < 3; ++k)
        {
            weight_[k] = coef[k] > 0 ? coef[k] * power_integral(law.r0(), law.r1(), k - a) : 0.0;
            total += weight_[k];
        }
        if (!std::isfinite(total) || !(total > 0))
            throw ParameterError("simulate: leaves hitting the window have infinite or zero intensity");
        for (double& w : weight_)
            w /= total;
    }

    double operator()(Rng& rng) const
    {
        const double u = rng.uniform();
        const int k = u < weight_[0] ? 0 : u < weight_[0] + weight_[1] ? 1 : 2;
        return sample_truncated_power(law_.alpha() - k, law_.r0(), law_.r1(), rng);
    }

  private:
    SizeLaw law_;
    double weight_[3];
};

// Pixel index range [first, last] whose centers fall in [lo, hi] along one axis.
std::pair<long, long> center_range(double lo, double hi, double origin, double ps, long n)
{
    const double a = std::ceil((lo - origin) / ps - 0.5);
    const double b = std::floor((hi - origin) / ps - 0.5);
    const long first = static_cast<long>(std::max(a, 0.0));
    const long last = static_cast<long>(std::min(b, static_cast<double>(n - 1)));
    return {first, last};
}

LabelField empty_field(const SimWindow& window)
{
    LabelField f;
    f.width = window.width;
    f.height = window.height;
    f.labels.assign(window.pixel_count(), kUnlabeled);
    f.intensity.assign(window.pixel_count(), 0.0f);
    return f;
}

void check_mask(const SimWindow& window, std::span<const std::uint8_t> mask)
{
    if (!mask.empty() && mask.size() != window.pixel_count())
        throw std::invalid_argument("simulate: mask size does not match the window");
}

void put_u32(std::ostream& os, std::uint32_t v)
{
    const char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff), char((v >> 24) & 0xff)};
    os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is)
{
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw IoError("label map: truncated file");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

}  // namespace

void SimWindow::validate() const
{
    if (width < 1 || height < 1)
        throw std::invalid_argument("window: width and height must be >= 1");
    if (!(pixel_size > 0) || !std::isfinite(pixel_size))
        throw std::invalid_argument("window: pixel_size must be positive");
}

IncompleteCoverage::IncompleteCoverage(std::size_t uncovered, std::uint64_t leaves)
    : std::runtime_error("simulate: max_leaves (" + std::to_string(leaves) + ") exhausted with " +
                         std::to_string(uncovered) + " pixels uncovered"),
      uncovered_(uncovered),
      leaves_(leaves)
{
}

LabelField simulate(const ModelSpec& model, const SimWindow& window, std::uint64_t seed, const SimOptions& opts)
{
    window.validate();
    check_mask(window, opts.mask);
    const SizeLaw& law = model.size;
    if (!(law.r0() > 0))
        throw ParameterError("simulate: exact simulation needs r0 > 0 (use the resolution-limited mode for r0 = 0)");

    LabelField field = empty_field(window);
    field.effective_r0 = law.r0();

    const std::uint32_t W = window.width, H = window.height;
    const double ps = window.pixel_size;
    std::vector<std::uint8_t> pending(window.pixel_count(), 1);
    std::vector<std::uint32_t> remaining(H, 0);
    std::size_t uncovered = 0;
    std::uint32_t col_lo = W, col_hi = 0, row_lo = H, row_hi = 0;
    for (std::uint32_t j = 0; j < H; ++j)
        for (std::uint32_t i = 0; i < W; ++i)
        {
            const std::size_t idx = std::size_t(j) * W + i;
            if (!opts.mask.empty() && opts.mask[idx] == 0)
            {
                pending[idx] = 0;
                continue;
            }
            ++remaining[j];
            ++uncovered;
            col_lo = std::min(col_lo, i);
            col_hi = std::max(col_hi, i);
            row_lo = std::min(row_lo, j);
            row_hi = std::max(row_hi, j);
        }
    if (uncovered == 0)
    {
        field.complete = true;
        return field;
    }

    const Box box{window.pixel_center(col_lo, row_lo), window.pixel_center(col_hi, row_hi)};
    const double a2 = model.shape.outer_radius();
    const HittingScaleSampler scale_sampler(law, box, a2);
    const bool disks = model.shape.base().kind() == ShapeKind::disk;
    Rng rng(seed);

    while (uncovered > 0)
    {
        if (field.leaf_count >= opts.max_leaves || field.leaf_count >= kUnlabeled)
            throw IncompleteCoverage(uncovered, field.leaf_count);

        Leaf leaf;
        for (;;)
        {
            leaf.scale = scale_sampler(rng);
            leaf.shape = model.shape.sample(rng).scaled(leaf.scale);
            leaf.center = sample_dilated_box(box, a2 * leaf.scale, rng);
            if (leaf.shape.intersects(leaf.center, box))
                break;
        }
        leaf.rank = static_cast<std::uint32_t>(field.leaf_count++);
        leaf.color = rng.uniform();

        const double reach = leaf.shape.outer_radius();
        const auto [r_first, r_last] = center_range(leaf.center.y - reach, leaf.center.y + reach, window.origin.y, ps, H);
        for (long j = r_first; j <= r_last; ++j)
        {
            if (remaining[j] == 0)
                continue;
            const double py = window.origin.y + (j + 0.5) * ps;
            double half = reach;
            if (disks)
            {
                const double dy = py - leaf.center.y;
                half = std::sqrt(std::max(0.0, reach * reach - dy * dy)) + ps;
            }
            const auto [c_first, c_last] = center_range(leaf.center.x - half, leaf.center.x + half, window.origin.x, ps, W);
            std::uint8_t* row_pending = pending.data() + std::size_t(j) * W;
            for (long i = c_first; i <= c_last; ++i)
            {
                if (!row_pending[i])
                    continue;
                const Vec2 p{window.origin.x + (i + 0.5) * ps, py};
                if (!leaf.shape.contains(p - leaf.center))
                    continue;
                const std::size_t idx = std::size_t(j) * W + i;
                row_pending[i] = 0;
                field.labels[idx] = leaf.rank;
                field.intensity[idx] = static_cast<float>(leaf.color);
                --remaining[j];
                --uncovered;
            }
        }
        if (opts.keep_leaves)
            field.leaves.push_back(std::move(leaf));
    }
    field.complete = true;
    return field;
}

unsigned default_resolution_bits(const ShapeDistribution& shape)
{
    return static_cast<unsigned>(std::max(0.0, std::ceil(std::log2(8 * shape.outer_radius()))));
}

LabelField simulate_resolution_limited(const ModelSpec& model, const SimWindow& window, std::uint64_t seed,
                                       unsigned bits, const SimOptions& opts)
{
    window.validate();
    const SizeLaw& law = model.size;
    if (law.alpha() >= 3)
        throw ParameterError("resolution-limited mode: alpha >= 3 with r0 -> 0 converges to white noise; use the "
                             "white-noise mode instead");
    if (law.r0() != 0)
        throw ParameterError("resolution-limited mode applies to r0 = 0 only");
    const double r0 = std::ldexp(window.pixel_size, -static_cast<int>(bits));
    if (!(r0 < law.r1()))
        throw ParameterError("resolution-limited mode: effective r0 must stay below r1");
    LabelField field = simulate(model.with_size(SizeLaw(law.alpha(), r0, law.r1())), window, seed, opts);
    field.resolution_limited = true;
    return field;
}

LabelField simulate_resolution_limited(const ModelSpec& model, const SimWindow& window, std::uint64_t seed,
                                       const SimOptions& opts)
{
    return simulate_resolution_limited(model, window, seed, default_resolution_bits(model.shape), opts);
}

LabelField simulate_white_noise(const SimWindow& window, std::uint64_t seed, const SimOptions& opts)
{
    window.validate();
    check_mask(window, opts.mask);
    LabelField field = empty_field(window);
    field.white_noise = true;
    Rng rng(seed);
    for (std::size_t idx = 0; idx < window.pixel_count(); ++idx)
    {
        const double color = rng.uniform();
        if (!opts.mask.empty() && opts.mask[idx] == 0)
            continue;
        field.labels[idx] = static_cast<std::uint32_t>(field.leaf_count++);
        field.intensity[idx] = static_cast<float>(color);
    }
    field.complete = true;
    return field;
}

LabelField simulate_model(const ModelSpec& model, const SimWindow& window, std::uint64_t seed, const SimOptions& opts)
{
    if (model.size.r0() > 0)
        return simulate(model, window, seed, opts);
    return simulate_resolution_limited(model, window, seed, opts);
}

Image render(const LabelField& field, RenderMode mode)
{
    Image img;
    img.width = field.width;
    img.height = field.height;
    img.channels = mode == RenderMode::gray ? 1 : 3;
    img.data.resize(std::size_t(img.width) * img.height * img.channels, 0);
    for (std::size_t idx = 0; idx < field.labels.size(); ++idx)
    {
        if (mode == RenderMode::gray)
        {
            const double v = std::floor(double(field.intensity[idx]) * 256);
            img.data[idx] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            continue;
        }
        if (field.labels[idx] == kUnlabeled)
            continue;
        std::uint64_t h = field.labels[idx];
        h = splitmix64(h);
        img.data[3 * idx] = std::uint8_t(h);
        img.data[3 * idx + 1] = std::uint8_t(h >> 8);
        img.data[3 * idx + 2] = std::uint8_t(h >> 16);
    }
    return img;
}

void write_pnm(std::ostream& os, const Image& image, std::span<const std::string> comments)
{
    if (image.channels != 1 && image.channels != 3)
        throw std::invalid_argument("pnm: images have 1 or 3 channels");
    os << (image.channels == 1 ? "P5" : "P6") << '\n';
    for (const std::string& c : comments)
        os << "# " << c << '\n';
    os << image.width << ' ' << image.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.data.data()), static_cast<std::streamsize>(image.data.size()));
    if (!os)
        throw IoError("pnm: write failed");
}

void write_pnm(const std::string& path, const Image& image, std::span<const std::string> comments)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path + " for writing");
    write_pnm(os, image, comments);
}

PnmFile read_pnm(std::istream& is)
{
    PnmFile out;
    std::string magic;
    is >> magic;
    if (magic != "P5" && magic != "P6")
        throw IoError("pnm: expected P5 or P6");
    out.image.channels = magic == "P5" ? 1 : 3;

    // Header tokens, skipping comment lines.
    auto next_number = [&]() -> std::uint32_t {
        for (;;)
        {
            is >> std::ws;
            if (is.peek() == '#')
            {
                std::string line;
                std::getline(is, line);
                line.erase(0, line.find_first_not_of("# "));
                out.comments.push_back(line);
                continue;
            }
            long v = -1;
            if (!(is >> v) || v < 0)
                throw IoError("pnm: malformed header");
            return static_cast<std::uint32_t>(v);
        }
    };
    out.image.width = next_number();
    out.image.height = next_number();
    if (next_number() != 255)
        throw IoError("pnm: only maxval 255 is supported");
    is.get();
    out.image.data.resize(std::size_t(out.image.width) * out.image.height * out.image.channels);
    if (!is.read(reinterpret_cast<char*>(out.image.data.data()), static_cast<std::streamsize>(out.image.data.size())))
        throw IoError("pnm: truncated pixel data");
    return out;
}

PnmFile read_pnm(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path);
    return read_pnm(is);
}

void write_label_map(std::ostream& os, const LabelField& field)
{
    os.write("DLLM", 4);
    put_u32(os, field.width);
    put_u32(os, field.height);
    if constexpr (std::endian::native == std::endian::little)
        os.write(reinterpret_cast<const char*>(field.labels.data()),
                 static_cast<std::streamsize>(field.labels.size() * sizeof(std::uint32_t)));
    else
        for (std::uint32_t v : field.labels)
            put_u32(os, v);
    if (!os)
        throw IoError("label map: write failed");
}

void write_label_map(const std::string& path, const LabelField& field)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path + " for writing");
    write_label_map(os, field);
}

LabelMap read_label_map(std::istream& is)
{
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "DLLM", 4) != 0)
        throw IoError("label map: bad magic");
    LabelMap map;
    map.width = get_u32(is);
    map.height = get_u32(is);
    map.labels.resize(std::size_t(map.width) * map.height);
    for (std::uint32_t& v : map.labels)
        v = get_u32(is);
    return map;
}

LabelMap read_label_map(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path);
    return read_label_map(is);
}

std::vector<std::string> field_comments(const LabelField& field)
{
    std::vector<std::string> out;
    std::ostringstream s;
    s.precision(17);
    if (field.white_noise)
        out.push_back("white-noise mode: independent uniform pixels");
    else if (field.resolution_limited)
    {
        s << "resolution-limited mode: r0 = 0 approximated by effective r0 = " << field.effective_r0;
        out.push_back(s.str());
    }
    out.push_back("leaves " + std::to_string(field.leaf_count) + (field.complete ? " complete" : " incomplete"));
    return out;
}

}  // namespace deadleaves
