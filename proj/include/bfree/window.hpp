#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfree/family.hpp"
#include "bfree/quadratic.hpp"

namespace bfree {

inline constexpr std::uint64_t kDefaultCellLimit = 100'000'000;

/// The integer box prod [lo_i, hi_i].
class Box {
 public:
  /// Throws InvalidArgument unless lo <= hi componentwise.
  Box(Point lo, Point hi);
  /// {-n..n}^m + center
  static Box centered(const Point& center, long n);

  Eigen::Index dim() const { return lo_.size(); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  BigInt side(Eigen::Index i) const { return hi_(i) - lo_(i) + 1; }
  BigInt volume() const;
  bool contains(const Point& p) const;
  /// Box + other: {a + b : a in this, b in other}.
  Box minkowski(const Box& other) const;

  /// Position of p in row-major order (coordinate 0 slowest).
  std::uint64_t linear_index(const Point& p) const;
  Point point_at(std::uint64_t index) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Point lo_;
  Point hi_;
};

/// A finite pattern F of offsets; order is kept, duplicates dropped.
class Shape {
 public:
  explicit Shape(std::vector<Point> offsets);
  /// All points of the box, in row-major order.
  static Shape rectangle(const Box& box);

  const std::vector<Point>& offsets() const { return offsets_; }
  std::size_t size() const { return offsets_.size(); }
  Eigen::Index dim() const { return offsets_.front().size(); }
  Box bounding_box() const;

 private:
  std::vector<Point> offsets_;
};

/// eta restricted to a box, in row-major order.
struct EtaWindow {
  Box box;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(const Point& p) const { return bits[box.linear_index(p)]; }
  std::uint64_t ones() const;
};

struct WindowOptions {
  unsigned threads = 1;
  std::uint64_t cell_limit = kDefaultCellLimit;
};

EtaWindow eta_window(const FamilySpec& spec, const Box& box, const WindowOptions& opts = {});

/// First g in `search` (row-major order) with eta == 0 on g + shape.
std::optional<Point> find_zero_translate(const FamilySpec& spec, const Shape& shape, const Box& search,
                                         const WindowOptions& opts = {});
/// Every such g, in row-major order.
std::vector<Point> find_all_zero_translates(const FamilySpec& spec, const Shape& shape, const Box& search,
                                            const WindowOptions& opts = {});

/// The canonical a with a + shape[i] in ideals[i] for every i < |shape|
/// (pairing by list order), reduced modulo the intersection of the used
/// ideals. Diagonal ideals are solved coordinatewise; other lattices need
/// pairwise coprime indices. Throws NotCoprime or NotEnoughIdeals.
Point construct_zero_translate_crt(const std::vector<Lattice>& ideals, const Shape& shape);
/// The same construction in O_K^m: a + shape[i] in ideals[i].
std::vector<QuadElement> construct_zero_translate_crt(const std::vector<ProductIdeal>& ideals,
                                                      const std::vector<std::vector<QuadElement>>& shape);

/// The intersection H of one covering member per cell of g + shape, so that
/// g + H + shape lies in M. Throws NotAZeroWindow if some cell is free.
Lattice syndetic_period(const FamilySpec& spec, const Point& g, const Shape& shape);
/// Checks g + h + shape ⊆ M for `samples` points h of H (small combinations
/// of its basis); returns the number of translates checked.
std::size_t verify_period(const FamilySpec& spec, const Point& g, const Shape& shape, const Lattice& h,
                          std::size_t samples = 100);

/// A certified shift: cell i of the centered box (row-major order) is claimed
/// to lie in witnesses[i], a member of the family.
struct DensitySeed {
  Point shift;
  std::vector<Lattice> witnesses;
};

/// CRT seed covering the centered box of side n by the given pairwise coprime
/// lattices (one per cell, in row-major order).
DensitySeed crt_seed(const std::vector<Lattice>& ideals, Eigen::Index dim, long n);

struct DensityRow {
  long side = 0;
  Point best_shift;
  /// |M ∩ ([-n,n]^m + x)| / (2n+1)^m, a lower bound for the upper Banach density.
  Rational ratio;
  bool from_seed = false;
};

struct DensityProfile {
  std::vector<DensityRow> rows;
};

/// For each n, the best exact ratio over x in shift_search (first maximum in
/// row-major order), improved by any seed of matching size whose witnesses
/// verify.
DensityProfile density_profile(const FamilySpec& spec, const std::vector<long>& sides, const Box& shift_search,
                               const WindowOptions& opts = {}, const std::vector<DensitySeed>& seeds = {});

// Export formats.
/// One line per value of the leading coordinates, 0/1 over the last coordinate.
std::string to_csv(const EtaWindow& w);
/// Plain PGM (P2, maxval 1) for 2-dimensional windows: row 0 is the highest
/// second coordinate, columns run over the first coordinate ascending.
std::string to_pgm(const EtaWindow& w);
/// {"box":{"lo":[..],"hi":[..]},"cells":N,"ones":K,"bits":"<base64>"}, bits
/// packed LSB-first in row-major order.
std::string to_json_text(const EtaWindow& w);
EtaWindow window_from_json_text(const std::string& text);
std::string density_csv(const DensityProfile& p);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace bfree
