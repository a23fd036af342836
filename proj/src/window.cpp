#include "bfree/window.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "bfree/error.hpp"

namespace bfree {

namespace {

void require_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) fail(Errc::DimensionMismatch, std::string(what) + ": dimensions differ");
}

std::uint64_t checked_volume(const Box& box, std::uint64_t limit) {
  const BigInt v = box.volume();
  if (v > BigInt(std::to_string(limit)))
    fail(Errc::TooLarge, "box volume " + to_string(v) + " exceeds the cell limit " + std::to_string(limit));
  return std::stoull(to_string(v));
}

// Advances p to the next point of the box in row-major order; false at the end.
bool next_point(const Box& box, Point& p) {
  for (Eigen::Index i = box.dim() - 1; i >= 0; --i) {
    if (p(i) < box.hi()(i)) {
      p(i) += 1;
      return true;
    }
    p(i) = box.lo()(i);
  }
  return false;
}

}  // namespace

Box::Box(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() == 0 || lo_.size() != hi_.size()) fail(Errc::InvalidArgument, "box corners must have equal, positive length");
  for (Eigen::Index i = 0; i < lo_.size(); ++i)
    if (lo_(i) > hi_(i)) fail(Errc::InvalidArgument, "box has lo > hi in coordinate " + std::to_string(i));
}

Box Box::centered(const Point& center, long n) {
  if (n < 0) fail(Errc::InvalidArgument, "box side must be non-negative");
  Point d = IntVector::Constant(center.size(), BigInt(n));
  return Box(center - d, center + d);
}

BigInt Box::volume() const {
  BigInt v = 1;
  for (Eigen::Index i = 0; i < dim(); ++i) v *= side(i);
  return v;
}

bool Box::contains(const Point& p) const {
  if (p.size() != dim()) return false;
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (p(i) < lo_(i) || p(i) > hi_(i)) return false;
  return true;
}

Box Box::minkowski(const Box& other) const {
  require_dim(dim(), other.dim(), "minkowski");
  return Box(lo_ + other.lo_, hi_ + other.hi_);
}

std::uint64_t Box::linear_index(const Point& p) const {
  if (!contains(p)) fail(Errc::InvalidArgument, "point " + format_point(p) + " outside the box");
  BigInt idx = 0;
  for (Eigen::Index i = 0; i < dim(); ++i) idx = idx * side(i) + (p(i) - lo_(i));
  return idx.get_ui();
}

Point Box::point_at(std::uint64_t index) const {
  Point p(dim());
  BigInt rest(std::to_string(index));
  for (Eigen::Index i = dim() - 1; i >= 0; --i) {
    const BigInt s = side(i);
    p(i) = lo_(i) + floor_mod(rest, s);
    rest = floor_div(rest, s);
  }
  return p;
}

Shape::Shape(std::vector<Point> offsets) {
  if (offsets.empty()) fail(Errc::InvalidArgument, "shape must be non-empty");
  std::set<std::vector<BigInt>> seen;
  const Eigen::Index m = offsets.front().size();
  for (Point& p : offsets) {
    if (p.size() != m) fail(Errc::DimensionMismatch, "shape offsets differ in dimension");
    std::vector<BigInt> key(p.data(), p.data() + p.size());
    if (seen.insert(key).second) offsets_.push_back(std::move(p));
  }
}

Shape Shape::rectangle(const Box& box) {
  std::vector<Point> pts;
  Point p = box.lo();
  do pts.push_back(p);
  while (next_point(box, p));
  return Shape(std::move(pts));
}

Box Shape::bounding_box() const {
  Point lo = offsets_.front();
  Point hi = offsets_.front();
  for (const Point& p : offsets_)
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) < lo(i)) lo(i) = p(i);
      if (p(i) > hi(i)) hi(i) = p(i);
    }
  return Box(lo, hi);
}

std::uint64_t EtaWindow::ones() const {
  return static_cast<std::uint64_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

EtaWindow eta_window(const FamilySpec& spec, const Box& box, const WindowOptions& opts) {
  require_dim(spec.dim, box.dim(), "eta_window");
  const std::uint64_t n = checked_volume(box, opts.cell_limit);
  EtaWindow w{box, std::vector<std::uint8_t>(n, 0)};
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(std::max<std::uint64_t>(1, n / 64))));
  auto run = [&](std::uint64_t begin, std::uint64_t end) {
    if (begin >= end) return;
    Point p = box.point_at(begin);
    for (std::uint64_t i = begin; i < end; ++i) {
      w.bits[i] = static_cast<std::uint8_t>(eta(spec, p));
      next_point(box, p);
    }
  };
  if (workers == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run, t * chunk, std::min(n, (t + 1) * chunk));
    for (std::thread& t : pool) t.join();
  }
  return w;
}

namespace {

template <class OnHit>
void scan_zero_translates(const FamilySpec& spec, const Shape& shape, const Box& search, const WindowOptions& opts,
                          OnHit&& on_hit) {
  require_dim(spec.dim, shape.dim(), "find_zero_translate");
  require_dim(spec.dim, search.dim(), "find_zero_translate");
  const Box region = search.minkowski(shape.bounding_box());
  const EtaWindow w = eta_window(spec, region, opts);
  Point g = search.lo();
  do {
    bool zero = std::all_of(shape.offsets().begin(), shape.offsets().end(),
                            [&](const Point& f) { return w.at(g + f) == 0; });
    if (zero && !on_hit(g)) return;
  } while (next_point(search, g));
}

}  // namespace

std::optional<Point> find_zero_translate(const FamilySpec& spec, const Shape& shape, const Box& search,
                                         const WindowOptions& opts) {
  std::optional<Point> hit;
  scan_zero_translates(spec, shape, search, opts, [&](const Point& g) {
    hit = g;
    return false;
  });
  return hit;
}

std::vector<Point> find_all_zero_translates(const FamilySpec& spec, const Shape& shape, const Box& search,
                                            const WindowOptions& opts) {
  std::vector<Point> hits;
  scan_zero_translates(spec, shape, search, opts, [&](const Point& g) {
    hits.push_back(g);
    return true;
  });
  return hits;
}

Point construct_zero_translate_crt(const std::vector<Lattice>& ideals, const Shape& shape) {
  const std::size_t k = shape.size();
  if (ideals.size() < k)
    fail(Errc::NotEnoughIdeals, std::to_string(ideals.size()) + " ideals for a shape of " + std::to_string(k) + " cells");
  const Eigen::Index m = shape.dim();
  std::vector<Lattice> used(ideals.begin(), ideals.begin() + static_cast<std::ptrdiff_t>(k));
  for (const Lattice& l : used) require_dim(l.dim(), m, "construct_zero_translate_crt");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (!coprime(used[i], used[j]))
        fail(Errc::NotCoprime, "ideals " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");

  Point a(m);
  const bool diagonal = std::all_of(used.begin(), used.end(), [](const Lattice& l) { return l.is_diagonal(); });
  if (diagonal) {
    for (Eigen::Index c = 0; c < m; ++c) {
      std::vector<BigInt> moduli;
      std::vector<BigInt> residues;
      for (std::size_t i = 0; i < k; ++i) {
        moduli.push_back(used[i].basis()(c, c));
        residues.push_back(-shape.offsets()[i](c));
      }
      a(c) = crt(moduli, residues);
    }
  } else {
    // With pairwise coprime indices d_i, d_i Z^m ⊆ L_i and the d_i Z^m are
    // ideals of Z^m, so classical CRT applies coordinatewise.
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (gcd(used[i].index(), used[j].index()) != 1)
          fail(Errc::NotCoprime, "non-diagonal lattices " + std::to_string(i) + " and " + std::to_string(j) +
                                     " need coprime indices");
    std::vector<BigInt> moduli;
    for (const Lattice& l : used) moduli.push_back(l.index());
    for (Eigen::Index c = 0; c < m; ++c) {
      std::vector<BigInt> residues;
      for (std::size_t i = 0; i < k; ++i) residues.push_back(-shape.offsets()[i](c));
      a(c) = crt(moduli, residues);
    }
  }
  a = reduce(intersect_all(used), a);
  for (std::size_t i = 0; i < k; ++i)
    if (!contains(used[i], a + shape.offsets()[i]))
      fail(Errc::InconsistencyDetected, "CRT output misses cell " + std::to_string(i));
  return a;
}

std::vector<QuadElement> construct_zero_translate_crt(const std::vector<ProductIdeal>& ideals,
                                                      const std::vector<std::vector<QuadElement>>& shape) {
  if (shape.empty()) fail(Errc::InvalidArgument, "shape must be non-empty");
  if (ideals.size() < shape.size())
    fail(Errc::NotEnoughIdeals, std::to_string(ideals.size()) + " ideals for a shape of " + std::to_string(shape.size()) + " cells");
  std::vector<ProductIdeal> used(ideals.begin(), ideals.begin() + static_cast<std::ptrdiff_t>(shape.size()));
  std::vector<std::vector<QuadElement>> residues;
  for (const auto& f : shape) {
    std::vector<QuadElement> neg;
    for (const QuadElement& x : f) neg.push_back({-x.a, -x.b});
    residues.push_back(std::move(neg));
  }
  std::vector<QuadElement> a = crt(used, residues);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    std::vector<QuadElement> cell;
    for (std::size_t j = 0; j < a.size(); ++j) cell.push_back(add(a[j], shape[i].at(j)));
    if (!used[i].contains(cell)) fail(Errc::InconsistencyDetected, "CRT output misses cell " + std::to_string(i));
  }
  return a;
}

Lattice syndetic_period(const FamilySpec& spec, const Point& g, const Shape& shape) {
  std::vector<Lattice> members;
  for (const Point& f : shape.offsets()) {
    auto l = member_containing(spec, g + f);
    if (!l) fail(Errc::NotAZeroWindow, "cell " + format_point(g + f) + " is free");
    members.push_back(*l);
  }
  return intersect_all(members);
}

std::size_t verify_period(const FamilySpec& spec, const Point& g, const Shape& shape, const Lattice& h,
                          std::size_t samples) {
  const Eigen::Index m = h.dim();
  long r = 0;
  while (pow(BigInt(2 * r + 1), static_cast<unsigned long>(m)) < BigInt(std::to_string(samples))) ++r;
  const Box coeffs = Box::centered(IntVector::Zero(m), r);
  Point c = coeffs.lo();
  std::size_t checked = 0;
  do {
    const Point shift = g + h.basis().lazyProduct(c);
    for (const Point& f : shape.offsets())
      if (!in_M(spec, shift + f))
        fail(Errc::InconsistencyDetected, "period translate " + format_point(shift) + " leaves the zero window");
    if (++checked == samples) break;
  } while (next_point(coeffs, c));
  return checked;
}

DensitySeed crt_seed(const std::vector<Lattice>& ideals, Eigen::Index dim, long n) {
  const Shape cells = Shape::rectangle(Box::centered(IntVector::Zero(dim), n));
  DensitySeed seed;
  seed.shift = construct_zero_translate_crt(ideals, cells);
  seed.witnesses.assign(ideals.begin(), ideals.begin() + static_cast<std::ptrdiff_t>(cells.size()));
  return seed;
}

namespace {

// m-dimensional prefix sums of the M-indicator over a box.
class PrefixCounts {
 public:
  PrefixCounts(const EtaWindow& w) : box_(w.box) {
    const Eigen::Index m = box_.dim();
    for (Eigen::Index i = 0; i < m; ++i) ext_.push_back(box_.side(i).get_ui() + 1);
    std::uint64_t total = 1;
    for (std::uint64_t e : ext_) total *= e;
    sums_.assign(total, 0);
    // Cell x of the window lands at x + 1 in every coordinate.
    std::vector<std::uint64_t> idx(m, 0);
    for (std::uint64_t lin = 0; lin < w.bits.size(); ++lin) {
      std::uint64_t rest = lin;
      for (Eigen::Index i = m - 1; i >= 0; --i) {
        const std::uint64_t s = ext_[i] - 1;
        idx[i] = rest % s + 1;
        rest /= s;
      }
      sums_[flat(idx)] = 1 - w.bits[lin];
    }
    for (Eigen::Index axis = 0; axis < m; ++axis) {
      std::uint64_t stride = 1;
      for (Eigen::Index i = m - 1; i > axis; --i) stride *= ext_[i];
      for (std::uint64_t pos = 0; pos < total; ++pos) {
        if ((pos / stride) % ext_[axis] == 0) continue;
        sums_[pos] += sums_[pos - stride];
      }
    }
  }

  // Number of M-cells in the sub-box [lo, hi] (absolute coordinates).
  std::int64_t count(const Point& lo, const Point& hi) const {
    const Eigen::Index m = box_.dim();
    std::int64_t total = 0;
    std::vector<std::uint64_t> corner(m);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      int sign = 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (mask & (1u << i)) {
          corner[i] = BigInt(hi(i) - box_.lo()(i) + 1).get_ui();
        } else {
          corner[i] = BigInt(lo(i) - box_.lo()(i)).get_ui();
          sign = -sign;
        }
      }
      total += sign * sums_[flat(corner)];
    }
    return total;
  }

 private:
  std::uint64_t flat(const std::vector<std::uint64_t>& idx) const {
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) f = f * ext_[i] + idx[i];
    return f;
  }

  Box box_;
  std::vector<std::uint64_t> ext_;
  std::vector<std::int64_t> sums_;
};

}  // namespace

DensityProfile density_profile(const FamilySpec& spec, const std::vector<long>& sides, const Box& shift_search,
                               const WindowOptions& opts, const std::vector<DensitySeed>& seeds) {
  require_dim(spec.dim, shift_search.dim(), "density_profile");
  if (sides.empty()) return {};
  const Eigen::Index m = spec.dim;
  for (long n : sides)
    if (n < 0) fail(Errc::InvalidArgument, "density sides must be non-negative");
  const long n_max = *std::max_element(sides.begin(), sides.end());
  const Point origin = IntVector::Zero(m);
  const Box region = shift_search.minkowski(Box::centered(origin, n_max));
  const EtaWindow w = eta_window(spec, region, opts);
  const PrefixCounts counts(w);
  const Point ones_vec = IntVector::Constant(m, BigInt(1));

  DensityProfile profile;
  for (long n : sides) {
    const Point d = ones_vec * BigInt(n);
    const std::int64_t volume = pow(BigInt(2 * n + 1), static_cast<unsigned long>(m)).get_si();
    DensityRow row;
    row.side = n;
    std::int64_t best = -1;
    Point x = shift_search.lo();
    do {
      const std::int64_t c = counts.count(x - d, x + d);
      if (c > best) {
        best = c;
        row.best_shift = x;
      }
    } while (best < volume && next_point(shift_search, x));

    for (const DensitySeed& seed : seeds) {
      if (seed.witnesses.size() != static_cast<std::size_t>(volume) || seed.shift.size() != m) continue;
      const Shape cells = Shape::rectangle(Box::centered(origin, n));
      std::int64_t verified = 0;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const Lattice& l = seed.witnesses[i];
        if (is_member(spec, l) && contains(l, seed.shift + cells.offsets()[i])) ++verified;
      }
      if (verified > best) {
        best = verified;
        row.best_shift = seed.shift;
        row.from_seed = true;
      }
    }
    row.ratio = Rational(BigInt(std::to_string(best)), BigInt(std::to_string(volume)));
    row.ratio.canonicalize();
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

}  // namespace bfree
