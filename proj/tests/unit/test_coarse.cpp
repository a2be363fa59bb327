#include "harmzero/coarse.hpp"

#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

using namespace harmzero;

namespace {

struct Fixture {
  Construction constr;
  std::vector<ZeroCertificate> certs;
  CoarseRaster raster;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    out.constr = build_construction({1, 2, 3}, Real("0.5"), 3, 192);
    out.certs = count_zeros_ball(out.constr, Real(4)).certificates;
    out.raster = rasterize(out.constr, Real(4), 64);
    return out;
  }();
  set_working_precision(f.constr.precision);
  return f;
}

// Union-find labelling of the same mask, as an independent oracle.
int union_find_components(const CoarseRaster& r, const std::vector<bool>& mask) {
  std::vector<std::size_t> parent(mask.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int j = 0; j < r.side; ++j) {
    for (int i = 0; i < r.side; ++i) {
      const std::size_t a = r.index(i, j);
      if (!mask[a]) continue;
      if (i + 1 < r.side && mask[r.index(i + 1, j)]) parent[find(a)] = find(r.index(i + 1, j));
      if (j + 1 < r.side && mask[r.index(i, j + 1)]) parent[find(a)] = find(r.index(i, j + 1));
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (mask[a]) roots.insert(find(a));
  }
  return static_cast<int>(roots.size());
}

}  // namespace

TEST_CASE("grid geometry") {
  const CoarseRaster& r = fixture().raster;
  CHECK(r.side == 129);
  CHECK(r.modulus.size() == 129u * 129u);
  CHECK(r.centre(64) == 0.0);
  CHECK(r.cell_of(0.0, 0.0) == static_cast<long>(r.index(64, 64)));
  CHECK(r.cell_of(5.0, 0.0) == -1);
}

TEST_CASE("flood fill agrees with union-find") {
  const Fixture& f = fixture();
  for (double delta : {1e-12, 1e-6, 1e-3, 1e-2, 1.0}) {
    const auto comps = sublevel_components(f.raster, delta, {});
    std::vector<bool> mask(f.raster.modulus.size());
    std::size_t cells = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask[i] = f.raster.in_disk[i] && f.raster.modulus[i] <= delta;
    }
    for (const auto& c : comps) cells += c.cells.size();
    CHECK(static_cast<int>(comps.size()) == union_find_components(f.raster, mask));
    CHECK(cells == static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)));
  }
}

TEST_CASE("a delta above the sampled maximum covers the disk in one component") {
  const Fixture& f = fixture();
  double top = 0;
  std::size_t disk = 0;
  for (std::size_t i = 0; i < f.raster.modulus.size(); ++i) {
    if (f.raster.in_disk[i]) {
      top = std::max(top, f.raster.modulus[i]);
      ++disk;
    }
  }
  const auto comps = sublevel_components(f.raster, top, f.certs);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].cells.size() == disk);
  CHECK(coarse_zero_count(f.raster, top, f.certs) == 1);
}

TEST_CASE("delta = 0 keeps only exact zeros and forced cells") {
  const Fixture& f = fixture();
  const auto comps = sublevel_components(f.raster, 0.0, {});
  // The x = 0 column is an exact zero of h.
  REQUIRE(comps.size() == 1);
  for (std::size_t idx : comps[0].cells) CHECK(idx % static_cast<std::size_t>(f.raster.side) == 64);
  CHECK_THROWS_AS(sublevel_components(f.raster, -1.0, {}), std::invalid_argument);
}

TEST_CASE("sweep is monotone and bounded by the certificate count") {
  const Fixture& f = fixture();
  const auto deltas = log_spaced(1e-12, 1e-1, 12);
  CHECK(deltas.front() == doctest::Approx(1e-12));
  CHECK(deltas.back() == doctest::Approx(1e-1));
  const CoarseSweep s = coarse_sweep(f.constr, Real(4), deltas, 64, f.certs, 90);
  CHECK(s.monotone());
  for (int count : s.counts) CHECK(count <= static_cast<int>(f.certs.size()));
  CHECK(s.counts.front() >= s.counts.back());
  CHECK(s.fitted_c > 0);
  CHECK(std::isfinite(s.fitted_c));
  for (std::size_t i = 0; i < deltas.size(); ++i) CHECK(s.counts[i] <= s.fitted_bound[i] * (1 + 1e-12));

  std::ostringstream csv;
  write_sweep_csv(csv, s, "abc");
  CHECK(csv.str().rfind("# construction abc\n", 0) == 0);
  std::ostringstream pgm;
  write_mask_pgm(pgm, f.raster, 1e-6, f.certs);
  CHECK(pgm.str().rfind("P5\n129 129\n255\n", 0) == 0);
  CHECK(pgm.str().size() == std::string("P5\n129 129\n255\n").size() + 129 * 129);

  const std::vector<double> unsorted{1e-3, 1e-6};
  CHECK_THROWS_AS(coarse_sweep(f.constr, Real(4), unsorted, 64, f.certs), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(f.constr, Real(4), 8), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(f.constr, Real(9), 64), DomainError);
}
