#pragma once

// Coarse zero count: connected components of {|h| <= delta} inside B_r that
// contain a certified zero, on a fixed grid.
//
// The grid has (2R+1)^2 square cells tiling [-r, r]^2, R = resolution, and a
// cell belongs to the disk when its centre does. Cell centres sit at
// (i - R) * 2r / (2R+1), so the only integer column is x = 0. A cell holding
// a certified root is always in the mask: the grid value there is usually
// far above small delta, and forcing it keeps the counts monotone in delta.

#include "harmzero/certify.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace harmzero {

struct CoarseRaster {
  double r = 0;
  int resolution = 0;
  int side = 0;         // 2 * resolution + 1
  double cell = 0;      // cell width
  std::vector<double> modulus;  // |h| at cell centres, row-major (row = y index)
  std::vector<std::uint8_t> in_disk;

  double centre(int i) const { return (i - resolution) * cell; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(side) + static_cast<std::size_t>(i);
  }
  /// Cell containing (x, y), or -1 when outside the square.
  long cell_of(double x, double y) const;
};

/// Samples |h| on the grid. Requires resolution >= 16 and 0 < r <= 2^N.
CoarseRaster rasterize(const Construction& constr, const Real& r, int resolution);

struct CellBox {
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;  // inclusive cell index range
};

struct CoarseComponent {
  std::vector<std::size_t> cells;  // raster indices, ascending
  bool contains_zero = false;
  CellBox bbox;
};

/// 4-connected components of the thresholded mask. Roots of `certificates`
/// inside B_r force their cells into the mask. Throws for delta < 0.
std::vector<CoarseComponent> sublevel_components(const CoarseRaster& raster, double delta,
                                                 std::span<const ZeroCertificate> certificates);

std::vector<CoarseComponent> sublevel_components(const Construction& constr, const Real& r,
                                                 double delta, int resolution,
                                                 std::span<const ZeroCertificate> certificates);

int coarse_zero_count(const CoarseRaster& raster, double delta,
                      std::span<const ZeroCertificate> certificates);

int coarse_zero_count(const Construction& constr, const Real& r, double delta, int resolution,
                      std::span<const ZeroCertificate> certificates);

struct CoarseSweep {
  double r = 0;
  int resolution = 0;
  std::vector<double> deltas;  // ascending
  std::vector<int> counts;
  double mu_hat = 0;           // sampled max |h| on the circle of radius 2r
  double fitted_c = 0;         // smallest C with count <= C (log(mu_hat / delta))^2
  std::vector<double> fitted_bound;
  bool monotone() const;
};

CoarseSweep coarse_sweep(const Construction& constr, const Real& r, std::span<const double> deltas,
                         int resolution, std::span<const ZeroCertificate> certificates,
                         int circle_samples = 720);

/// `count` values log-spaced from hi down to lo, returned ascending.
std::vector<double> log_spaced(double lo, double hi, int count);

/// Pairs of certified roots in B_r closer than `cells` grid cells.
int close_root_pairs(const CoarseRaster& raster, std::span<const ZeroCertificate> certificates,
                     double cells);

void write_sweep_csv(std::ostream& out, const CoarseSweep& sweep, const std::string& hash);

/// Binary PGM: 0 outside the disk, 96 disk, 192 mask, 255 zero-containing component.
void write_mask_pgm(std::ostream& out, const CoarseRaster& raster, double delta,
                    std::span<const ZeroCertificate> certificates);

}  // namespace harmzero
