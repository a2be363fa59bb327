#include "harmzero/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace harmzero {

long CoarseRaster::cell_of(double x, double y) const {
  const double fi = std::floor(x / cell + resolution + 0.5);
  const double fj = std::floor(y / cell + resolution + 0.5);
  if (fi < 0 || fj < 0 || fi >= side || fj >= side) return -1;
  return static_cast<long>(index(static_cast<int>(fi), static_cast<int>(fj)));
}

CoarseRaster rasterize(const Construction& constr, const Real& r, int resolution) {
  if (resolution < 16) throw std::invalid_argument("coarse: resolution must be >= 16");
  if (!(r > 0)) throw std::invalid_argument("coarse: radius must be > 0");
  if (r > ldexp2(Real(1), constr.depth)) throw DomainError("coarse: radius exceeds 2^N");

  CoarseRaster out;
  out.r = r.convert_to<double>();
  out.resolution = resolution;
  out.side = 2 * resolution + 1;
  const Real cell = 2 * r / Real(out.side);
  out.cell = cell.convert_to<double>();
  const int side = out.side;

  std::vector<Real> coord(static_cast<std::size_t>(side));
  for (int i = 0; i < side; ++i) coord[static_cast<std::size_t>(i)] = cell * Real(i - resolution);

  // g = sum over levels and terms of (a b_j sin(pi j x / 2^k)) * E_k(y)^j.
  // Each factor is evaluated at full precision and tabulated in double.
  std::vector<std::vector<double>> col, row;
  for (const Level& level : constr.levels) {
    const unsigned k = static_cast<unsigned>(level.k);
    for (const auto& term : level.block.terms()) {
      std::vector<double> c(static_cast<std::size_t>(side)), w(static_cast<std::size_t>(side));
      const Real coef = level.a * term.b;
      for (int i = 0; i < side; ++i) {
        const DyadicRational x = DyadicRational::from_real(coord[static_cast<std::size_t>(i)]);
        c[static_cast<std::size_t>(i)] = (coef * sinpi_dyadic((x * term.j).scaled_down(k))).convert_to<double>();
        w[static_cast<std::size_t>(i)] =
            exp(ldexp2(pi() * coord[static_cast<std::size_t>(i)] * Real(term.j), -level.k)).convert_to<double>();
      }
      col.push_back(std::move(c));
      row.push_back(std::move(w));
    }
  }
  std::vector<double> s_col(static_cast<std::size_t>(side)), e_row(static_cast<std::size_t>(side));
  for (int i = 0; i < side; ++i) {
    const Real& v = coord[static_cast<std::size_t>(i)];
    s_col[static_cast<std::size_t>(i)] = sinpi_dyadic(DyadicRational::from_real(v)).convert_to<double>();
    e_row[static_cast<std::size_t>(i)] = exp(pi() * v).convert_to<double>();
  }

  out.modulus.assign(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), 0.0);
  out.in_disk.assign(out.modulus.size(), 0);
  const double r2 = out.r * out.r;
  for (int j = 0; j < side; ++j) {
    const double y = out.centre(j);
    for (int i = 0; i < side; ++i) {
      const double x = out.centre(i);
      const std::size_t idx = out.index(i, j);
      out.in_disk[idx] = x * x + y * y <= r2 ? 1 : 0;
      double g = 0;
      for (std::size_t t = 0; t < col.size(); ++t) g += col[t][static_cast<std::size_t>(i)] * row[t][static_cast<std::size_t>(j)];
      const double s = s_col[static_cast<std::size_t>(i)] * e_row[static_cast<std::size_t>(j)];
      out.modulus[idx] = std::hypot(g, s);
    }
  }
  return out;
}

namespace {

std::vector<std::uint8_t> forced_cells(const CoarseRaster& raster,
                                       std::span<const ZeroCertificate> certificates) {
  std::vector<std::uint8_t> forced(raster.modulus.size(), 0);
  for (const auto& cert : certificates) {
    const double x = static_cast<double>(cert.line_x);
    const double y = cert.refined_root.convert_to<double>();
    if (x * x + y * y > raster.r * raster.r) continue;
    const long c = raster.cell_of(x, y);
    if (c >= 0) forced[static_cast<std::size_t>(c)] = 1;
  }
  return forced;
}

}  // namespace

std::vector<CoarseComponent> sublevel_components(const CoarseRaster& raster, double delta,
                                                 std::span<const ZeroCertificate> certificates) {
  if (!(delta >= 0)) throw std::invalid_argument("coarse: delta must be >= 0");
  const std::vector<std::uint8_t> forced = forced_cells(raster, certificates);
  const std::size_t total = raster.modulus.size();
  std::vector<std::uint8_t> mask(total, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    mask[idx] = forced[idx] || (raster.in_disk[idx] && raster.modulus[idx] <= delta);
  }

  std::vector<int> label(total, -1);
  std::vector<CoarseComponent> comps;
  std::vector<std::size_t> stack;
  const int side = raster.side;
  for (std::size_t start = 0; start < total; ++start) {
    if (!mask[start] || label[start] >= 0) continue;
    const int id = static_cast<int>(comps.size());
    CoarseComponent comp;
    const int si = static_cast<int>(start % static_cast<std::size_t>(side));
    const int sj = static_cast<int>(start / static_cast<std::size_t>(side));
    comp.bbox = {si, sj, si, sj};
    label[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      comp.cells.push_back(cur);
      if (forced[cur]) comp.contains_zero = true;
      const int i = static_cast<int>(cur % static_cast<std::size_t>(side));
      const int j = static_cast<int>(cur / static_cast<std::size_t>(side));
      comp.bbox.i0 = std::min(comp.bbox.i0, i);
      comp.bbox.i1 = std::max(comp.bbox.i1, i);
      comp.bbox.j0 = std::min(comp.bbox.j0, j);
      comp.bbox.j1 = std::max(comp.bbox.j1, j);
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int ni = i + di[d], nj = j + dj[d];
        if (ni < 0 || nj < 0 || ni >= side || nj >= side) continue;
        const std::size_t n = raster.index(ni, nj);
        if (mask[n] && label[n] < 0) {
          label[n] = id;
          stack.push_back(n);
        }
      }
    }
    std::sort(comp.cells.begin(), comp.cells.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::vector<CoarseComponent> sublevel_components(const Construction& constr, const Real& r,
                                                 double delta, int resolution,
                                                 std::span<const ZeroCertificate> certificates) {
  if (!(delta >= 0)) throw std::invalid_argument("coarse: delta must be >= 0");
  return sublevel_components(rasterize(constr, r, resolution), delta, certificates);
}

int coarse_zero_count(const CoarseRaster& raster, double delta,
                      std::span<const ZeroCertificate> certificates) {
  const auto comps = sublevel_components(raster, delta, certificates);
  return static_cast<int>(std::count_if(comps.begin(), comps.end(),
                                        [](const CoarseComponent& c) { return c.contains_zero; }));
}

int coarse_zero_count(const Construction& constr, const Real& r, double delta, int resolution,
                      std::span<const ZeroCertificate> certificates) {
  if (!(delta >= 0)) throw std::invalid_argument("coarse: delta must be >= 0");
  return coarse_zero_count(rasterize(constr, r, resolution), delta, certificates);
}

bool CoarseSweep::monotone() const {
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[i - 1]) return false;
  }
  return true;
}

CoarseSweep coarse_sweep(const Construction& constr, const Real& r, std::span<const double> deltas,
                         int resolution, std::span<const ZeroCertificate> certificates,
                         int circle_samples) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0)) throw std::invalid_argument("coarse sweep: deltas must be > 0");
    if (i > 0 && !(deltas[i] > deltas[i - 1])) {
      throw std::invalid_argument("coarse sweep: deltas must be strictly ascending");
    }
  }
  const CoarseRaster raster = rasterize(constr, r, resolution);
  CoarseSweep sweep;
  sweep.r = raster.r;
  sweep.resolution = resolution;
  sweep.deltas.assign(deltas.begin(), deltas.end());
  for (double d : deltas) sweep.counts.push_back(coarse_zero_count(raster, d, certificates));

  Real mu(0);
  const Real r2 = 2 * r;
  for (int i = 0; i < circle_samples; ++i) {
    const Real theta = 2 * pi() * Real(i) / Real(circle_samples);
    const HValue h = eval_h(constr, r2 * cos(theta), r2 * sin(theta));
    mu = std::max(mu, hypot(h.g.value, h.s.value));
  }
  sweep.mu_hat = mu.convert_to<double>();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double l = std::log(sweep.mu_hat / deltas[i]);
    if (l > 0) sweep.fitted_c = std::max(sweep.fitted_c, sweep.counts[i] / (l * l));
  }
  for (double d : deltas) {
    const double l = std::log(sweep.mu_hat / d);
    sweep.fitted_bound.push_back(sweep.fitted_c * l * l);
  }
  return sweep;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi >= lo) || count < 1) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> out;
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? hi : std::pow(10.0, a + (b - a) * i / (count - 1)));
  }
  return out;
}

int close_root_pairs(const CoarseRaster& raster, std::span<const ZeroCertificate> certificates,
                     double cells) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& cert : certificates) {
    const double x = static_cast<double>(cert.line_x);
    const double y = cert.refined_root.convert_to<double>();
    if (x * x + y * y <= raster.r * raster.r) pts.emplace_back(x, y);
  }
  const double limit = cells * raster.cell;
  int pairs = 0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second) < limit) ++pairs;
    }
  }
  return pairs;
}

void write_sweep_csv(std::ostream& out, const CoarseSweep& sweep, const std::string& hash) {
  out << "# construction " << hash << "\n";
  out << "# r " << sweep.r << " resolution " << sweep.resolution << " mu_hat " << sweep.mu_hat
      << " fitted_c " << sweep.fitted_c << "\n";
  out << "delta,count,fitted_bound\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < sweep.deltas.size(); ++i) {
    out << sweep.deltas[i] << ',' << sweep.counts[i] << ',' << sweep.fitted_bound[i] << "\n";
  }
  out.precision(old);
}

void write_mask_pgm(std::ostream& out, const CoarseRaster& raster, double delta,
                    std::span<const ZeroCertificate> certificates) {
  const auto comps = sublevel_components(raster, delta, certificates);
  std::vector<unsigned char> pix(raster.modulus.size(), 0);
  for (std::size_t i = 0; i < pix.size(); ++i) pix[i] = raster.in_disk[i] ? 96 : 0;
  for (const auto& c : comps) {
    for (std::size_t idx : c.cells) pix[idx] = c.contains_zero ? 255 : 192;
  }
  out << "P5\n" << raster.side << ' ' << raster.side << "\n255\n";
  // Top row first: largest y.
  for (int j = raster.side - 1; j >= 0; --j) {
    out.write(reinterpret_cast<const char*>(pix.data() + raster.index(0, j)), raster.side);
  }
}

}  // namespace harmzero
