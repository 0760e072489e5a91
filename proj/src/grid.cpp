#include "hitdns/grid.hpp"

#include <string>

#include "hitdns/errors.hpp"

namespace hitdns {

InvalidStateError::InvalidStateError(const std::string& what, std::optional<std::array<int, 3>> point,
                                     std::optional<int> rank)
    : std::runtime_error([&] {
        std::string msg = what;
        if (point) {
          msg += " at (" + std::to_string((*point)[0]) + ", " + std::to_string((*point)[1]) + ", " +
                 std::to_string((*point)[2]) + ")";
        }
        if (rank) msg += " on rank " + std::to_string(*rank);
        return msg;
      }()),
      message_(what),
      point_(point),
      rank_(rank) {}

InvalidStateError InvalidStateError::with_rank(int rank) const { return InvalidStateError(message_, point_, rank); }

GridSpec GridSpec::periodic_box(std::array<int, 3> n, std::array<double, 3> length, int ghost) {
  if (ghost < kGhostWidth) {
    throw ConfigError("ghost width must be at least " + std::to_string(kGhostWidth));
  }
  GridSpec spec;
  for (int d = 0; d < 3; ++d) {
    if (n[d] <= 0) throw ConfigError("grid size must be positive in dimension " + std::to_string(d));
    if (!(length[d] > 0)) throw ConfigError("domain length must be positive in dimension " + std::to_string(d));
    spec.n[d] = n[d];
    spec.length[d] = length[d];
    spec.spacing[d] = length[d] / n[d];
  }
  spec.ghost = ghost;
  return spec;
}

GridSpec GridSpec::subgrid(std::array<int, 3> local_n) const {
  GridSpec sub = *this;
  for (int d = 0; d < 3; ++d) {
    if (local_n[d] <= 0) throw ConfigError("subgrid size must be positive");
    sub.n[d] = local_n[d];
    sub.length[d] = spacing[d] * local_n[d];
  }
  return sub;
}

const char* to_string(Layout layout) {
  return layout == Layout::Interleaved ? "Interleaved" : "ComponentContiguous";
}

std::size_t linear_index(int i, int j, int k, const GridSpec& spec) {
  const std::array<int, 3> idx{i, j, k};
  for (int d = 0; d < 3; ++d) {
    if (idx[d] < -spec.ghost || idx[d] >= spec.n[d] + spec.ghost) {
      throw BoundsError("index " + std::to_string(idx[d]) + " outside ghosted range in dimension " +
                        std::to_string(d));
    }
  }
  return spec.index(i, j, k);
}

std::size_t element_offset(std::size_t point_index, int var, Layout layout, std::size_t total_points,
                           int num_vars) {
  if (var < 0 || var >= num_vars) throw BoundsError("variable index out of range");
  if (point_index >= total_points) throw BoundsError("point index out of range");
  return layout == Layout::Interleaved ? std::size_t(num_vars) * point_index + std::size_t(var)
                                       : std::size_t(var) * total_points + point_index;
}

FieldSet::FieldSet(const GridSpec& spec, Layout layout, int num_vars)
    : spec_(spec), layout_(layout), num_vars_(num_vars) {
  if (num_vars <= 0) throw ConfigError("field must hold at least one variable");
  values_ = Eigen::VectorXd::Zero(Eigen::Index(std::size_t(num_vars) * spec.total_points()));
}

double& FieldSet::at(int var, int i, int j, int k) {
  return values_[Eigen::Index(element_offset(linear_index(i, j, k, spec_), var, layout_, spec_.total_points(),
                                             num_vars_))];
}

double FieldSet::at(int var, int i, int j, int k) const {
  return values_[Eigen::Index(element_offset(linear_index(i, j, k, spec_), var, layout_, spec_.total_points(),
                                             num_vars_))];
}

namespace {

int wrap(int idx, int n) {
  const int r = idx % n;
  return r < 0 ? r + n : r;
}

}  // namespace

FieldSet& fill_ghosts_periodic(FieldSet& fields) {
  const GridSpec& s = fields.spec();
  const int g = s.ghost;
  const auto stride = s.strides();
  const std::ptrdiff_t ps = fields.point_stride();
  const std::ptrdiff_t vs = fields.var_stride();
  double* data = fields.data();

  for (int d = 0; d < 3; ++d) {
    // Transverse dimensions: already-processed ones span the full ghosted
    // extent, later ones only the interior.
    const int a = (d == 0) ? 1 : 0;
    const int b = (d == 2) ? 1 : 2;
    auto range = [&](int dim) { return dim < d ? std::pair{-g, s.n[dim] + g} : std::pair{0, s.n[dim]}; };
    const auto [a0, a1] = range(a);
    const auto [b0, b1] = range(b);
    for (int ib = b0; ib < b1; ++ib) {
      for (int ia = a0; ia < a1; ++ia) {
        std::array<int, 3> base{0, 0, 0};
        base[a] = ia;
        base[b] = ib;
        const std::size_t origin = s.index(base[0], base[1], base[2]);
        for (int m = 1; m <= g; ++m) {
          const std::ptrdiff_t lo_dst = std::ptrdiff_t(origin) + std::ptrdiff_t(-m) * stride[d];
          const std::ptrdiff_t lo_src = std::ptrdiff_t(origin) + std::ptrdiff_t(wrap(-m, s.n[d])) * stride[d];
          const int hi = s.n[d] + m - 1;
          const std::ptrdiff_t hi_dst = std::ptrdiff_t(origin) + std::ptrdiff_t(hi) * stride[d];
          const std::ptrdiff_t hi_src = std::ptrdiff_t(origin) + std::ptrdiff_t(wrap(hi, s.n[d])) * stride[d];
          for (int v = 0; v < fields.num_vars(); ++v) {
            data[v * vs + lo_dst * ps] = data[v * vs + lo_src * ps];
            data[v * vs + hi_dst * ps] = data[v * vs + hi_src * ps];
          }
        }
      }
    }
  }
  return fields;
}

FieldSet convert_layout(const FieldSet& fields, Layout target) {
  FieldSet out(fields.spec(), target, fields.num_vars());
  const std::size_t points = fields.spec().total_points();
  for (int v = 0; v < fields.num_vars(); ++v) {
    for (std::size_t p = 0; p < points; ++p) {
      out.data()[out.offset(v, p)] = fields.data()[fields.offset(v, p)];
    }
  }
  return out;
}

void copy_interior(const FieldSet& src, FieldSet& dst) {
  if (src.spec().n != dst.spec().n || src.num_vars() != dst.num_vars()) {
    throw BoundsError("copy_interior: interior shapes differ");
  }
  const GridSpec& s = src.spec();
  for (int v = 0; v < src.num_vars(); ++v) {
    for_each_interior(s, [&](int i, int j, int k) { dst(v, i, j, k) = src(v, i, j, k); });
  }
}

}  // namespace hitdns
