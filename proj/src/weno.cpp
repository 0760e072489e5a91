#include "hitdns/weno.hpp"

namespace hitdns {

void reconstruct_line(const double* line, int n, Side side, const WenoParams& params, double* out) {
  if (side == Side::Left) {
    for (int i = -1; i < n; ++i) {
      const Stencil5<double> s(line[i - 2], line[i - 1], line[i], line[i + 1], line[i + 2]);
      out[i + 1] = reconstruct_left<double>(s, params);
    }
  } else {
    for (int i = -1; i < n; ++i) {
      const Stencil5<double> s(line[i + 3], line[i + 2], line[i + 1], line[i], line[i - 1]);
      out[i + 1] = reconstruct_left<double>(s, params);
    }
  }
}

Eigen::MatrixXd reconstruct_field(const FieldSet& field, int var, int dir, Side side, const WenoParams& params) {
  const GridSpec& spec = field.spec();
  const int a = (dir == 0) ? 1 : 0;
  const int b = (dir == 2) ? 1 : 2;
  const int n = spec.n[dir];
  const int g = spec.ghost;
  Eigen::MatrixXd out(n + 1, Eigen::Index(spec.n[a]) * spec.n[b]);
  std::vector<double> line(std::size_t(n + 2 * g));
  for (int ib = 0; ib < spec.n[b]; ++ib) {
    for (int ia = 0; ia < spec.n[a]; ++ia) {
      std::array<int, 3> idx{0, 0, 0};
      idx[a] = ia;
      idx[b] = ib;
      for (int m = -g; m < n + g; ++m) {
        idx[dir] = m;
        line[std::size_t(m + g)] = field(var, idx[0], idx[1], idx[2]);
      }
      reconstruct_line(line.data() + g, n, side, params, out.col(Eigen::Index(ib) * spec.n[a] + ia).data());
    }
  }
  return out;
}

}  // namespace hitdns
