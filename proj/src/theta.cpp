#include "chtheta/theta.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "chtheta/errors.hpp"

namespace chtheta {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_genus(const CVector& z, const Characteristic& ch, int g) {
  if (z.size() != g || ch.genus() != g) {
    throw Error(ErrorKind::InvalidArgument, "theta argument size does not match the genus");
  }
}

}  // namespace

Characteristic Characteristic::zero(int g) {
  return {Eigen::VectorXd::Zero(g), Eigen::VectorXd::Zero(g)};
}

Characteristic Characteristic::from_bits(const std::vector<int>& top,
                                         const std::vector<int>& bottom) {
  if (top.size() != bottom.size()) {
    throw Error(ErrorKind::InvalidArgument, "characteristic rows differ in length");
  }
  Characteristic c = zero(static_cast<int>(top.size()));
  for (std::size_t i = 0; i < top.size(); ++i) {
    if ((top[i] != 0 && top[i] != 1) || (bottom[i] != 0 && bottom[i] != 1)) {
      throw Error(ErrorKind::InvalidArgument, "characteristic bits must be 0 or 1");
    }
    c.d1(i) = 0.5 * top[i];
    c.d2(i) = 0.5 * bottom[i];
  }
  return c;
}

bool Characteristic::is_odd() const {
  const long v = std::lround(4.0 * d1.dot(d2));
  return v % 2 != 0;
}

std::vector<Characteristic> all_characteristics(int g) {
  std::vector<Characteristic> out;
  const long count = 1L << (2 * g);
  out.reserve(count);
  for (long code = 0; code < count; ++code) {
    Characteristic c = Characteristic::zero(g);
    for (int i = 0; i < g; ++i) {
      c.d1(i) = 0.5 * ((code >> i) & 1);
      c.d2(i) = 0.5 * ((code >> (g + i)) & 1);
    }
    out.push_back(std::move(c));
  }
  return out;
}

ThetaSeries::ThetaSeries(const CMatrix& riemann, double eps) : b_(riemann), eps_(eps) {
  if (riemann.rows() != riemann.cols() || riemann.rows() < 1) {
    throw Error(ErrorKind::InvalidArgument, "Riemann matrix must be square");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "truncation eps must lie in (0, 1)");
  }
  const Eigen::MatrixXd q = -0.5 * (riemann.real() + riemann.real().transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotNegativeDefinite, "Re B is not negative definite");
  }
  u_ = llt.matrixU();
  re_inv_ = (-q).inverse();
  const int g = genus();
  r2_ = 2.0 * (std::log(1.0 / eps) + g + 4.0);
}

Eigen::VectorXi ThetaSeries::box_radius() const {
  // half width along axis i is R sqrt((Q^-1)_ii)
  const Eigen::MatrixXd qinv = -re_inv_;
  Eigen::VectorXi out(genus());
  for (int i = 0; i < genus(); ++i) {
    out(i) = static_cast<int>(std::ceil(std::sqrt(r2_ * qinv(i, i))));
  }
  return out;
}

ThetaJet ThetaSeries::jet(const CVector& z, const Characteristic& ch,
                          std::span<const CVector> dirs, int order, bool sizes) const {
  const int g = genus();
  check_genus(z, ch, g);
  const int nd = order > 0 ? static_cast<int>(dirs.size()) : 0;

  const CVector w = z + cplx(0.0, kTwoPi) * ch.d2.cast<cplx>();
  const Eigen::VectorXd center = -re_inv_ * w.real();
  // Nearest-plane lattice point; its distance d0 fixes the size of the
  // dominant term when no lattice point is near the center.
  double d0 = 0.0;
  {
    std::vector<double> xb(g);
    for (int i = g - 1; i >= 0; --i) {
      double tail = 0.0;
      for (int j = i + 1; j < g; ++j) tail += u_(i, j) * xb[j];
      const double shift = ch.d1(i) - center(i);
      xb[i] = std::round(-tail / u_(i, i) - shift) + shift;
      const double t = u_(i, i) * xb[i] + tail;
      d0 += t * t;
    }
  }
  const double log_scale = 0.5 * center.dot(w.real()) - 0.5 * d0;

  ThetaJet out;
  out.log_scale = log_scale;
  out.value = 0.0;
  out.d1.assign(nd, 0.0);
  out.d2 = CMatrix::Zero(nd, nd);
  if (sizes) {
    out.d1_size.assign(nd, 0.0);
    out.d2_size = Eigen::MatrixXd::Zero(nd, nd);
  }

  // Exponent and slopes are accumulated level by level from the last axis:
  // E = sum_i n_i (B_ii n_i / 2 + w_i + sum_{j>i} B_ij n_j).
  std::vector<double> n(g), x(g), rem(g + 1);
  std::vector<cplx> acc(g + 1), slope((g + 1) * std::max(nd, 1));
  rem[g] = r2_ + d0;
  acc[g] = -log_scale;
  for (int k = 0; k < nd; ++k) slope[g * nd + k] = 0.0;

  auto recurse = [&](auto&& self, int i) -> void {
    double tail = 0.0;
    cplx coupling = w(i);
    for (int j = i + 1; j < g; ++j) {
      tail += u_(i, j) * x[j];
      coupling += b_(i, j) * n[j];
    }
    const double c = -tail / u_(i, i);
    const double half = std::sqrt(std::max(rem[i + 1], 0.0)) / u_(i, i);
    const double shift = ch.d1(i) - center(i);  // x_i = m_i + shift
    const long lo = static_cast<long>(std::ceil(c - half - shift));
    const long hi = static_cast<long>(std::floor(c + half - shift));
    const cplx bii = 0.5 * b_(i, i);
    for (long m = lo; m <= hi; ++m) {
      x[i] = m + shift;
      n[i] = m + ch.d1(i);
      const double t = u_(i, i) * x[i] + tail;
      rem[i] = rem[i + 1] - t * t;
      if (rem[i] < 0.0) continue;
      acc[i] = acc[i + 1] + n[i] * (bii * n[i] + coupling);
      for (int k = 0; k < nd; ++k) slope[i * nd + k] = slope[(i + 1) * nd + k] + n[i] * dirs[k](i);
      if (i > 0) {
        self(self, i - 1);
        continue;
      }
      const cplx e = std::exp(acc[0]);
      out.value += e;
      ++out.terms;
      for (int k = 0; k < nd; ++k) {
        const cplx se = slope[k] * e;
        out.d1[k] += se;
        if (order > 1) {
          for (int l = k; l < nd; ++l) out.d2(k, l) += slope[l] * se;
        }
      }
      if (sizes) {
        const double ae = std::exp(acc[0].real());
        out.value_size += ae;
        for (int k = 0; k < nd; ++k) {
          const double sk = std::abs(slope[k]) * ae;
          out.d1_size[k] += sk;
          if (order > 1) {
            for (int l = k; l < nd; ++l) out.d2_size(k, l) += std::abs(slope[l]) * sk;
          }
        }
      }
    }
  };
  recurse(recurse, g - 1);

  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < i; ++j) {
      out.d2(i, j) = out.d2(j, i);
      if (sizes && order > 1) out.d2_size(i, j) = out.d2_size(j, i);
    }
  }
  return out;
}

ScaledComplex ThetaSeries::value(const CVector& z, const Characteristic& ch) const {
  const ThetaJet j = jet(z, ch, {}, 0);
  return {j.value, j.log_scale};
}

ScaledComplex ThetaSeries::value(const CVector& z) const {
  return value(z, Characteristic::zero(genus()));
}

cplx theta(const ThetaArg& arg, const CMatrix& riemann, TruncationSpec& trunc) {
  ThetaSeries series(riemann, trunc.eps);
  trunc.radius = series.box_radius();
  return series.value(arg.z, arg.ch).value();
}

cplx theta_deriv(const ThetaArg& arg, const CMatrix& riemann, TruncationSpec& trunc,
                 std::span<const CVector> dirs) {
  if (dirs.empty() || dirs.size() > 2) {
    throw Error(ErrorKind::InvalidArgument, "theta_deriv takes one or two directions");
  }
  ThetaSeries series(riemann, trunc.eps);
  trunc.radius = series.box_radius();
  const ThetaJet j = series.jet(arg.z, arg.ch, dirs, static_cast<int>(dirs.size()));
  const cplx raw = dirs.size() == 1 ? j.d1[0] : j.d2(0, 1);
  return raw * std::exp(j.log_scale);
}

double quasi_periodicity_residual(const ThetaArg& arg, const CMatrix& riemann,
                                  TruncationSpec& trunc, const Eigen::VectorXi& n,
                                  const Eigen::VectorXi& m) {
  if (n.isZero() && m.isZero()) return 0.0;
  ThetaSeries series(riemann, trunc.eps);
  trunc.radius = series.box_radius();
  const CVector mc = m.cast<double>().cast<cplx>();
  const CVector shifted = arg.z + cplx(0.0, kTwoPi) * n.cast<double>().cast<cplx>() + riemann * mc;
  const ScaledComplex lhs = series.value(shifted, arg.ch);
  const ScaledComplex rhs = series.value(arg.z, arg.ch);
  const cplx factor = -0.5 * mc.dot(riemann * mc) - mc.dot(arg.z) +
                      cplx(0.0, kTwoPi) * (arg.ch.d1.dot(n.cast<double>()) -
                                           arg.ch.d2.dot(m.cast<double>()));
  // |L - R| / |R| evaluated in log form
  const cplx log_ratio = std::log(lhs.mantissa) + lhs.log_scale -
                         (std::log(rhs.mantissa) + rhs.log_scale + factor);
  return std::abs(std::exp(log_ratio) - 1.0);
}

CVector char_to_shift(const Characteristic& ch, const CMatrix& riemann) {
  return cplx(0.0, kTwoPi) * ch.d2.cast<cplx>() + riemann * ch.d1.cast<cplx>();
}

}  // namespace chtheta
