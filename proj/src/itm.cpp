#include "botrf/itm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "botrf/errors.hpp"

namespace botrf::itm {
namespace {

constexpr double kThird = 1.0 / 3.0;

// FORTRAN DIM: x - y when positive, else 0.
double dim(double x, double y) { return x > y ? x - y : 0.0; }


// Profile in the model's layout: np intervals of xi meters, z[0..np].
struct ProfileView {
  double intervals;
  double step;
  std::span<const double> z;

  int np() const { return static_cast<int>(intervals); }
};

double knife_edge_attenuation(double v2) {
  if (v2 < 5.76) return 6.02 + 9.11 * std::sqrt(v2) - 1.27 * v2;
  return 12.953 + 4.343 * std::log(v2);
}

// Height-gain over a smooth spherical earth.
double height_gain(double x, double pk) {
  double fhtv;
  if (x < 200.0) {
    const double w = -std::log(pk);
    if (pk < 1e-5 || x * std::pow(w, 3.0) > 5495.0) {
      fhtv = -117.0;
      if (x > 1.0) fhtv = 17.372 * std::log(x) + fhtv;
    } else {
      fhtv = 2.5e-5 * x * x / pk - 8.686 * w - 15.0;
    }
  } else {
    fhtv = 0.05751 * x - 4.343 * std::log(x);
    if (x < 2000.0) {
      const double w = 0.0134 * x * std::exp(-0.005 * x);
      fhtv = (1.0 - w) * fhtv + w * (17.372 * std::log(x) - 117.0);
    }
  }
  return fhtv;
}

// Frequency-gain function H0 for troposcatter.
double scatter_frequency_gain(double r, double et) {
  constexpr double a[5] = {25.0, 80.0, 177.0, 395.0, 705.0};
  constexpr double b[5] = {24.0, 45.0, 68.0, 80.0, 105.0};
  int it = static_cast<int>(et);
  double q;
  if (it <= 0) {
    it = 1;
    q = 0.0;
  } else if (it >= 5) {
    it = 5;
    q = 0.0;
  } else {
    q = et - it;
  }
  const double x = std::pow(1.0 / r, 2.0);
  double h0 = 4.343 * std::log((a[it - 1] * x + b[it - 1]) * x + 1.0);
  if (q != 0.0) h0 = (1.0 - q) * h0 + q * 4.343 * std::log((a[it] * x + b[it]) * x + 1.0);
  return h0;
}

// Attenuation function F(theta * d) for troposcatter.
double scatter_attenuation(double td) {
  constexpr double a[3] = {133.4, 104.6, 71.8};
  constexpr double b[3] = {0.332e-3, 0.212e-3, 0.157e-3};
  constexpr double c[3] = {-4.343, -1.086, 2.171};
  const int i = td <= 10e3 ? 0 : (td <= 70e3 ? 1 : 2);
  return a[i] + b[i] * td + c[i] * std::log(td);
}

double variability_curve(double c1, double c2, double x1, double x2, double x3, double de) {
  return (c1 + c2 / (1.0 + std::pow((de - x2) / x3, 2.0))) * std::pow(de / x1, 2.0) / (1.0 + std::pow(de / x1, 2.0));
}

// Least-squares line through z over [x1, x2] (meters); returns the fitted
// heights at the two ends of the whole profile.
void fit_line(const ProfileView& z, double x1, double x2, double& z0, double& zn) {
  const double xn = z.intervals;
  double xa = static_cast<int>(dim(x1 / z.step, 0.0));
  double xb = xn - static_cast<int>(dim(xn, x2 / z.step));
  if (xb <= xa) {
    xa = dim(xa, 1.0);
    xb = xn - dim(xn, xb + 1.0);
  }
  int ja = static_cast<int>(xa);
  const int jb = static_cast<int>(xb);
  const int n = jb - ja;
  xa = xb - xa;
  double x = -0.5 * xa;
  xb += x;
  double a = 0.5 * (z.z[ja] + z.z[jb]);
  double b = 0.5 * (z.z[ja] - z.z[jb]) * x;
  for (int i = 2; i <= n; ++i) {
    ++ja;
    x += 1.0;
    a += z.z[ja];
    b += z.z[ja] * x;
  }
  a /= xa;
  b = b * 12.0 / ((xa * xa + 2.0) * xa);
  z0 = a - b * xb;
  zn = a + b * (xn - xb);
}

// k-th largest value (0-based) of a[0..nn].
double kth_largest(std::span<double> a, int nn, int ir) {
  const int k = std::min(std::max(0, ir), nn);
  auto first = a.begin();
  std::nth_element(first, first + k, first + nn + 1, std::greater<>());
  return a[k];
}

// Interdecile range of terrain heights about a linear fit over [x1, x2].
double terrain_irregularity(const ProfileView& pfl, double x1, double x2) {
  const int np = pfl.np();
  double xa = x1 / pfl.step;
  double xb = x2 / pfl.step;
  if (xb - xa < 2.0) return 0.0;
  int ka = static_cast<int>(0.1 * (xb - xa + 8.0));
  ka = std::min(std::max(4, ka), 25);
  const int n = 10 * ka - 5;
  const int kb = n - ka + 1;
  const double sn = n - 1;
  std::vector<double> s(static_cast<std::size_t>(n));
  xb = (xb - xa) / sn;
  int k = static_cast<int>(xa + 1.0);
  xa -= static_cast<double>(k);
  for (int j = 0; j < n; ++j) {
    while (xa > 0.0 && k < np) {
      xa -= 1.0;
      ++k;
    }
    s[j] = pfl.z[k] + (pfl.z[k] - pfl.z[k - 1]) * xa;
    xa = xa + xb;
  }
  fit_line({sn, 1.0, s}, 0.0, sn, xa, xb);
  xb = (xb - xa) / sn;
  for (int j = 0; j < n; ++j) {
    s[j] -= xa;
    xa = xa + xb;
  }
  double spread = kth_largest(s, n - 1, ka - 1) - kth_largest(s, n - 1, kb - 1);
  spread /= 1.0 - 0.8 * std::exp(-(x2 - x1) / 50.0e3);
  return spread;
}

class Model {
 public:
  Result run(const ProfileView& pfl, double tx_h, double rx_h, double fmhz, const Params& params);

 private:
  // Terrain, frequency and derived geometry (the reference's prop_type).
  double aref_ = 0, dist_ = 0, hg_[2] = {}, wn_ = 0, dh_ = 0, ens_ = 0, gme_ = 0;
  std::complex<double> zgnd_;
  double he_[2] = {}, dl_[2] = {}, the_[2] = {};
  int kwx_ = 0, mdp_ = 0;
  // Variability controls (propv_type).
  double sgc_ = 0;
  int lvar_ = 0, mdvar_ = 0, klim_ = 0;
  // Coefficients (propa_type).
  double dlsa_ = 0, dx_ = 0, ael_ = 0, ak1_ = 0, ak2_ = 0, aed_ = 0, emd_ = 0, aes_ = 0, ems_ = 0;
  double dls_[2] = {}, dla_ = 0, tha_ = 0;
  // Per-routine state the reference kept in function statics.
  double wd1_ = 0, xd1_ = 0, afo_ = 0, qk_ = 0, aht_ = 0, xht_ = 0;
  double ad_ = 0, rr_ = 0, etq_ = 0, h0s_ = 0;
  double wls_ = 0;
  bool wlos_ = false, wscat_ = false;
  double dmin_ = 0, xae_ = 0;
  int kdv_ = 0;
  bool ws_ = false, w1_ = false;
  double dexa_ = 0, de_ = 0, vmd_ = 0, vs0_ = 0, sgl_ = 0, sgtm_ = 0, sgtp_ = 0, sgtd_ = 0, tgtd_ = 0, gm_ = 0,
         gp_ = 0;
  double cv1_ = 0, cv2_ = 0, yv1_ = 0, yv2_ = 0, yv3_ = 0, csm1_ = 0, csm2_ = 0, ysm1_ = 0, ysm2_ = 0, ysm3_ = 0,
         csp1_ = 0, csp2_ = 0, ysp1_ = 0, ysp2_ = 0, ysp3_ = 0, csd1_ = 0, zd_ = 0, cfm1_ = 0, cfm2_ = 0, cfm3_ = 0,
         cfp1_ = 0, cfp2_ = 0, cfp3_ = 0;

  void set_environment(double fmhz, double zsys, double en0, int ipol, double eps, double sgm);
  void find_horizons(const ProfileView& pfl);
  void prepare_profile(const ProfileView& pfl, int klimx, int mdvarx);
  void propagate(double d);
  double diffraction(double d);
  double scatter(double d);
  double line_of_sight(double d);
  double variability(double zzt, double zzl, double zzc);
};

void Model::set_environment(double fmhz, double zsys, double en0, int ipol, double eps, double sgm) {
  constexpr double gma = 157e-9;
  wn_ = fmhz / 47.7;
  ens_ = en0;
  if (zsys != 0.0) ens_ *= std::exp(-zsys / 9460.0);
  gme_ = gma * (1.0 - 0.04665 * std::exp(ens_ / 179.3));
  const std::complex<double> zq(eps, 376.62 * sgm / wn_);
  zgnd_ = std::sqrt(zq - 1.0);
  if (ipol != 0) zgnd_ = zgnd_ / zq;
}

void Model::find_horizons(const ProfileView& pfl) {
  const int np = pfl.np();
  const double xi = pfl.step;
  const double za = pfl.z[0] + hg_[0];
  const double zb = pfl.z[np] + hg_[1];
  const double qc = 0.5 * gme_;
  double q = qc * dist_;
  the_[1] = (zb - za) / dist_;
  the_[0] = the_[1] - q;
  the_[1] = -the_[1] - q;
  dl_[0] = dist_;
  dl_[1] = dist_;
  if (np >= 2) {
    double sa = 0.0;
    double sb = dist_;
    bool wq = true;
    for (int i = 1; i < np; ++i) {
      sa += xi;
      sb -= xi;
      q = pfl.z[i] - (qc * sa + the_[0]) * sa - za;
      if (q > 0.0) {
        the_[0] += q / sa;
        dl_[0] = sa;
        wq = false;
      }
      if (!wq) {
        q = pfl.z[i] - (qc * sb + the_[1]) * sb - zb;
        if (q > 0.0) {
          the_[1] += q / sb;
          dl_[1] = sb;
        }
      }
    }
  }
}

double Model::diffraction(double d) {
  if (d == 0) {
    double q = hg_[0] * hg_[1];
    qk_ = he_[0] * he_[1] - q;
    if (mdp_ < 0.0) q += 10.0;
    wd1_ = std::sqrt(1.0 + qk_ / q);
    xd1_ = dla_ + tha_ / gme_;
    q = (1.0 - 0.8 * std::exp(-dlsa_ / 50e3)) * dh_;
    q *= 0.78 * std::exp(-std::pow(q / 16.0, 0.25));
    afo_ = std::min(15.0, 2.171 * std::log(1.0 + 4.77e-4 * hg_[0] * hg_[1] * wn_ * q));
    qk_ = 1.0 / std::abs(zgnd_);
    aht_ = 20.0;
    xht_ = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double a = 0.5 * std::pow(dl_[j], 2.0) / he_[j];
      const double wa = std::pow(a * wn_, kThird);
      const double pk = qk_ / wa;
      q = (1.607 - pk) * 151.0 * wa * dl_[j] / a;
      xht_ += q;
      aht_ += height_gain(q, pk);
    }
    return 0.0;
  }
  const double th = tha_ + d * gme_;
  const double ds = d - dla_;
  double q = 0.0795775 * wn_ * ds * std::pow(th, 2.0);
  const double knife =
      knife_edge_attenuation(q * dl_[0] / (ds + dl_[0])) + knife_edge_attenuation(q * dl_[1] / (ds + dl_[1]));
  const double a = ds / th;
  const double wa = std::pow(a * wn_, kThird);
  const double pk = qk_ / wa;
  q = (1.607 - pk) * 151.0 * wa * th + xht_;
  const double ar = 0.05751 * q - 4.343 * std::log(q) - aht_;
  q = (wd1_ + xd1_ / d) * std::min(((1.0 - 0.8 * std::exp(-d / 50e3)) * dh_ * wn_), 6283.2);
  const double wd = 25.1 / (25.1 + std::sqrt(q));
  return ar * wd + (1.0 - wd) * knife + afo_;
}

double Model::scatter(double d) {
  if (d == 0.0) {
    ad_ = dl_[0] - dl_[1];
    rr_ = he_[1] / he_[0];
    if (ad_ < 0.0) {
      ad_ = -ad_;
      rr_ = 1.0 / rr_;
    }
    etq_ = (5.67e-6 * ens_ - 2.32e-3) * ens_ + 0.031;
    h0s_ = -15.0;
    return 0.0;
  }
  double h0;
  if (h0s_ > 15.0) {
    h0 = h0s_;
  } else {
    const double th = the_[0] + the_[1] + d * gme_;
    double r2 = 2.0 * wn_ * th;
    const double r1 = r2 * he_[0];
    r2 *= he_[1];
    if (r1 < 0.2 && r2 < 0.2) return 1001.0;
    double ss = (d - ad_) / (d + ad_);
    double q = rr_ / ss;
    ss = std::max(0.1, ss);
    q = std::min(std::max(0.1, q), 10.0);
    const double z0 = (d - ad_) * (d + ad_) * th * 0.25 / d;
    const double et = (etq_ * std::exp(-std::pow(std::min(1.7, z0 / 8.0e3), 6.0)) + 1.0) * z0 / 1.7556e3;
    const double ett = std::max(et, 1.0);
    h0 = (scatter_frequency_gain(r1, ett) + scatter_frequency_gain(r2, ett)) * 0.5;
    h0 += std::min(h0, (1.38 - std::log(ett)) * std::log(ss) * std::log(q) * 0.49);
    h0 = dim(h0, 0.0);
    if (et < 1.0) {
      h0 = et * h0 + (1.0 - et) * 4.343 *
                         std::log(std::pow((1.0 + 1.4142 / r1) * (1.0 + 1.4142 / r2), 2.0) * (r1 + r2) /
                                  (r1 + r2 + 2.8284));
    }
    if (h0 > 15.0 && h0s_ >= 0.0) h0 = h0s_;
  }
  h0s_ = h0;
  const double th = tha_ + d * gme_;
  return scatter_attenuation(th * d) + 4.343 * std::log(47.7 * wn_ * std::pow(th, 4.0)) -
         0.1 * (ens_ - 301.0) * std::exp(-th * d / 40e3) + h0;
}

double Model::line_of_sight(double d) {
  if (d == 0.0) {
    wls_ = 0.021 / (0.021 + wn_ * dh_ / std::max(10e3, dlsa_));
    return 0.0;
  }
  double q = (1.0 - 0.8 * std::exp(-d / 50e3)) * dh_;
  const double s = 0.78 * q * std::exp(-std::pow(q / 16.0, 0.25));
  q = he_[0] + he_[1];
  const double sps = q / std::sqrt(d * d + q * q);
  std::complex<double> r = (sps - zgnd_) / (sps + zgnd_) * std::exp(-std::min(10.0, wn_ * s * sps));
  q = std::norm(r);
  if (q < 0.25 || q < sps) r = r * std::sqrt(sps / q);
  const double alosv = emd_ * d + aed_;
  q = wn_ * he_[0] * he_[1] * 2.0 / d;
  if (q > 1.57) q = 3.14 - 2.4649 / q;
  return (-4.343 * std::log(std::norm(std::complex<double>(std::cos(q), -std::sin(q)) + r)) - alosv) * wls_ + alosv;
}

void Model::propagate(double d) {
  if (mdp_ != 0) {
    for (int j = 0; j < 2; ++j) dls_[j] = std::sqrt(2.0 * he_[j] / gme_);
    dlsa_ = dls_[0] + dls_[1];
    dla_ = dl_[0] + dl_[1];
    tha_ = std::max(the_[0] + the_[1], -dla_ * gme_);
    wlos_ = false;
    wscat_ = false;
    if (wn_ < 0.838 || wn_ > 210.0) kwx_ = std::max(kwx_, 1);
    for (int j = 0; j < 2; ++j) {
      if (hg_[j] < 1.0 || hg_[j] > 1000.0) kwx_ = std::max(kwx_, 1);
    }
    for (int j = 0; j < 2; ++j) {
      if (std::abs(the_[j]) > 200e-3 || dl_[j] < 0.1 * dls_[j] || dl_[j] > 3.0 * dls_[j]) kwx_ = std::max(kwx_, 3);
    }
    if (ens_ < 250.0 || ens_ > 400.0 || gme_ < 75e-9 || gme_ > 250e-9 || zgnd_.real() <= std::abs(zgnd_.imag()) ||
        wn_ < 0.419 || wn_ > 420.0) {
      kwx_ = 4;
    }
    for (int j = 0; j < 2; ++j) {
      if (hg_[j] < 0.5 || hg_[j] > 3000.0) kwx_ = 4;
    }
    dmin_ = std::abs(he_[0] - he_[1]) / 200e-3;
    diffraction(0.0);
    xae_ = std::pow(wn_ * std::pow(gme_, 2), -kThird);
    const double d3 = std::max(dlsa_, 1.3787 * xae_ + dla_);
    const double d4 = d3 + 2.7574 * xae_;
    const double a3 = diffraction(d3);
    const double a4 = diffraction(d4);
    emd_ = (a4 - a3) / (d4 - d3);
    aed_ = a3 - emd_ * d3;
  }
  if (mdp_ >= 0) {
    mdp_ = 0;
    dist_ = d;
  }
  if (dist_ > 0.0) {
    if (dist_ > 1000e3) kwx_ = std::max(kwx_, 1);
    if (dist_ < dmin_) kwx_ = std::max(kwx_, 3);
    if (dist_ < 1e3 || dist_ > 2000e3) kwx_ = 4;
  }
  if (dist_ < dlsa_) {
    if (!wlos_) {
      line_of_sight(0.0);
      const double d2 = dlsa_;
      const double a2 = aed_ + d2 * emd_;
      double d0 = 1.908 * wn_ * he_[0] * he_[1];
      double d1;
      if (aed_ >= 0.0) {
        d0 = std::min(d0, 0.5 * dla_);
        d1 = d0 + 0.25 * (dla_ - d0);
      } else {
        d1 = std::max(-aed_ / emd_, 0.25 * dla_);
      }
      const double a1 = line_of_sight(d1);
      bool wq = false;
      if (d0 < d1) {
        const double a0 = line_of_sight(d0);
        const double q = std::log(d2 / d0);
        ak2_ = std::max(0.0, ((d2 - d0) * (a1 - a0) - (d1 - d0) * (a2 - a0)) / ((d2 - d0) * std::log(d1 / d0) - (d1 - d0) * q));
        wq = aed_ >= 0.0 || ak2_ > 0.0;
        if (wq) {
          ak1_ = (a2 - a0 - ak2_ * q) / (d2 - d0);
          if (ak1_ < 0.0) {
            ak1_ = 0.0;
            ak2_ = dim(a2, a0) / q;
            if (ak2_ == 0.0) ak1_ = emd_;
          }
        }
      }
      if (!wq) {
        ak1_ = dim(a2, a1) / (d2 - d1);
        ak2_ = 0.0;
        if (ak1_ == 0.0) ak1_ = emd_;
      }
      ael_ = a2 - ak1_ * d2 - ak2_ * std::log(d2);
      wlos_ = true;
    }
    if (dist_ > 0.0) aref_ = ael_ + ak1_ * dist_ + ak2_ * std::log(dist_);
  }
  if (dist_ <= 0.0 || dist_ >= dlsa_) {
    if (!wscat_) {
      scatter(0.0);
      const double d5 = dla_ + 200e3;
      const double d6 = d5 + 200e3;
      const double a6 = scatter(d6);
      const double a5 = scatter(d5);
      if (a5 < 1000.0) {
        ems_ = (a6 - a5) / 200e3;
        dx_ = std::max(dlsa_, std::max(dla_ + 0.3 * xae_ * std::log(47.7 * wn_), (a5 - aed_ - ems_ * d5) / (emd_ - ems_)));
        aes_ = (emd_ - ems_) * dx_ + aed_;
      } else {
        ems_ = emd_;
        aes_ = aed_;
        dx_ = 10.e6;
      }
      wscat_ = true;
    }
    if (dist_ > dx_) {
      aref_ = aes_ + ems_ * dist_;
    } else {
      aref_ = aed_ + emd_ * dist_;
    }
  }
  aref_ = std::max(aref_, 0.0);
}

double Model::variability(double zzt, double zzl, double zzc) {
  constexpr double bv1[7] = {-9.67, -0.62, 1.26, -9.21, -0.62, -0.39, 3.15};
  constexpr double bv2[7] = {12.7, 9.19, 15.5, 9.05, 9.19, 2.86, 857.9};
  constexpr double xv1[7] = {144.9e3, 228.9e3, 262.6e3, 84.1e3, 228.9e3, 141.7e3, 2222.e3};
  constexpr double xv2[7] = {190.3e3, 205.2e3, 185.2e3, 101.1e3, 205.2e3, 315.9e3, 164.8e3};
  constexpr double xv3[7] = {133.8e3, 143.6e3, 99.8e3, 98.6e3, 143.6e3, 167.4e3, 116.3e3};
  constexpr double bsm1[7] = {2.13, 2.66, 6.11, 1.98, 2.68, 6.86, 8.51};
  constexpr double bsm2[7] = {159.5, 7.67, 6.65, 13.11, 7.16, 10.38, 169.8};
  constexpr double xsm1[7] = {762.2e3, 100.4e3, 138.2e3, 139.1e3, 93.7e3, 187.8e3, 609.8e3};
  constexpr double xsm2[7] = {123.6e3, 172.5e3, 242.2e3, 132.7e3, 186.8e3, 169.6e3, 119.9e3};
  constexpr double xsm3[7] = {94.5e3, 136.4e3, 178.6e3, 193.5e3, 133.5e3, 108.9e3, 106.6e3};
  constexpr double bsp1[7] = {2.11, 6.87, 10.08, 3.68, 4.75, 8.58, 8.43};
  constexpr double bsp2[7] = {102.3, 15.53, 9.60, 159.3, 8.12, 13.97, 8.19};
  constexpr double xsp1[7] = {636.9e3, 138.7e3, 165.3e3, 464.4e3, 93.2e3, 216.0e3, 136.2e3};
  constexpr double xsp2[7] = {134.8e3, 143.7e3, 225.7e3, 93.1e3, 135.9e3, 152.0e3, 188.5e3};
  constexpr double xsp3[7] = {95.6e3, 98.6e3, 129.7e3, 94.2e3, 113.4e3, 122.7e3, 122.9e3};
  constexpr double bsd1[7] = {1.224, 0.801, 1.380, 1.000, 1.224, 1.518, 1.518};
  constexpr double bzd1[7] = {1.282, 2.161, 1.282, 20., 1.282, 1.282, 1.282};
  constexpr double bfm1[7] = {1.0, 1.0, 1.0, 1.0, 0.92, 1.0, 1.0};
  constexpr double bfm2[7] = {0.0, 0.0, 0.0, 0.0, 0.25, 0.0, 0.0};
  constexpr double bfm3[7] = {0.0, 0.0, 0.0, 0.0, 1.77, 0.0, 0.0};
  constexpr double bfp1[7] = {1.0, 0.93, 1.0, 0.93, 0.93, 1.0, 1.0};
  constexpr double bfp2[7] = {0.0, 0.31, 0.0, 0.19, 0.31, 0.0, 0.0};
  constexpr double bfp3[7] = {0.0, 2.00, 0.0, 1.79, 2.00, 0.0, 0.0};
  constexpr double rt = 7.8;
  constexpr double rl = 24.0;

  // The reference recomputes stage by stage, falling through from the
  // climate tables (lvar 5) down to the effective distance (lvar 1).
  if (lvar_ > 0) {
    if (lvar_ >= 5) {
      int climate = klim_ - 1;
      if (klim_ <= 0 || klim_ > 7) {
        klim_ = 5;
        climate = 4;
        kwx_ = std::max(kwx_, 2);
      }
      cv1_ = bv1[climate];
      cv2_ = bv2[climate];
      yv1_ = xv1[climate];
      yv2_ = xv2[climate];
      yv3_ = xv3[climate];
      csm1_ = bsm1[climate];
      csm2_ = bsm2[climate];
      ysm1_ = xsm1[climate];
      ysm2_ = xsm2[climate];
      ysm3_ = xsm3[climate];
      csp1_ = bsp1[climate];
      csp2_ = bsp2[climate];
      ysp1_ = xsp1[climate];
      ysp2_ = xsp2[climate];
      ysp3_ = xsp3[climate];
      csd1_ = bsd1[climate];
      zd_ = bzd1[climate];
      cfm1_ = bfm1[climate];
      cfm2_ = bfm2[climate];
      cfm3_ = bfm3[climate];
      cfp1_ = bfp1[climate];
      cfp2_ = bfp2[climate];
      cfp3_ = bfp3[climate];
    }
    if (lvar_ >= 4) {
      kdv_ = mdvar_;
      ws_ = kdv_ >= 20;
      if (ws_) kdv_ -= 20;
      w1_ = kdv_ >= 10;
      if (w1_) kdv_ -= 10;
      if (kdv_ < 0 || kdv_ > 3) {
        kdv_ = 0;
        kwx_ = std::max(kwx_, 2);
      }
    }
    if (lvar_ >= 3) {
      const double q = std::log(0.133 * wn_);
      gm_ = cfm1_ + cfm2_ / (std::pow(cfm3_ * q, 2.0) + 1.0);
      gp_ = cfp1_ + cfp2_ / (std::pow(cfp3_ * q, 2.0) + 1.0);
    }
    if (lvar_ >= 2) {
      dexa_ = std::sqrt(18e6 * he_[0]) + std::sqrt(18e6 * he_[1]) + std::pow((575.7e12 / wn_), kThird);
    }
    de_ = dist_ < dexa_ ? 130e3 * dist_ / dexa_ : 130e3 + dist_ - dexa_;

    vmd_ = variability_curve(cv1_, cv2_, yv1_, yv2_, yv3_, de_);
    sgtm_ = variability_curve(csm1_, csm2_, ysm1_, ysm2_, ysm3_, de_) * gm_;
    sgtp_ = variability_curve(csp1_, csp2_, ysp1_, ysp2_, ysp3_, de_) * gp_;
    sgtd_ = sgtp_ * csd1_;
    tgtd_ = (sgtp_ - sgtd_) * zd_;
    if (w1_) {
      sgl_ = 0.0;
    } else {
      const double q = (1.0 - 0.8 * std::exp(-dist_ / 50e3)) * dh_ * wn_;
      sgl_ = 10.0 * q / (q + 13.0);
    }
    vs0_ = ws_ ? 0.0 : std::pow(5.0 + 3.0 * std::exp(-de_ / 100e3), 2.0);
    lvar_ = 0;
  }

  double zt = zzt;
  double zl = zzl;
  const double zc = zzc;
  switch (kdv_) {
    case 0:
      zt = zc;
      zl = zc;
      break;
    case 1:
      zl = zc;
      break;
    case 2:
      zl = zt;
      break;
    default:
      break;
  }
  if (std::abs(zt) > 3.1 || std::abs(zl) > 3.1 || std::abs(zc) > 3.1) kwx_ = std::max(kwx_, 1);

  double sgt;
  if (zt < 0.0) {
    sgt = sgtm_;
  } else if (zt <= zd_) {
    sgt = sgtp_;
  } else {
    sgt = sgtd_ + tgtd_ / zt;
  }
  const double vs = vs0_ + std::pow(sgt * zt, 2.0) / (rt + zc * zc) + std::pow(sgl_ * zl, 2.0) / (rl + zc * zc);
  double yr;
  if (kdv_ == 0) {
    yr = 0.0;
    sgc_ = std::sqrt(sgt * sgt + sgl_ * sgl_ + vs);
  } else if (kdv_ == 1) {
    yr = sgt * zt;
    sgc_ = std::sqrt(sgl_ * sgl_ + vs);
  } else if (kdv_ == 2) {
    yr = std::sqrt(sgt * sgt + sgl_ * sgl_) * zt;
    sgc_ = std::sqrt(vs);
  } else {
    yr = sgt * zt + sgl_ * zl;
    sgc_ = std::sqrt(vs);
  }
  double avarv = aref_ - vmd_ - yr - sgc_ * zc;
  if (avarv < 0.0) avarv = avarv * (29.0 - avarv) / (29.0 - 10.0 * avarv);
  return avarv;
}

void Model::prepare_profile(const ProfileView& pfl, int klimx, int mdvarx) {
  const int np = pfl.np();
  dist_ = pfl.intervals * pfl.step;
  find_horizons(pfl);
  double xl[2];
  for (int j = 0; j < 2; ++j) xl[j] = std::min(15.0 * hg_[j], 0.1 * dl_[j]);
  xl[1] = dist_ - xl[1];
  dh_ = terrain_irregularity(pfl, xl[0], xl[1]);
  double za;
  double zb;
  if (dl_[0] + dl_[1] > 1.5 * dist_) {
    fit_line(pfl, xl[0], xl[1], za, zb);
    he_[0] = hg_[0] + dim(pfl.z[0], za);
    he_[1] = hg_[1] + dim(pfl.z[np], zb);
    for (int j = 0; j < 2; ++j) {
      dl_[j] = std::sqrt(2.0 * he_[j] / gme_) * std::exp(-0.07 * std::sqrt(dh_ / std::max(he_[j], 5.0)));
    }
    double q = dl_[0] + dl_[1];
    if (q <= dist_) {
      q = std::pow(dist_ / q, 2.0);
      for (int j = 0; j < 2; ++j) {
        he_[j] *= q;
        dl_[j] = std::sqrt(2.0 * he_[j] / gme_) * std::exp(-0.07 * std::sqrt(dh_ / std::max(he_[j], 5.0)));
      }
    }
    for (int j = 0; j < 2; ++j) {
      q = std::sqrt(2.0 * he_[j] / gme_);
      the_[j] = (0.65 * dh_ * (q / dl_[j] - 1.0) - 2.0 * he_[j]) / q;
    }
  } else {
    double unused;
    fit_line(pfl, xl[0], 0.9 * dl_[0], za, unused);
    fit_line(pfl, dist_ - 0.9 * dl_[1], xl[1], unused, zb);
    he_[0] = hg_[0] + dim(pfl.z[0], za);
    he_[1] = hg_[1] + dim(pfl.z[np], zb);
  }
  mdp_ = -1;
  lvar_ = std::max(lvar_, 3);
  if (mdvarx >= 0) {
    mdvar_ = mdvarx;
    lvar_ = std::max(lvar_, 4);
  }
  if (klimx > 0) {
    klim_ = klimx;
    lvar_ = 5;
  }
  propagate(0.0);
}

Result Model::run(const ProfileView& pfl, double tx_h, double rx_h, double fmhz, const Params& params) {
  // Broadcast (mdvar 12): situation variability folded into time, with
  // location variability suppressed, as splat! runs the model.
  constexpr int kMdvar = 12;

  hg_[0] = tx_h;
  hg_[1] = rx_h;
  klim_ = params.climate;
  kwx_ = 0;
  lvar_ = 5;
  mdp_ = -1;
  const double zc = inverse_normal_tail(params.confidence);
  const double zr = inverse_normal_tail(params.reliability);

  // Mean elevation of the inner part of the profile, for the refractivity
  // height correction. Indices follow the reference's header-offset array.
  const long np = pfl.np();
  const long ja = static_cast<long>(3.0 + 0.1 * pfl.intervals);
  const long jb = np - ja + 6;
  double zsys = 0.0;
  for (long i = ja - 1; i < jb; ++i) zsys += pfl.z[static_cast<std::size_t>(i - 2)];
  zsys /= static_cast<double>(jb - ja + 1);
  double en0 = params.surface_refractivity;
  if (en0 <= 0) en0 = 310;

  mdvar_ = kMdvar;
  set_environment(fmhz, zsys, en0, static_cast<int>(params.polarization), params.rel_permittivity,
                  params.conductivity);
  prepare_profile(pfl, klim_, mdvar_);

  Result r;
  r.fspl_db = 32.45 + 20.0 * std::log10(fmhz) + 20.0 * std::log10(dist_ / 1000.0);

  // The reference truncates toward zero here, so a path within 1 m of the
  // combined horizon distance counts as single horizon.
  const int beyond = static_cast<int>(dist_ - dla_);
  if (beyond < 0) {
    r.horizon = HorizonCase::LineOfSight;
    r.mode_text = "Line-Of-Sight Mode";
  } else {
    r.horizon = beyond == 0 ? HorizonCase::SingleHorizon : HorizonCase::DoubleHorizon;
    r.mode_text = beyond == 0 ? "Single Horizon" : "Double Horizon";
    if (dist_ <= dlsa_ || dist_ <= dx_) {
      r.mode_text += ", Diffraction Dominant";
    } else {
      r.troposcatter_dominant = true;
      r.mode_text += ", Troposcatter Dominant";
    }
  }
  r.loss_db = variability(zr, 0.0, zc) + r.fspl_db;
  r.error_code = kwx_;
  return r;
}

}  // namespace

void Params::validate() const {
  auto fraction_ok = [](double v) { return v > 0.0 && v < 1.0; };
  if (!fraction_ok(reliability) || !fraction_ok(confidence)) {
    throw ValidationError("reliability and confidence must lie strictly between 0 and 1");
  }
  if (climate < 1 || climate > 7) throw ValidationError("radio climate must be a code from 1 to 7");
  if (!(rel_permittivity > 0.0) || !(conductivity > 0.0) || !(surface_refractivity > 0.0)) {
    throw ValidationError("ground constants and surface refractivity must be positive");
  }
}

double inverse_normal_tail(double q) {
  constexpr double c0 = 2.515516698;
  constexpr double c1 = 0.802853;
  constexpr double c2 = 0.010328;
  constexpr double d1 = 1.432788;
  constexpr double d2 = 0.189269;
  constexpr double d3 = 0.001308;
  if (q == 0.5) return 0.0;
  const double x = 0.5 - q;
  double t = std::max(0.5 - std::abs(x), 0.000001);
  t = std::sqrt(-2.0 * std::log(t));
  double v = t - ((c2 * t + c1) * t + c0) / (((d3 * t + d2) * t + d1) * t + 1.0);
  if (x < 0.0) v = -v;
  return v;
}

Result point_to_point(std::span<const double> terrain_m, double spacing_m, double tx_height_m, double rx_height_m,
                      double frequency_mhz, const Params& params) {
  params.validate();
  if (terrain_m.size() < 4) throw DomainError("the terrain model needs at least two interior profile samples");
  if (!(spacing_m > 0.0)) throw DomainError("profile spacing must be positive");
  if (!(tx_height_m > 0.0) || !(rx_height_m > 0.0)) throw DomainError("antenna heights must be positive");
  if (!(frequency_mhz > 0.0)) throw DomainError("frequency must be positive");

  const ProfileView view{static_cast<double>(terrain_m.size() - 1), spacing_m, terrain_m};
  Model model;
  return model.run(view, tx_height_m, rx_height_m, frequency_mhz, params);
}

}  // namespace botrf::itm
