#include "prt/sh.hpp"

#include "prt/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace prt {

namespace {

struct NormTable {
    // K(l, m) * sqrt(2) for m > 0, K(l, 0) for m = 0.
    std::array<std::array<double, kMaxShDegree + 1>, kMaxShDegree + 1> k{};

    NormTable() {
        for (int l = 0; l <= kMaxShDegree; ++l)
            for (int m = 0; m <= l; ++m) {
                // (l-m)!/(l+m)! computed as a running product to stay exact-ish.
                double ratio = 1.0;
                for (int f = l - m + 1; f <= l + m; ++f)
                    ratio /= f;
                double v = std::sqrt((2.0 * l + 1.0) / kFourPi * ratio);
                if (m > 0)
                    v *= std::sqrt(2.0);
                k[l][m] = v;
            }
    }
};

const NormTable &norms() {
    static const NormTable table;
    return table;
}

std::string describe(const Vec3 &d) {
    std::ostringstream os;
    os.precision(9);
    os << "(" << d.x() << ", " << d.y() << ", " << d.z() << ")";
    return os.str();
}

}  // namespace

Direction::Direction(const Vec3 &v) : v_(v) {
    const double n2 = v.squaredNorm();
    if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > 1e-6)
        throw ArgumentError("direction " + describe(v) + " is not unit length");
}

Direction Direction::normalize(const Vec3 &v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw ArgumentError("cannot normalize direction " + describe(v));
    return Direction(v / n, Trusted{});
}

ShDegree::ShDegree(int n) : n_(n) {
    if (n < 0 || n > kMaxShDegree)
        throw ArgumentError("SH degree " + std::to_string(n) + " outside [0, 10]");
}

ShDegree ShDegree::from_coeff_count(std::size_t count) {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count)))) - 1;
    if (n < 0 || static_cast<std::size_t>((n + 1) * (n + 1)) != count)
        throw ArgumentError("coefficient count " + std::to_string(count) + " is not (N+1)^2");
    return ShDegree(n);
}

ShVector::ShVector(std::vector<double> coeffs)
    : degree_(ShDegree::from_coeff_count(coeffs.size())), coeffs_(std::move(coeffs)) {
    for (double c : coeffs_)
        if (!std::isfinite(c))
            throw NumericError("SH coefficient is not finite");
}

ShVector ShVector::basis(ShDegree degree, int index) {
    if (index < 0 || index >= degree.coeff_count())
        throw ArgumentError("basis index out of range");
    ShVector v(degree);
    v[index] = 1.0;
    return v;
}

double ShVector::norm() const {
    double s = 0.0;
    for (double c : coeffs_)
        s += c * c;
    return std::sqrt(s);
}

double ShVector::eval(const Vec3 &d) const {
    std::array<double, (kMaxShDegree + 1) * (kMaxShDegree + 1)> y;
    sh_eval_basis(degree_, d, std::span<double>(y.data(), coeffs_.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        s += coeffs_[i] * y[i];
    return s;
}

ShVector ShVector::resized(ShDegree degree) const {
    ShVector out(degree);
    const std::size_t n = std::min(out.size(), size());
    std::copy_n(coeffs_.begin(), n, out.coeffs_.begin());
    return out;
}

ShVector &ShVector::operator+=(const ShVector &o) {
    if (!(degree_ == o.degree_))
        throw ArgumentError("SH degree mismatch in addition");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += o.coeffs_[i];
    return *this;
}

ShVector &ShVector::operator-=(const ShVector &o) {
    if (!(degree_ == o.degree_))
        throw ArgumentError("SH degree mismatch in subtraction");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= o.coeffs_[i];
    return *this;
}

ShVector &ShVector::operator*=(double s) {
    for (double &c : coeffs_)
        c *= s;
    return *this;
}

ShVectorRgb::ShVectorRgb(ShVector r, ShVector g, ShVector b)
    : channels_{std::move(r), std::move(g), std::move(b)} {
    if (!(channels_[0].degree() == channels_[1].degree()) ||
        !(channels_[0].degree() == channels_[2].degree()))
        throw ArgumentError("RGB SH channels must share a degree");
}

ShVectorRgb ShVectorRgb::resized(ShDegree degree) const {
    return {channels_[0].resized(degree), channels_[1].resized(degree), channels_[2].resized(degree)};
}

ShVectorRgb &ShVectorRgb::operator*=(double s) {
    for (auto &c : channels_)
        c *= s;
    return *this;
}

ShVectorRgb operator+(const ShVectorRgb &a, const ShVectorRgb &b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Rotation3::Rotation3(const Mat3 &m) : m_(m) {
    if (!m.allFinite())
        throw ArgumentError("rotation matrix has non-finite entries");
    const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho > 1e-6 || std::abs(m.determinant() - 1.0) > 1e-6)
        throw ArgumentError("rotation matrix is not orthonormal with det +1");
}

Rotation3 Rotation3::axis_angle(const Vec3 &axis, double radians) {
    const double n = axis.norm();
    if (!(n > 0.0))
        throw ArgumentError("rotation axis must be non-zero");
    return Rotation3(Eigen::AngleAxisd(radians, axis / n).toRotationMatrix(), Trusted{});
}

Rotation3 Rotation3::yaw_pitch_roll(double yaw_deg, double pitch_deg, double roll_deg) {
    if (!std::isfinite(yaw_deg) || !std::isfinite(pitch_deg) || !std::isfinite(roll_deg))
        throw ArgumentError("rotation angles must be finite");
    const Mat3 m = Eigen::AngleAxisd(deg_to_rad(roll_deg), Vec3::UnitX()).toRotationMatrix() *
                   Eigen::AngleAxisd(deg_to_rad(pitch_deg), Vec3::UnitY()).toRotationMatrix() *
                   Eigen::AngleAxisd(deg_to_rad(yaw_deg), Vec3::UnitZ()).toRotationMatrix();
    return Rotation3(m, Trusted{});
}

Rotation3 Rotation3::inverse() const { return Rotation3(m_.transpose(), Trusted{}); }

Rotation3 operator*(const Rotation3 &a, const Rotation3 &b) {
    return Rotation3(a.m_ * b.m_, Rotation3::Trusted{});
}

void sh_eval_basis(ShDegree degree, const Vec3 &d, std::span<double> out) {
    const int n = degree.n();
    const auto &k = norms().k;
    const double x = d.x(), y = d.y(), z = d.z();

    // P~_l^m = P_l^m(z) / sin^m(theta) without the Condon-Shortley phase, and
    // (c_m + i s_m) = (x + i y)^m = sin^m(theta) e^{i m phi}. Their product
    // gives the real basis without trigonometric calls.
    double c_m = 1.0, s_m = 0.0;
    double p_mm = 1.0;  // (2m-1)!!
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            const double c_next = c_m * x - s_m * y;
            const double s_next = c_m * y + s_m * x;
            c_m = c_next;
            s_m = s_next;
            p_mm *= (2.0 * m - 1.0);
        }
        double p_lm2 = 0.0, p_lm1 = p_mm;
        for (int l = m; l <= n; ++l) {
            double p;
            if (l == m) {
                p = p_mm;
            } else if (l == m + 1) {
                p = z * (2.0 * m + 1.0) * p_mm;
                p_lm2 = p_lm1;
                p_lm1 = p;
            } else {
                p = ((2.0 * l - 1.0) * z * p_lm1 - (l + m - 1.0) * p_lm2) / (l - m);
                p_lm2 = p_lm1;
                p_lm1 = p;
            }
            const double base = k[l][m] * p;
            if (m == 0) {
                out[sh_index(l, 0)] = base;
            } else {
                out[sh_index(l, m)] = base * c_m;
                out[sh_index(l, -m)] = base * s_m;
            }
        }
    }
}

double sh_eval(int l, int m, const Direction &d) {
    if (l < 0 || l > kMaxShDegree || m < -l || m > l)
        throw ArgumentError("SH index (l=" + std::to_string(l) + ", m=" + std::to_string(m) +
                            ") out of range");
    std::array<double, (kMaxShDegree + 1) * (kMaxShDegree + 1)> y;
    const ShDegree degree(l);
    sh_eval_basis(degree, d.vec(), std::span<double>(y.data(), degree.coeff_count()));
    return y[sh_index(l, m)];
}

ShVector sh_project(const SphericalFunction &f, ShDegree degree, const SphereSampler &sampler) {
    ShVector out(degree);
    std::vector<double> y(degree.coeff_count());
    for (const SphereSample &s : sampler.draw()) {
        const double v = f(s.dir);
        if (!std::isfinite(v))
            throw NumericError("projected function is not finite at direction " + describe(s.dir));
        if (v == 0.0)
            continue;
        sh_eval_basis(degree, s.dir, y);
        const double wv = s.weight * v;
        for (std::size_t i = 0; i < y.size(); ++i)
            out[i] += wv * y[i];
    }
    return out;
}

double sh_dot(const ShVector &t, const ShVector &l) {
    if (!(t.degree() == l.degree()))
        throw ArgumentError("sh_dot: degree mismatch (" + std::to_string(t.degree().n()) + " vs " +
                            std::to_string(l.degree().n()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        s += t[i] * l[i];
    return s;
}

}  // namespace prt
