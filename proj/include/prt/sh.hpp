#pragma once

#include "prt/math.hpp"
#include "prt/sampling.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace prt {

/// Unit-length direction on the sphere.
class Direction {
  public:
    /// Throws ArgumentError unless |v| = 1 within 1e-6.
    explicit Direction(const Vec3 &v);
    Direction(double x, double y, double z) : Direction(Vec3(x, y, z)) {}

    /// Normalizes v; throws ArgumentError for a zero or non-finite vector.
    static Direction normalize(const Vec3 &v);

    const Vec3 &vec() const { return v_; }
    operator const Vec3 &() const { return v_; }
    double x() const { return v_.x(); }
    double y() const { return v_.y(); }
    double z() const { return v_.z(); }

  private:
    struct Trusted {};
    Direction(const Vec3 &v, Trusted) : v_(v) {}
    Vec3 v_;
};

inline constexpr int kMaxShDegree = 10;

/// Maximum band index N; the expansion holds (N+1)^2 coefficients.
class ShDegree {
  public:
    /// Throws ArgumentError outside [0, 10].
    explicit ShDegree(int n);
    /// Inverts coeff_count(); throws unless count is a perfect square.
    static ShDegree from_coeff_count(std::size_t count);

    int n() const { return n_; }
    int coeff_count() const { return (n_ + 1) * (n_ + 1); }
    friend bool operator==(ShDegree, ShDegree) = default;

  private:
    int n_;
};

inline constexpr int sh_index(int l, int m) { return l * (l + 1) + m; }

/// Band-limited spherical function. Coefficient i = l(l+1)+m.
class ShVector {
  public:
    explicit ShVector(ShDegree degree) : degree_(degree), coeffs_(degree.coeff_count(), 0.0) {}
    /// Throws if coeffs.size() is not a square or a value is non-finite.
    explicit ShVector(std::vector<double> coeffs);

    static ShVector basis(ShDegree degree, int index);

    ShDegree degree() const { return degree_; }
    std::size_t size() const { return coeffs_.size(); }
    double &operator[](std::size_t i) { return coeffs_[i]; }
    double operator[](std::size_t i) const { return coeffs_[i]; }
    double &at(int l, int m) { return coeffs_[sh_index(l, m)]; }
    double at(int l, int m) const { return coeffs_[sh_index(l, m)]; }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }

    double norm() const;
    /// Value of the expansion at d.
    double eval(const Vec3 &d) const;
    /// Keeps bands 0..degree (or zero-pads when growing).
    ShVector resized(ShDegree degree) const;

    ShVector &operator+=(const ShVector &o);
    ShVector &operator-=(const ShVector &o);
    ShVector &operator*=(double s);
    friend ShVector operator+(ShVector a, const ShVector &b) { return a += b; }
    friend ShVector operator-(ShVector a, const ShVector &b) { return a -= b; }
    friend ShVector operator*(ShVector a, double s) { return a *= s; }
    friend ShVector operator*(double s, ShVector a) { return a *= s; }
    friend bool operator==(const ShVector &, const ShVector &) = default;

  private:
    ShDegree degree_;
    std::vector<double> coeffs_;
};

/// Three channels (R, G, B) of the same degree.
class ShVectorRgb {
  public:
    explicit ShVectorRgb(ShDegree degree) : channels_{ShVector(degree), ShVector(degree), ShVector(degree)} {}
    ShVectorRgb(ShVector r, ShVector g, ShVector b);

    ShDegree degree() const { return channels_[0].degree(); }
    ShVector &operator[](int c) { return channels_[c]; }
    const ShVector &operator[](int c) const { return channels_[c]; }
    ShVectorRgb resized(ShDegree degree) const;

    ShVectorRgb &operator*=(double s);
    friend ShVectorRgb operator*(ShVectorRgb a, double s) { return a *= s; }
    friend ShVectorRgb operator*(double s, ShVectorRgb a) { return a *= s; }
    friend ShVectorRgb operator+(const ShVectorRgb &a, const ShVectorRgb &b);
    friend bool operator==(const ShVectorRgb &, const ShVectorRgb &) = default;

  private:
    std::array<ShVector, 3> channels_;
};

/// Proper rotation (orthonormal, det +1).
class Rotation3 {
  public:
    Rotation3() : m_(Mat3::Identity()) {}
    /// Throws ArgumentError unless M^T M = I and det = +1 within 1e-6.
    explicit Rotation3(const Mat3 &m);

    static Rotation3 identity() { return Rotation3(); }
    static Rotation3 axis_angle(const Vec3 &axis, double radians);
    /// Degrees; yaw about +z, then pitch about +y, then roll about +x, all
    /// about world axes: M = Rx(roll) * Ry(pitch) * Rz(yaw).
    static Rotation3 yaw_pitch_roll(double yaw_deg, double pitch_deg, double roll_deg);

    const Mat3 &matrix() const { return m_; }
    Rotation3 inverse() const;
    Vec3 operator*(const Vec3 &v) const { return m_ * v; }
    /// Composition: (a * b) applies b first.
    friend Rotation3 operator*(const Rotation3 &a, const Rotation3 &b);

  private:
    struct Trusted {};
    Rotation3(const Mat3 &m, Trusted) : m_(m) {}
    Mat3 m_;
};

/// Real orthonormal SH Y_{l,m}(d). Throws ArgumentError unless
/// 0 <= l <= 10 and |m| <= l.
double sh_eval(int l, int m, const Direction &d);

/// All (N+1)^2 basis values at unit vector d, written to out[0..count).
void sh_eval_basis(ShDegree degree, const Vec3 &d, std::span<double> out);

using SphericalFunction = std::function<double(const Vec3 &)>;

/// Coefficients of f by the sampler's quadrature. Throws NumericError naming
/// the direction when f returns a non-finite value.
ShVector sh_project(const SphericalFunction &f, ShDegree degree, const SphereSampler &sampler);

/// Throws ArgumentError on degree mismatch.
double sh_dot(const ShVector &t, const ShVector &l);

/// Per-band rotation matrices for one rotation, built with the
/// Ivanic-Ruedenberg recurrence. Applying them to v yields the function
/// d -> v(r^-1 d).
class ShRotation {
  public:
    ShRotation(const Rotation3 &r, ShDegree degree);

    ShDegree degree() const { return degree_; }
    /// Matrix of band l, (2l+1)^2 entries row-major, indexed by m+l.
    std::span<const double> band(int l) const;
    /// v must not exceed the prepared degree.
    ShVector apply(const ShVector &v) const;

  private:
    ShDegree degree_;
    std::vector<std::vector<double>> bands_;
};

ShVector sh_rotate(const ShVector &v, const Rotation3 &r);
ShVectorRgb sh_rotate(const ShVectorRgb &v, const Rotation3 &r);

/// Golden-file text format: a line `SH <N>` then (N+1)^2 decimal values.
/// Values are printed with round-trip precision.
void write_sh_text(std::ostream &os, const ShVector &v);
ShVector read_sh_text(std::istream &is);
/// Three consecutive blocks (R, G, B).
void write_sh_text(std::ostream &os, const ShVectorRgb &v);
ShVectorRgb read_sh_rgb_text(std::istream &is);

}  // namespace prt
