#include "prt/sh.hpp"

#include "prt/error.hpp"

#include <cmath>
#include <cstdlib>

namespace prt {

namespace {

// Square matrix of band l addressed by centered indices m, n in [-l, l].
class BandMatrix {
  public:
    BandMatrix(int l, std::vector<double> &storage) : l_(l), data_(storage) {
        data_.assign((2 * l + 1) * (2 * l + 1), 0.0);
    }
    double &operator()(int m, int n) { return data_[(m + l_) * (2 * l_ + 1) + (n + l_)]; }
    double operator()(int m, int n) const { return data_[(m + l_) * (2 * l_ + 1) + (n + l_)]; }

  private:
    int l_;
    std::vector<double> &data_;
};

double centered(const std::vector<double> &band, int l, int m, int n) {
    return band[(m + l) * (2 * l + 1) + (n + l)];
}

// Helper P of the recurrence; r1 is band 1, prev is band l-1.
double p_term(int i, int a, int b, int l, const std::vector<double> &r1, const std::vector<double> &prev) {
    const double ri1 = centered(r1, 1, i, 1);
    const double rim1 = centered(r1, 1, i, -1);
    const double ri0 = centered(r1, 1, i, 0);
    if (b == l)
        return ri1 * centered(prev, l - 1, a, l - 1) - rim1 * centered(prev, l - 1, a, -l + 1);
    if (b == -l)
        return ri1 * centered(prev, l - 1, a, -l + 1) + rim1 * centered(prev, l - 1, a, l - 1);
    return ri0 * centered(prev, l - 1, a, b);
}

double u_term(int m, int n, int l, const std::vector<double> &r1, const std::vector<double> &prev) {
    return p_term(0, m, n, l, r1, prev);
}

double v_term(int m, int n, int l, const std::vector<double> &r1, const std::vector<double> &prev) {
    if (m == 0)
        return p_term(1, 1, n, l, r1, prev) + p_term(-1, -1, n, l, r1, prev);
    if (m > 0) {
        const double d = (m == 1) ? 1.0 : 0.0;
        return p_term(1, m - 1, n, l, r1, prev) * std::sqrt(1.0 + d) -
               p_term(-1, -m + 1, n, l, r1, prev) * (1.0 - d);
    }
    const double d = (m == -1) ? 1.0 : 0.0;
    return p_term(1, m + 1, n, l, r1, prev) * (1.0 - d) +
           p_term(-1, -m - 1, n, l, r1, prev) * std::sqrt(1.0 + d);
}

double w_term(int m, int n, int l, const std::vector<double> &r1, const std::vector<double> &prev) {
    if (m > 0)
        return p_term(1, m + 1, n, l, r1, prev) + p_term(-1, -m - 1, n, l, r1, prev);
    return p_term(1, m - 1, n, l, r1, prev) - p_term(-1, -m + 1, n, l, r1, prev);
}

}  // namespace

ShRotation::ShRotation(const Rotation3 &r, ShDegree degree) : degree_(degree) {
    const int n_max = degree.n();
    bands_.resize(n_max + 1);
    BandMatrix(0, bands_[0])(0, 0) = 1.0;
    if (n_max == 0)
        return;

    // Band 1 basis is proportional to (y, z, x) for m = -1, 0, 1.
    const Mat3 &m = r.matrix();
    const int axis[3] = {1, 2, 0};
    BandMatrix b1(1, bands_[1]);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            b1(i, j) = m(axis[i + 1], axis[j + 1]);

    for (int l = 2; l <= n_max; ++l) {
        BandMatrix bl(l, bands_[l]);
        const auto &prev = bands_[l - 1];
        const auto &r1 = bands_[1];
        for (int mm = -l; mm <= l; ++mm) {
            const int am = std::abs(mm);
            const double d = (mm == 0) ? 1.0 : 0.0;
            for (int nn = -l; nn <= l; ++nn) {
                const double denom = (std::abs(nn) == l) ? (2.0 * l) * (2.0 * l - 1.0)
                                                         : static_cast<double>((l + nn) * (l - nn));
                const double u = std::sqrt((l + mm) * (l - mm) / denom);
                const double v = 0.5 * std::sqrt((1.0 + d) * (l + am - 1.0) * (l + am) / denom) * (1.0 - 2.0 * d);
                const double w = -0.5 * std::sqrt((l - am - 1.0) * (l - am) / denom) * (1.0 - d);
                double value = 0.0;
                if (u != 0.0)
                    value += u * u_term(mm, nn, l, r1, prev);
                if (v != 0.0)
                    value += v * v_term(mm, nn, l, r1, prev);
                if (w != 0.0)
                    value += w * w_term(mm, nn, l, r1, prev);
                bl(mm, nn) = value;
            }
        }
    }
}

std::span<const double> ShRotation::band(int l) const {
    if (l < 0 || l > degree_.n())
        throw ArgumentError("band index out of range");
    return bands_[l];
}

ShVector ShRotation::apply(const ShVector &v) const {
    const int n_max = v.degree().n();
    if (n_max > degree_.n())
        throw ArgumentError("SH vector degree exceeds prepared rotation degree");
    ShVector out(v.degree());
    for (int l = 0; l <= n_max; ++l) {
        const int size = 2 * l + 1;
        const int offset = l * l;
        const auto &b = bands_[l];
        for (int i = 0; i < size; ++i) {
            double s = 0.0;
            for (int j = 0; j < size; ++j)
                s += b[i * size + j] * v[offset + j];
            out[offset + i] = s;
        }
    }
    return out;
}

ShVector sh_rotate(const ShVector &v, const Rotation3 &r) { return ShRotation(r, v.degree()).apply(v); }

ShVectorRgb sh_rotate(const ShVectorRgb &v, const Rotation3 &r) {
    const ShRotation rot(r, v.degree());
    return {rot.apply(v[0]), rot.apply(v[1]), rot.apply(v[2])};
}

}  // namespace prt
