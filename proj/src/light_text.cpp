#include "prt/error.hpp"
#include "prt/sh.hpp"

#include <charconv>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace prt {

void write_sh_text(std::ostream &os, const ShVector &v) {
    std::ostringstream buf;
    buf << "SH " << v.degree().n() << "\n";
    buf << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < v.size(); ++i)
        buf << v[i] << (i + 1 == v.size() ? "\n" : " ");
    os << buf.str();
}

void write_sh_text(std::ostream &os, const ShVectorRgb &v) {
    for (int c = 0; c < 3; ++c)
        write_sh_text(os, v[c]);
}

ShVector read_sh_text(std::istream &is) {
    std::string tag;
    int n = -1;
    const auto start = is.tellg();
    if (!(is >> tag) || tag != "SH")
        throw ParseError("expected 'SH <N>' header", start < 0 ? 0 : static_cast<std::size_t>(start));
    if (!(is >> n))
        throw ParseError("missing SH degree", static_cast<std::size_t>(std::max<std::streamoff>(0, is.tellg())));
    const ShDegree degree(n);
    std::vector<double> coeffs(degree.coeff_count());
    for (auto &c : coeffs) {
        std::string token;
        const auto pos = is.tellg();
        if (!(is >> token))
            throw ParseError("truncated SH coefficient list", pos < 0 ? 0 : static_cast<std::size_t>(pos));
        // from_chars: locale-independent, exact round trip
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), c);
        if (ec != std::errc() || ptr != token.data() + token.size())
            throw ParseError("bad SH coefficient '" + token + "'", pos < 0 ? 0 : static_cast<std::size_t>(pos));
    }
    return ShVector(std::move(coeffs));
}

ShVectorRgb read_sh_rgb_text(std::istream &is) {
    ShVector r = read_sh_text(is);
    ShVector g = read_sh_text(is);
    ShVector b = read_sh_text(is);
    return {std::move(r), std::move(g), std::move(b)};
}

}  // namespace prt
