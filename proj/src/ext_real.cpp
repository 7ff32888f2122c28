#include "metric_center/ext_real.hpp"

#include <charconv>
#include <cstdlib>

namespace metric_center {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

template <>
std::string ExtReal<Rational>::str() const {
    return infinite_ ? "inf" : value_.str();
}

template <>
std::string ExtReal<double>::str() const {
    return infinite_ ? "inf" : format_double(value_);
}

FloatExt to_float(const ExactExt& x) {
    return x.is_infinite() ? FloatExt::infinity() : FloatExt(x.value().to_double());
}

std::string AnyExtReal::str() const {
    return std::visit([](const auto& v) { return v.str(); }, v_);
}

AnyExtReal AnyExtReal::parse(std::string_view text) {
    if (text == "inf" || text == "+inf") return AnyExtReal(ExactExt::infinity());
    if (text.find_first_of(".eE") != std::string_view::npos) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw std::invalid_argument("malformed float literal '" + std::string(text) + "'");
        }
        return AnyExtReal(FloatExt(v));
    }
    return AnyExtReal(ExactExt(Rational::parse(text)));
}

int ext_cmp(const AnyExtReal& a, const AnyExtReal& b) {
    if (a.is_exact() != b.is_exact()) {
        throw RegimeMismatch("comparison mixes exact and floating extended reals");
    }
    if (a.is_exact()) return ext_cmp(a.exact(), b.exact());
    return ext_cmp(a.floating(), b.floating());
}

bool operator==(const AnyExtReal& a, const AnyExtReal& b) { return ext_cmp(a, b) == 0; }

AnyExtReal ext_min(const AnyExtReal& a, const AnyExtReal& b) { return ext_cmp(b, a) < 0 ? b : a; }
AnyExtReal ext_max(const AnyExtReal& a, const AnyExtReal& b) { return ext_cmp(a, b) < 0 ? b : a; }

}  // namespace metric_center
