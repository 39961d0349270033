#include "qchaos/observable.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace qchaos {

namespace {

// Sort by mode, merge duplicates, drop exact zeros.
std::vector<TorusObservable::Mode> normalize(std::vector<TorusObservable::Mode> modes) {
    std::sort(modes.begin(), modes.end(),
              [](const auto& x, const auto& y) { return x.v < y.v; });
    std::vector<TorusObservable::Mode> out;
    out.reserve(modes.size());
    for (const auto& mode : modes) {
        if (!out.empty() && out.back().v == mode.v) {
            out.back().c += mode.c;
        } else {
            out.push_back(mode);
        }
    }
    std::erase_if(out, [](const auto& m) { return m.c == cplx{0.0, 0.0}; });
    return out;
}

}  // namespace

TorusObservable TorusObservable::constant(cplx value) {
    return from_modes({{LatticeVector{0, 0}, value}});
}

TorusObservable TorusObservable::harmonic(LatticeVector v, cplx amplitude) {
    return from_modes({{v, amplitude}});
}

TorusObservable TorusObservable::cosine_x(long long p) {
    return from_modes({{{p, 0}, 0.5}, {{-p, 0}, 0.5}});
}

TorusObservable TorusObservable::cosine_xi(long long p) {
    return from_modes({{{0, p}, 0.5}, {{0, -p}, 0.5}});
}

TorusObservable TorusObservable::from_modes(std::vector<Mode> modes) {
    TorusObservable a;
    a.modes_ = normalize(std::move(modes));
    return a;
}

long long TorusObservable::band_limit() const {
    long long k = 0;
    for (const auto& m : modes_) k = std::max(k, m.v.max_norm());
    return k;
}

cplx TorusObservable::coefficient(const LatticeVector& v) const {
    auto it = std::lower_bound(modes_.begin(), modes_.end(), v,
                               [](const Mode& m, const LatticeVector& w) { return m.v < w; });
    if (it != modes_.end() && it->v == v) return it->c;
    return {0.0, 0.0};
}

double TorusObservable::l2_norm_sq() const {
    double s = 0.0;
    for (const auto& m : modes_) s += std::norm(m.c);
    return s;
}

bool TorusObservable::is_real(double tol) const {
    for (const auto& m : modes_) {
        if (std::abs(m.c - std::conj(coefficient(-m.v))) > tol) return false;
    }
    return true;
}

cplx TorusObservable::evaluate(double x, double xi) const {
    cplx s = 0.0;
    for (const auto& m : modes_) {
        double phase = kTwoPi * (static_cast<double>(m.v.m) * x + static_cast<double>(m.v.n) * xi);
        s += m.c * std::polar(1.0, phase);
    }
    return s;
}

TorusObservable TorusObservable::scaled(cplx factor) const {
    std::vector<Mode> out = modes_;
    for (auto& m : out) m.c *= factor;
    return from_modes(std::move(out));
}

TorusObservable TorusObservable::conjugated() const {
    std::vector<Mode> out;
    out.reserve(modes_.size());
    for (const auto& m : modes_) out.push_back({-m.v, std::conj(m.c)});
    return from_modes(std::move(out));
}

TorusObservable TorusObservable::minus_mean() const {
    return *this - constant(mean());
}

TorusObservable operator+(const TorusObservable& a, const TorusObservable& b) {
    std::vector<TorusObservable::Mode> out = a.modes_;
    out.insert(out.end(), b.modes_.begin(), b.modes_.end());
    return TorusObservable::from_modes(std::move(out));
}

TorusObservable operator-(const TorusObservable& a, const TorusObservable& b) {
    return a + b.scaled(-1.0);
}

TorusObservable operator*(const TorusObservable& a, const TorusObservable& b) {
    std::vector<TorusObservable::Mode> out;
    out.reserve(a.modes_.size() * b.modes_.size());
    for (const auto& x : a.modes_)
        for (const auto& y : b.modes_)
            out.push_back({{checked_add(x.v.m, y.v.m), checked_add(x.v.n, y.v.n)}, x.c * y.c});
    return TorusObservable::from_modes(std::move(out));
}

TorusObservable TorusObservable::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("modes") || !j.at("modes").is_array())
        throw ConfigError("observable: expected object with a \"modes\" array");
    for (const auto& [key, _] : j.items())
        if (key != "modes") throw ConfigError("observable: unknown key \"" + key + "\"");
    std::vector<Mode> modes;
    for (const auto& e : j.at("modes")) {
        if (!e.is_object() || !e.contains("m") || !e.contains("n"))
            throw ConfigError("observable: each mode needs integer m, n");
        for (const auto& [key, _] : e.items())
            if (key != "m" && key != "n" && key != "re" && key != "im")
                throw ConfigError("observable: unknown mode key \"" + key + "\"");
        if (!e.at("m").is_number_integer() || !e.at("n").is_number_integer())
            throw ConfigError("observable: mode m, n must be integers");
        LatticeVector v{e.at("m").get<long long>(), e.at("n").get<long long>()};
        if (v.max_norm() > kModeBound) throw ConfigError("observable: mode exceeds integer bound");
        double re = e.value("re", 0.0);
        double im = e.value("im", 0.0);
        modes.push_back({v, {re, im}});
    }
    return from_modes(std::move(modes));
}

nlohmann::json TorusObservable::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : modes_) {
        arr.push_back({{"m", m.v.m}, {"n", m.v.n}, {"re", m.c.real()}, {"im", m.c.imag()}});
    }
    return nlohmann::json{{"modes", arr}};
}

}  // namespace qchaos
