#include "drift/drift_model.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace drift {

DriftFamily DriftFamily::polynomial(int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw std::invalid_argument("polynomial degrees must be >= 1");
    return DriftFamily{FamilyKind::polynomial, d1, d2};
}

DriftFamily DriftFamily::jump() { return DriftFamily{FamilyKind::linear_with_jump, 0, 0}; }

DriftFamily DriftFamily::parse(const std::string& spec) {
    if (spec == "linear") return linear();
    if (spec == "quadratic") return quadratic();
    if (spec == "cubic") return cubic();
    if (spec == "jump") return jump();
    if (spec.rfind("poly:", 0) == 0) {
        auto rest = spec.substr(5);
        auto colon = rest.find(':');
        if (colon != std::string::npos) {
            int d1 = 0, d2 = 0;
            auto r1 = std::from_chars(rest.data(), rest.data() + colon, d1);
            auto r2 = std::from_chars(rest.data() + colon + 1, rest.data() + rest.size(), d2);
            if (r1.ec == std::errc{} && r2.ec == std::errc{}) return polynomial(d1, d2);
        }
    }
    throw std::invalid_argument("unknown drift family: " + spec);
}

std::string DriftFamily::str() const {
    if (kind == FamilyKind::linear_with_jump) return "jump";
    if (deg1 == deg2) {
        if (deg1 == 1) return "linear";
        if (deg1 == 2) return "quadratic";
        if (deg1 == 3) return "cubic";
    }
    return "poly:" + std::to_string(deg1) + ":" + std::to_string(deg2);
}

DriftParams::DriftParams(DriftFamily f, std::vector<double> th) : family(f), theta(std::move(th)) {
    if (static_cast<int>(theta.size()) != family.dim())
        throw std::invalid_argument("parameter vector length does not match family dimension");
    if (family.kind == FamilyKind::linear_with_jump) {
        double t0 = theta[6];
        if (!(t0 > 0.0 && t0 < 1.0))
            throw std::invalid_argument("jump time must lie strictly inside (0, 1)");
    }
}

double DriftParams::t0() const {
    if (family.kind != FamilyKind::linear_with_jump)
        throw std::logic_error("t0 is defined for the jump family only");
    return theta[6];
}

Vec2 evaluate_drift(const DriftParams& params, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("drift time outside [0, 1]");
    if (params.family.kind == FamilyKind::polynomial) {
        const auto& th = params.theta;
        Vec2 d;
        double p = 1.0;
        for (int j = 0; j < params.family.deg1; ++j) {
            p *= t;
            d.x1 += th[j] * p;
        }
        p = 1.0;
        for (int j = 0; j < params.family.deg2; ++j) {
            p *= t;
            d.x2 += th[params.family.deg1 + j] * p;
        }
        return d;
    }
    const auto& th = params.theta;
    double t0 = th[6];
    if (t <= t0) return {th[0] * t, th[3] * t};
    return {th[1] * (t - t0) + th[2], th[4] * (t - t0) + th[5]};
}

Vec2 round_drift(Vec2 delta, int N) {
    if (N < 1) throw std::invalid_argument("round_drift: N must be >= 1");
    double n = static_cast<double>(N);
    return {std::floor(n * delta.x1 + 0.5) / n, std::floor(n * delta.x2 + 0.5) / n};
}

std::vector<Vec2> drift_gradient(const DriftParams& params, double t) {
    if (params.family.kind != FamilyKind::polynomial)
        throw std::invalid_argument("drift_gradient: jump family gradient is unsupported");
    std::vector<Vec2> g(static_cast<std::size_t>(params.family.dim()));
    double p = 1.0;
    for (int j = 0; j < params.family.deg1; ++j) {
        p *= t;
        g[j] = {p, 0.0};
    }
    p = 1.0;
    for (int j = 0; j < params.family.deg2; ++j) {
        p *= t;
        g[params.family.deg1 + j] = {0.0, p};
    }
    return g;
}

std::string format_theta(const std::vector<double>& theta) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < theta.size(); ++i) {
        auto res = std::to_chars(buf, buf + sizeof(buf), theta[i]);
        if (i) out += ',';
        out.append(buf, res.ptr);
    }
    return out;
}

std::vector<double> parse_theta(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::size_t end = comma == std::string::npos ? csv.size() : comma;
        double v = 0;
        auto res = std::from_chars(csv.data() + pos, csv.data() + end, v);
        if (res.ec != std::errc{} || res.ptr != csv.data() + end)
            throw std::invalid_argument("bad parameter vector: " + csv);
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace drift
