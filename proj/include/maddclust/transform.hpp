#ifndef MADDCLUST_TRANSFORM_HPP
#define MADDCLUST_TRANSFORM_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace maddclust {

enum class HMap { Sqrt, Identity };
enum class PsiMap { Square, Identity, OneMinusExp };

/// Selects a member of the base-distance family
///   phi(x, y) = h( mean_q psi(|x_q - y_q|) ).
/// Both maps are continuous, strictly increasing on [0, inf) and vanish at 0,
/// so every member is a genuine metric on R^d.
struct TransformSpec {
    HMap h = HMap::Sqrt;
    PsiMap psi = PsiMap::Square;

    /// Euclidean distance scaled by 1/sqrt(d).
    static constexpr TransformSpec rho0() { return {HMap::Sqrt, PsiMap::Square}; }
    /// Mean absolute coordinate difference.
    static constexpr TransformSpec rho1() { return {HMap::Identity, PsiMap::Identity}; }
    /// Bounded transform, sensitive to marginal shape differences.
    static constexpr TransformSpec rho2() { return {HMap::Identity, PsiMap::OneMinusExp}; }

    double apply_h(double t) const { return h == HMap::Sqrt ? std::sqrt(t) : t; }

    double apply_psi(double t) const {
        switch (psi) {
            case PsiMap::Square: return t * t;
            case PsiMap::Identity: return t;
            case PsiMap::OneMinusExp: return -std::expm1(-t);
        }
        return t;
    }

    std::string name() const {
        if (*this == rho0()) return "rho0";
        if (*this == rho1()) return "rho1";
        if (*this == rho2()) return "rho2";
        std::string hn = h == HMap::Sqrt ? "sqrt" : "id";
        std::string pn = psi == PsiMap::Square ? "square" : (psi == PsiMap::Identity ? "id" : "one-minus-exp");
        return "custom(" + hn + "," + pn + ")";
    }

    friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

inline TransformSpec transform_from_name(std::string_view name) {
    if (name == "rho0") return TransformSpec::rho0();
    if (name == "rho1") return TransformSpec::rho1();
    if (name == "rho2") return TransformSpec::rho2();
    throw std::invalid_argument("unknown transform preset: " + std::string(name));
}

} // namespace maddclust

#endif
