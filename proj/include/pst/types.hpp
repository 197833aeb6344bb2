#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Errors carry a stable machine-readable code so the CLI can map them
/// to exit diagnostics without string matching.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};
struct StructuralError : Error {
    explicit StructuralError(const std::string& what) : Error("structural", what) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error("numerical", what) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

/// A point w in T*X, a single global chart of dimension 2n.
struct PhasePoint {
    RealVector coords;

    PhasePoint() = default;
    explicit PhasePoint(RealVector c) : coords(std::move(c)) {
        if (coords.size() < 2 || coords.size() % 2 != 0)
            throw DomainError("phase point dimension must be even and >= 2");
    }

    Eigen::Index dim() const { return coords.size(); }
};

/// A tangent direction nu at a phase-space point.
struct TangentDirection {
    RealVector components;
    bool unit_norm = false;

    TangentDirection() = default;
    TangentDirection(RealVector c, bool unit) : components(std::move(c)), unit_norm(unit) {
        if (unit_norm) {
            double n = components.norm();
            if (std::abs(n - 1.0) > 1e-12)
                throw DomainError("unit-norm direction has norm " + std::to_string(n));
        }
    }

    static TangentDirection axis(Eigen::Index dim, Eigen::Index k, double sign = 1.0) {
        RealVector c = RealVector::Zero(dim);
        c[k] = sign;
        return TangentDirection(std::move(c), true);
    }

    TangentDirection normalized() const {
        double n = components.norm();
        if (n == 0.0) throw DomainError("cannot normalize zero direction");
        return TangentDirection(components / n, true);
    }
};

/// Adapted chart near a hypersurface Sigma = {tau = 0}: tau_index names the
/// defining coordinate, t_index the bicharacteristic parameter. The
/// transversal field V = d/dtau; bicharacteristics are t-lines at fixed
/// remaining coordinates with tau = 0.
struct HypersurfaceChart {
    Eigen::Index tau_index = 1;
    Eigen::Index t_index = 0;

    struct Split {
        double t = 0.0;
        double tau = 0.0;
        RealVector rest;  // the remaining coordinates in ascending index order
    };

    Split split(const PhasePoint& w) const {
        check(w.dim());
        Split s;
        s.t = w.coords[t_index];
        s.tau = w.coords[tau_index];
        s.rest.resize(w.dim() - 2);
        Eigen::Index j = 0;
        for (Eigen::Index i = 0; i < w.dim(); ++i)
            if (i != t_index && i != tau_index) s.rest[j++] = w.coords[i];
        return s;
    }

    PhasePoint assemble(double t, double tau, const RealVector& rest) const {
        Eigen::Index dim = rest.size() + 2;
        check(dim);
        RealVector c(dim);
        Eigen::Index j = 0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (i == t_index) c[i] = t;
            else if (i == tau_index) c[i] = tau;
            else c[i] = rest[j++];
        }
        return PhasePoint(std::move(c));
    }

    TangentDirection transversal(Eigen::Index dim) const {
        return TangentDirection::axis(dim, tau_index);
    }
    TangentDirection bicharacteristic_direction(Eigen::Index dim) const {
        return TangentDirection::axis(dim, t_index);
    }

private:
    void check(Eigen::Index dim) const {
        if (tau_index == t_index || tau_index < 0 || t_index < 0 || tau_index >= dim ||
            t_index >= dim)
            throw ConfigError("chart indices out of range or equal");
    }
};

/// One rank policy shared by every module: singular values below
/// tol * sigma_max count as zero (absolute tol for the zero matrix).
struct RankPolicy {
    double tol = 1e-9;
};

enum class Verdict { yes, no, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        default: return "inconclusive";
    }
}

}  // namespace pst
