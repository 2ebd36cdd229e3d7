#include "ipd/density.hpp"

#include <cmath>

#include "ipd/errors.hpp"
#include "ipd/mathutil.hpp"

namespace ipd {

DensitySpec DensitySpec::diag_gaussian(std::vector<double> mean, std::vector<double> var) {
    if (mean.empty() || mean.size() != var.size())
        throw invalid_parameter("gaussian mean/var lengths must match and be nonempty");
    for (double v : var)
        if (!(v > 0)) throw invalid_parameter("gaussian variances must be positive");
    DensitySpec d;
    d.dim_ = static_cast<int>(mean.size());
    d.family_ = DiagGaussian{std::move(mean), std::move(var)};
    return d;
}

DensitySpec DensitySpec::product_exponential(std::vector<double> rates) {
    if (rates.empty()) throw invalid_parameter("exponential needs at least one rate");
    for (double r : rates)
        if (!(r > 0)) throw invalid_parameter("exponential rates must be positive");
    DensitySpec d;
    d.dim_ = static_cast<int>(rates.size());
    d.family_ = ProductExponential{std::move(rates)};
    return d;
}

DensitySpec DensitySpec::product_lognormal(std::vector<double> mu, std::vector<double> sigma) {
    if (mu.empty() || mu.size() != sigma.size())
        throw invalid_parameter("lognormal mu/sigma lengths must match and be nonempty");
    for (double s : sigma)
        if (!(s > 0)) throw invalid_parameter("lognormal sigmas must be positive");
    DensitySpec d;
    d.dim_ = static_cast<int>(mu.size());
    d.family_ = ProductLognormal{std::move(mu), std::move(sigma)};
    return d;
}

DensitySpec DensitySpec::fisher_s2(double kappa, std::array<double, 3> mu) {
    if (kappa < 0) throw invalid_parameter("fisher kappa must be >= 0");
    double n2 = mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
        throw invalid_parameter("fisher mean direction must be unit norm");
    DensitySpec d;
    d.dim_ = 3;
    d.family_ = FisherS2{kappa, mu};
    return d;
}

std::string DensitySpec::family_name() const {
    struct V {
        std::string operator()(const DiagGaussian&) const { return "diag_gaussian"; }
        std::string operator()(const ProductExponential&) const { return "product_exponential"; }
        std::string operator()(const ProductLognormal&) const { return "product_lognormal"; }
        std::string operator()(const FisherS2&) const { return "fisher_s2"; }
    };
    return std::visit(V{}, family_);
}

distances::Domain DensitySpec::domain() const {
    struct V {
        distances::Domain operator()(const DiagGaussian&) const {
            return distances::Domain::Euclidean;
        }
        distances::Domain operator()(const ProductExponential&) const {
            return distances::Domain::PositiveOrthant;
        }
        distances::Domain operator()(const ProductLognormal&) const {
            return distances::Domain::PositiveOrthant;
        }
        distances::Domain operator()(const FisherS2&) const {
            return distances::Domain::UnitSphere;
        }
    };
    return std::visit(V{}, family_);
}

namespace {

double fisher_normalizer(double kappa) {
    if (kappa == 0) return 1.0 / (4.0 * M_PI);
    return kappa / (4.0 * M_PI * std::sinh(kappa));
}

}  // namespace

double DensitySpec::pdf(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw dimension_mismatch("density argument has wrong dimension");
    struct V {
        std::span<const double> x;

        double operator()(const DiagGaussian& f) const {
            double v = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                double s = std::sqrt(f.var[i]);
                v *= normal_pdf((x[i] - f.mean[i]) / s) / s;
            }
            return v;
        }

        double operator()(const ProductExponential& f) const {
            double v = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] < 0) return 0.0;
                v *= f.rates[i] * std::exp(-f.rates[i] * x[i]);
            }
            return v;
        }

        double operator()(const ProductLognormal& f) const {
            double v = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] <= 0) return 0.0;
                double z = (std::log(x[i]) - f.mu[i]) / f.sigma[i];
                v *= normal_pdf(z) / (x[i] * f.sigma[i]);
            }
            return v;
        }

        double operator()(const FisherS2& f) const {
            double dot = x[0] * f.mu[0] + x[1] * f.mu[1] + x[2] * f.mu[2];
            return fisher_normalizer(f.kappa) * std::exp(f.kappa * dot);
        }
    };
    return std::visit(V{x}, family_);
}

double DensitySpec::sup() const {
    struct V {
        double operator()(const DiagGaussian& f) const {
            double v = 1.0;
            for (double s2 : f.var) v *= 1.0 / std::sqrt(2.0 * M_PI * s2);
            return v;
        }
        double operator()(const ProductExponential& f) const {
            double v = 1.0;
            for (double r : f.rates) v *= r;
            return v;
        }
        double operator()(const ProductLognormal& f) const {
            // mode at exp(mu - sigma^2)
            double v = 1.0;
            for (std::size_t i = 0; i < f.mu.size(); ++i) {
                double s = f.sigma[i];
                v *= std::exp(0.5 * s * s - f.mu[i]) / (s * std::sqrt(2.0 * M_PI));
            }
            return v;
        }
        double operator()(const FisherS2& f) const {
            return fisher_normalizer(f.kappa) * std::exp(f.kappa);
        }
    };
    return std::visit(V{}, family_);
}

double DensitySpec::marginal_cdf(int axis, double x) const {
    if (axis < 0 || axis >= dim_) throw invalid_parameter("marginal axis out of range");
    struct V {
        int axis;
        double x;
        double operator()(const DiagGaussian& f) const {
            return normal_cdf((x - f.mean[axis]) / std::sqrt(f.var[axis]));
        }
        double operator()(const ProductExponential& f) const {
            if (x <= 0) return 0.0;
            return -std::expm1(-f.rates[axis] * x);
        }
        double operator()(const ProductLognormal& f) const {
            if (x <= 0) return 0.0;
            return normal_cdf((std::log(x) - f.mu[axis]) / f.sigma[axis]);
        }
        double operator()(const FisherS2&) const {
            throw unsupported_family("fisher density has no box marginals");
        }
    };
    return std::visit(V{axis, x}, family_);
}

namespace {

// Marsaglia (1972) uniform sphere picking.
void uniform_sphere(Rng& rng, std::span<double> out) {
    double v1, v2, s;
    do {
        v1 = 2.0 * rng.uniform01() - 1.0;
        v2 = 2.0 * rng.uniform01() - 1.0;
        s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(1.0 - s);
    out[0] = 2.0 * v1 * f;
    out[1] = 2.0 * v2 * f;
    out[2] = 1.0 - 2.0 * s;
}

}  // namespace

void DensitySpec::sample_into(Rng& rng, std::span<double> out) const {
    if (static_cast<int>(out.size()) != dim_)
        throw dimension_mismatch("sample buffer has wrong dimension");
    struct V {
        Rng& rng;
        std::span<double> out;

        void operator()(const DiagGaussian& f) const {
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = f.mean[i] + std::sqrt(f.var[i]) * rng.normal();
        }

        void operator()(const ProductExponential& f) const {
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = rng.exponential(f.rates[i]);
        }

        void operator()(const ProductLognormal& f) const {
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = std::exp(f.mu[i] + f.sigma[i] * rng.normal());
        }

        void operator()(const FisherS2& f) const {
            if (f.kappa == 0) {
                uniform_sphere(rng, out);
                return;
            }
            // cos of the colatitude around mu by inverse CDF
            double u = rng.uniform_open01();
            double w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * f.kappa)) / f.kappa;
            double phi = 2.0 * M_PI * rng.uniform01();
            double r = std::sqrt(std::max(0.0, 1.0 - w * w));
            // orthonormal frame (e1, e2, mu)
            std::array<double, 3> a{1, 0, 0};
            if (std::abs(f.mu[0]) > 0.9) a = {0, 1, 0};
            std::array<double, 3> e1{a[1] * f.mu[2] - a[2] * f.mu[1],
                                     a[2] * f.mu[0] - a[0] * f.mu[2],
                                     a[0] * f.mu[1] - a[1] * f.mu[0]};
            double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
            for (auto& v : e1) v /= n1;
            std::array<double, 3> e2{f.mu[1] * e1[2] - f.mu[2] * e1[1],
                                     f.mu[2] * e1[0] - f.mu[0] * e1[2],
                                     f.mu[0] * e1[1] - f.mu[1] * e1[0]};
            for (int i = 0; i < 3; ++i)
                out[i] = r * std::cos(phi) * e1[i] + r * std::sin(phi) * e2[i] + w * f.mu[i];
        }
    };
    std::visit(V{rng, out}, family_);
}

DensitySpec DensitySpec::shifted_first(double shift) const {
    struct V {
        double shift;
        Family operator()(DiagGaussian f) const {
            f.mean[0] += shift;
            return f;
        }
        Family operator()(const ProductExponential&) const {
            throw unsupported_family("shift is only defined for location families");
        }
        Family operator()(ProductLognormal f) const {
            f.mu[0] += shift;
            return f;
        }
        Family operator()(const FisherS2&) const {
            throw unsupported_family("shift is only defined for location families");
        }
    };
    DensitySpec d;
    d.dim_ = dim_;
    d.family_ = std::visit(V{shift}, family_);
    return d;
}

}  // namespace ipd
