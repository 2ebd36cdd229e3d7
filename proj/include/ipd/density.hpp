#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ipd/distances.hpp"
#include "ipd/rng.hpp"

namespace ipd {

struct DiagGaussian {
    std::vector<double> mean;
    std::vector<double> var;
};

struct ProductExponential {
    std::vector<double> rates;
};

struct ProductLognormal {
    std::vector<double> mu;
    std::vector<double> sigma;
};

// Fisher density on S^2, proportional to exp(kappa <x, mu>); kappa = 0 is the
// uniform distribution. Normalizer kappa / (4 pi sinh kappa).
struct FisherS2 {
    double kappa = 0.0;
    std::array<double, 3> mu{0, 0, 1};
};

// A density that can be evaluated pointwise and sampled from. Serves both as
// the sampler description for empirical work and as the f, g in the bound
// checks.
class DensitySpec {
  public:
    using Family = std::variant<DiagGaussian, ProductExponential, ProductLognormal, FisherS2>;

    static DensitySpec diag_gaussian(std::vector<double> mean, std::vector<double> var);
    static DensitySpec product_exponential(std::vector<double> rates);
    static DensitySpec product_lognormal(std::vector<double> mu, std::vector<double> sigma);
    static DensitySpec fisher_s2(double kappa, std::array<double, 3> mu = {0, 0, 1});

    int dim() const { return dim_; }
    const Family& family() const { return family_; }
    std::string family_name() const;
    distances::Domain domain() const;

    double pdf(std::span<const double> x) const;
    // Upper bound on the density values (exact mode value).
    double sup() const;
    // Mass of marginal `axis` on (-inf, x]. Unsupported for FisherS2.
    double marginal_cdf(int axis, double x) const;

    void sample_into(Rng& rng, std::span<double> out) const;

    // Same marginals with `shift` added to the first coordinate's location.
    DensitySpec shifted_first(double shift) const;

  private:
    Family family_;
    int dim_ = 1;
};

}  // namespace ipd
