#include "binmf/kernels.hpp"

#include <cmath>

namespace binmf {

namespace {

void check_lengths(std::span<const double> e, std::span<const double> z) {
    if (e.size() != z.size()) {
        throw ShapeError("kernel arguments have lengths " + std::to_string(e.size()) + " and " +
                         std::to_string(z.size()));
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

const char* kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::polynomial: return "polynomial";
        case KernelFamily::exponential: return "exponential";
        case KernelFamily::sigmoid: return "sigmoid";
    }
    return "?";
}

KernelFamily parse_kernel_family(const std::string& name) {
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "polynomial") return KernelFamily::polynomial;
    if (name == "exponential") return KernelFamily::exponential;
    if (name == "sigmoid") return KernelFamily::sigmoid;
    throw ConfigError("unknown kernel family '" + name + "'");
}

KernelSpec KernelSpec::gaussian(double sigma) {
    KernelSpec spec;
    spec.family = KernelFamily::gaussian;
    spec.sigma = sigma;
    spec.validate();
    return spec;
}

KernelSpec KernelSpec::polynomial(double c, int degree) {
    KernelSpec spec;
    spec.family = KernelFamily::polynomial;
    spec.c = c;
    spec.degree = degree;
    spec.validate();
    return spec;
}

KernelSpec KernelSpec::exponential(double sigma) {
    KernelSpec spec;
    spec.family = KernelFamily::exponential;
    spec.sigma = sigma;
    spec.validate();
    return spec;
}

KernelSpec KernelSpec::sigmoid(double gamma, double c) {
    KernelSpec spec;
    spec.family = KernelFamily::sigmoid;
    spec.gamma = gamma;
    spec.c = c;
    spec.validate();
    return spec;
}

void KernelSpec::validate() const {
    switch (family) {
        case KernelFamily::gaussian:
        case KernelFamily::exponential:
            if (!(sigma > 0.0) || !std::isfinite(sigma)) {
                throw ConfigError(std::string(kernel_family_name(family)) +
                                  " kernel requires sigma > 0, got " + std::to_string(sigma));
            }
            break;
        case KernelFamily::polynomial:
            if (degree < 1) {
                throw ConfigError("polynomial kernel requires degree >= 1, got " +
                                  std::to_string(degree));
            }
            if (!std::isfinite(c)) throw ConfigError("polynomial kernel offset is not finite");
            break;
        case KernelFamily::sigmoid:
            if (!std::isfinite(gamma) || !std::isfinite(c)) {
                throw ConfigError("sigmoid kernel parameters are not finite");
            }
            break;
    }
}

double kernel_eval(const KernelSpec& spec, std::span<const double> e, std::span<const double> z) {
    check_lengths(e, z);
    double value = 0.0;
    switch (spec.family) {
        case KernelFamily::gaussian:
            value = std::exp(-sq_distance(e, z) / (2.0 * spec.sigma * spec.sigma));
            break;
        case KernelFamily::polynomial:
            value = std::pow(dot(z, e) + spec.c, static_cast<double>(spec.degree));
            break;
        case KernelFamily::exponential:
            value = std::exp(-l1_distance(e, z) / (2.0 * spec.sigma * spec.sigma));
            break;
        case KernelFamily::sigmoid:
            value = std::tanh(spec.gamma * dot(z, e) + spec.c);
            break;
    }
    if (!std::isfinite(value)) {
        throw NumericError(std::string(kernel_family_name(spec.family)) +
                           " kernel produced a non-finite value");
    }
    return value;
}

std::vector<double> kernel_grad(const KernelSpec& spec, std::span<const double> e,
                                std::span<const double> z) {
    check_lengths(e, z);
    std::vector<double> grad(e.size(), 0.0);
    switch (spec.family) {
        case KernelFamily::gaussian: {
            const double k = kernel_eval(spec, e, z);
            const double scale = -k / (spec.sigma * spec.sigma);
            for (std::size_t i = 0; i < e.size(); ++i) grad[i] = scale * (e[i] - z[i]);
            break;
        }
        case KernelFamily::polynomial: {
            const double base = dot(z, e) + spec.c;
            const double scale =
                spec.degree * std::pow(base, static_cast<double>(spec.degree - 1));
            for (std::size_t i = 0; i < e.size(); ++i) grad[i] = scale * z[i];
            break;
        }
        case KernelFamily::exponential: {
            const double k = kernel_eval(spec, e, z);
            const double scale = -k / (2.0 * spec.sigma * spec.sigma);
            for (std::size_t i = 0; i < e.size(); ++i) grad[i] = scale * sign(e[i] - z[i]);
            break;
        }
        case KernelFamily::sigmoid: {
            const double th = std::tanh(spec.gamma * dot(z, e) + spec.c);
            const double scale = spec.gamma * (1.0 - th * th);  // sech² = 1 − tanh²
            for (std::size_t i = 0; i < e.size(); ++i) grad[i] = scale * z[i];
            break;
        }
    }
    return grad;
}

}  // namespace binmf
