#include "binmf/metrics.hpp"

#include <cmath>

#include "binmf/objectives.hpp"

namespace binmf {

double reconstruction_error(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a) {
    const NonNegMatrix ea = matmul(e, a);
    const double frob = frobenius_sq_diff(x.x(), ea);
    const double scale = static_cast<double>(x.samples()) * static_cast<double>(x.bands());
    return std::sqrt(frob / scale);
}

double reconstruction_error_feature(const Dataset& x, const NonNegMatrix& e,
                                    const NonNegMatrix& a, const KernelSpec& kernel) {
    const double j_feature = eval_j_feature(x, e, a, kernel);
    const double scale = static_cast<double>(x.samples()) * static_cast<double>(x.bands());
    return std::sqrt(2.0 * j_feature / scale);
}

MetricReport report(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                    const KernelSpec& kernel) {
    MetricReport out;
    out.re = reconstruction_error(x, e, a);
    out.re_phi = reconstruction_error_feature(x, e, a, kernel);
    out.bands = x.bands();
    out.samples = x.samples();
    out.rank = e.cols();
    out.kernel = kernel;
    return out;
}

}  // namespace binmf
