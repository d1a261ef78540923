#pragma once

namespace tskam {

template <class F>
double symplecticity_defect(F&& f, const Phase12& x, const std::array<bool, 12>& angle_mask, double h) {
    Eigen::Matrix<double, 12, 12> J;
    for (int c = 0; c < 12; ++c) {
        const double hc = h * std::max(1.0, std::abs(x[c]));
        // fourth-order centred stencil: chart points close to a coordinate singularity have large
        // third derivatives
        Phase12 f1p, f1m, f2p, f2m;
        for (int k : {1, 2}) {
            Phase12 xp = x, xm = x;
            xp[c] += k * hc;
            xm[c] -= k * hc;
            (k == 1 ? f1p : f2p) = f(xp);
            (k == 1 ? f1m : f2m) = f(xm);
        }
        for (int r = 0; r < 12; ++r) {
            double d1 = f1p[r] - f1m[r], d2 = f2p[r] - f2m[r];
            if (angle_mask[r]) d1 = wrap_pi(d1), d2 = wrap_pi(d2);
            J(r, c) = (8 * d1 - d2) / (12 * hc);
        }
    }
    const auto Om = standard_omega();
    return (J.transpose() * Om * J - Om).cwiseAbs().maxCoeff();
}

}  // namespace tskam
