// Minimal use of the library: estimate lambda_c for one street model.
#include <streetperc/experiments.hpp>

#include <cstdio>

int main() {
    using namespace streetperc;
    const double gamma = 20.0, r_gamma = 4.5;
    ThresholdSetup setup{TessellationKind::PDT, gamma, r_gamma / gamma, 5.0, 40, {}};
    const auto est = estimate_threshold(setup, RngState{7, 0}, default_workers());
    for (const auto& pt : est.curve) std::printf("lambda=%.3f p=%.3f\n", pt.lambda, pt.p_hat);
    std::printf("lambda_c/gamma = %.4f (PBM %.4f)\n", est.lambda_c / gamma, pbm_threshold(r_gamma));
}
