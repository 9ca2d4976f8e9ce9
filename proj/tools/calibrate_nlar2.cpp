// Prints the mean of the nonlinear AR(2) recursion for each innovation family.
// The output replaces the kNlar2Mean* constants in src/dgp.cpp.

#include <cstdio>

#include "secondwild/dgp.hpp"

using namespace secondwild;

int main() {
    for (InnovationKind kind : kAllInnovations) {
        DgpProcess process(ModelKind::nlar2, 0.0, kind,
                           RngStream(kNlar2CalibrationSeed, static_cast<std::uint64_t>(kind)));
        for (std::size_t t = 0; t < kNlar2CalibrationBurnIn; ++t) (void)process.next();
        double sum = 0.0;
        for (std::size_t t = 0; t < kNlar2CalibrationLength; ++t) sum += process.next();
        // DgpProcess subtracts the current constant; add it back
        const double mean = sum / static_cast<double>(kNlar2CalibrationLength) + nlar2_mean_offset(kind);
        std::printf("%-14s %.17g\n", innovation_name(kind).c_str(), mean);
    }
    return 0;
}
