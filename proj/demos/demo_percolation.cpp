// Ties the missed-check process to bond percolation: the checks that do get
// measured, contracted onto the red matching, form a random bond graph on a
// kagome-like lattice. When that graph winds the torus the cycle moves anyon
// data around a handle (both directions for the clean e-m exchange, one for a
// string measurement); when it fragments, the cycle acts trivially. The
// critical miss rate is therefore one minus the kagome bond threshold.

#include <floqlab/percolation.hpp>
#include <floqlab/protocol.hpp>

#include <cstdio>
#include <vector>

using namespace floqlab;

int main() {
    const int L = 9;
    const HoneycombLattice lat(L);
    const Protocol proto(lat);
    Rng rng(7, 0);

    std::printf("single cycles at L = %d:\n", L);
    for (const double pm : {0.30, 0.48, 0.60}) {
        for (int s = 0; s < 3; ++s) {
            StabilizerState st = proto.initialize(rng);
            std::vector<std::uint8_t> missed;
            st.collapse(proto.string_op(StringKind::M, StringDir::X), rng);
            st.collapse(proto.string_op(StringKind::M, StringDir::Z), rng);
            const Channel ch = proto.one_cycle_channel(st, pm, rng, MissMode::BlueGreen, &missed);
            const perco::Graph g = perco::from_miss_sample(lat, missed);
            const perco::Span sp = perco::spans(g);
            std::printf("  p_m = %.2f  clusters = %2u  spans(x,z) = (%d,%d)  channel = %s\n", pm,
                        perco::clusters(g), sp.x ? 1 : 0, sp.z ? 1 : 0, to_string(ch));
        }
    }

    std::printf("\nkagome bond threshold from sizes 12, 24:\n");
    Rng trng(1, 0);
    if (const auto est = perco::threshold_estimate(perco::Kind::Kagome, {12, 24}, 400, trng))
        std::printf("  p_c = %.4f +- %.4f   nu = %.2f   (1 - p_c = %.4f)\n", est->p_c,
                    est->p_c_stderr, est->nu, 1.0 - est->p_c);
    else
        std::printf("  no crossing found\n");
    return 0;
}
