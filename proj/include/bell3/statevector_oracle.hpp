#ifndef BELL3_STATEVECTOR_ORACLE_HPP
#define BELL3_STATEVECTOR_ORACLE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bell3 {

enum class PauliAxis { X, Y };

namespace detail {

using cvec = std::vector<std::complex<double>>;

/// Applies sigma_x or sigma_y on the given qubit of a dense state vector.
inline void apply_pauli(cvec& psi, int qubit, PauliAxis axis) {
    const std::size_t stride = std::size_t(1) << qubit;
    const std::complex<double> im(0.0, 1.0);
    for (std::size_t hi = 0; hi < psi.size(); hi += 2 * stride)
        for (std::size_t lo = 0; lo < stride; ++lo) {
            std::complex<double>& a0 = psi[hi + lo];
            std::complex<double>& a1 = psi[hi + lo + stride];
            if (axis == PauliAxis::X) {
                std::swap(a0, a1);
            } else {
                // sigma_y |0> = i|1>,  sigma_y |1> = -i|0>
                std::complex<double> t = a0;
                a0 = -im * a1;
                a1 = im * t;
            }
        }
}

}  // namespace detail

/// Exact quantum expectation of a product of Pauli-x/-y observables on the
/// GHZ-Werner state V|GHZ><GHZ| + (1-V) I/2^N, computed from an explicit
/// 2^N-dimensional state vector plus the traced noise term. Independent of
/// the tensor constructor; used as its oracle.
inline double statevector_correlation_oracle(int n_parties, double visibility,
                                             const std::vector<PauliAxis>& axes) {
    if (n_parties < 2 || n_parties > 10)
        throw std::invalid_argument("n_parties must be in [2, 10]");
    if (int(axes.size()) != n_parties)
        throw std::invalid_argument("need one axis per party");
    const std::size_t dim = std::size_t(1) << n_parties;

    detail::cvec psi(dim, 0.0);
    psi[0] = psi[dim - 1] = 1.0 / std::sqrt(2.0);

    detail::cvec opsi = psi;
    for (int q = 0; q < n_parties; ++q)
        detail::apply_pauli(opsi, q, axes[q]);

    std::complex<double> ghz_term = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        ghz_term += std::conj(psi[i]) * opsi[i];

    // tr(O)/2^N for the noise part; each Pauli maps a basis state to the
    // bit-flipped one with a phase, so track (target, phase) per basis state
    std::complex<double> trace = 0.0;
    const std::complex<double> im(0.0, 1.0);
    for (std::size_t b = 0; b < dim; ++b) {
        std::size_t target = b;
        std::complex<double> phase = 1.0;
        for (int q = 0; q < n_parties; ++q) {
            bool bit = (target >> q) & 1u;
            if (axes[q] == PauliAxis::Y)
                phase *= bit ? -im : im;
            target ^= std::size_t(1) << q;
        }
        if (target == b)
            trace += phase;
    }

    return visibility * ghz_term.real() +
           (1.0 - visibility) * trace.real() / double(dim);
}

}  // namespace bell3

#endif
