#pragma once

#include <cstdint>
#include <vector>

#include "qfock/fock.hpp"
#include "qfock/grid.hpp"

namespace qfock {

enum class GenKind : std::uint8_t { Create = 0, Annihilate = 1, Number = 2 };

/// One generator with a concrete step-function label.
struct Generator {
    GenKind kind;
    StepFunction label;
};

/// Formal product of generators, leftmost applied last, implicitly
/// right-terminated by the vacuum. Empty word means the vacuum itself.
using Word = std::vector<Generator>;

inline constexpr std::size_t kDefaultRewriteBudget = 10'000'000;

/// <Phi, w Phi> by exhaustive rewriting with the commutation relations:
///   B_a B+_g  ->  B+_g B_a + 2c <a,g> + 4 N_{conj(a) g}
///   N_a B+_g  ->  B+_g N_a + 2 B+_{a g}
/// applied at the rightmost non-creation factor (its right neighbour is
/// then a creation factor); terms whose rightmost factor annihilates the
/// vacuum are dropped, as are fully reduced terms with leftover creation
/// factors. The scalar coefficient of the empty word is the result.
Cx vacuum_expectation(const Word& w, const ModelParams& params,
                      std::size_t budget = kDefaultRewriteBudget);

/// <B+^n_f Phi, B+^m_g Phi> = <Phi, B_f^n B+^m_g Phi>, using that the
/// adjoint of a creation generator is the annihilation generator with
/// the same label. Zero for n != m by the grading of the space.
Cx bb_inner(const StepFunction& f, const StepFunction& g, int n, int m,
            const ModelParams& params,
            std::size_t budget = kDefaultRewriteBudget);

}  // namespace qfock
