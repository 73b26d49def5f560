#include "qfock/normal_order.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace qfock {

namespace {

// Interned generator: kind in the top byte, label id below. Words of
// packed generators compare lexicographically, which fixes a canonical
// processing order for the worklist.
using Packed = std::uint32_t;
using PWord = std::vector<Packed>;

constexpr Packed pack(GenKind kind, std::uint32_t label) {
    return (Packed(kind) << 24) | label;
}
constexpr GenKind kind_of(Packed p) { return GenKind(p >> 24); }
constexpr std::uint32_t label_of(Packed p) { return p & 0x00ffffffu; }

// Value-identity interning of step-function labels so that words are
// comparable and the products created by rewriting are shared.
class LabelTable {
public:
    explicit LabelTable(GridPtr grid) : grid_(std::move(grid)) {}

    std::uint32_t intern(const StepFunction& f) {
        std::vector<std::uint64_t> key;
        key.reserve(2 * f.size());
        for (std::size_t k = 0; k < f.size(); ++k) {
            key.push_back(std::bit_cast<std::uint64_t>(f[k].real()));
            key.push_back(std::bit_cast<std::uint64_t>(f[k].imag()));
        }
        auto [it, fresh] = ids_.try_emplace(std::move(key),
                                            std::uint32_t(labels_.size()));
        if (fresh) labels_.push_back(f);
        return it->second;
    }

    const StepFunction& label(std::uint32_t id) const { return labels_[id]; }

    // <a, g> with both arguments interned, memoized.
    Cx inner_of(std::uint32_t a, std::uint32_t g) {
        auto [it, fresh] = inner_memo_.try_emplace(key(a, g), Cx());
        if (fresh) it->second = inner(labels_[a], labels_[g]);
        return it->second;
    }

    // id of conj(a) * g (the number label born from a B-commutator).
    std::uint32_t conj_mul(std::uint32_t a, std::uint32_t g) {
        auto [it, fresh] = conj_mul_memo_.try_emplace(key(a, g), 0u);
        if (fresh)
            it->second = intern(pointwise_mul(conjugate(labels_[a]),
                                              labels_[g]));
        return it->second;
    }

    // id of a * g (the creation label born from an N-commutator).
    std::uint32_t mul(std::uint32_t a, std::uint32_t g) {
        auto [it, fresh] = mul_memo_.try_emplace(key(a, g), 0u);
        if (fresh) it->second = intern(pointwise_mul(labels_[a], labels_[g]));
        return it->second;
    }

private:
    static std::uint64_t key(std::uint32_t a, std::uint32_t b) {
        return (std::uint64_t(a) << 32) | b;
    }

    GridPtr grid_;
    std::vector<StepFunction> labels_;
    std::map<std::vector<std::uint64_t>, std::uint32_t> ids_;
    std::map<std::uint64_t, Cx> inner_memo_;
    std::map<std::uint64_t, std::uint32_t> conj_mul_memo_;
    std::map<std::uint64_t, std::uint32_t> mul_memo_;
};

class Rewriter {
public:
    Rewriter(GridPtr grid, const ModelParams& params, std::size_t budget)
        : table_(std::move(grid)), c_(params.c), budget_(budget) {}

    LabelTable& table() { return table_; }

    Cx run(PWord start) {
        std::map<PWord, Cx> work;
        work.emplace(std::move(start), Cx(1.0, 0.0));
        terms_created_ = 1;
        Cx scalar(0.0, 0.0);

        while (!work.empty()) {
            auto it = work.begin();
            PWord w = it->first;
            Cx coef = it->second;
            work.erase(it);

            if (w.empty()) {
                scalar += coef;
                continue;
            }
            // Rightmost factor that is not a creation generator; all
            // factors to its right are creations.
            std::size_t i = w.size();
            while (i > 0 && kind_of(w[i - 1]) == GenKind::Create) --i;
            if (i == 0) continue;          // leftover creations pair to 0
            if (i == w.size()) continue;   // B or N hits the vacuum
            std::size_t at = i - 1;        // w[at] is B or N, w[at+1] is B+

            std::uint32_t a = label_of(w[at]);
            std::uint32_t g = label_of(w[at + 1]);
            if (kind_of(w[at]) == GenKind::Annihilate) {
                // B_a B+_g = B+_g B_a + 2c <a,g> + 4 N_{conj(a) g}
                PWord swapped = w;
                std::swap(swapped[at], swapped[at + 1]);
                add(work, std::move(swapped), coef);

                PWord dropped;
                dropped.reserve(w.size() - 2);
                dropped.insert(dropped.end(), w.begin(), w.begin() + at);
                dropped.insert(dropped.end(), w.begin() + at + 2, w.end());
                add(work, dropped, coef * (2.0 * c_ * table_.inner_of(a, g)));

                PWord numbered = dropped;
                numbered.insert(numbered.begin() + at,
                                pack(GenKind::Number, table_.conj_mul(a, g)));
                add(work, std::move(numbered), coef * 4.0);
            } else {
                // N_a B+_g = B+_g N_a + 2 B+_{a g}
                PWord swapped = w;
                std::swap(swapped[at], swapped[at + 1]);
                add(work, std::move(swapped), coef);

                PWord merged = w;
                merged[at] = pack(GenKind::Create, table_.mul(a, g));
                merged.erase(merged.begin() + at + 1);
                add(work, std::move(merged), coef * 2.0);
            }
        }
        return scalar;
    }

private:
    void add(std::map<PWord, Cx>& work, PWord w, Cx coef) {
        if (++terms_created_ > budget_)
            throw BudgetExceeded("rewrite budget of " +
                                 std::to_string(budget_) +
                                 " terms exceeded");
        auto [it, fresh] = work.try_emplace(std::move(w), coef);
        if (!fresh) {
            it->second += coef;
            if (it->second == Cx(0.0, 0.0)) work.erase(it);
        }
    }

    LabelTable table_;
    double c_;
    std::size_t budget_;
    std::size_t terms_created_ = 0;
};

}  // namespace

Cx vacuum_expectation(const Word& w, const ModelParams& params,
                      std::size_t budget) {
    validate(params);
    if (w.empty()) return Cx(1.0, 0.0);
    GridPtr grid = w.front().label.grid();
    for (const Generator& gen : w)
        require_same_grid(w.front().label, gen.label, "vacuum_expectation");

    Rewriter rw(grid, params, budget);
    PWord start;
    start.reserve(w.size());
    for (const Generator& gen : w)
        start.push_back(pack(gen.kind, rw.table().intern(gen.label)));
    return rw.run(std::move(start));
}

Cx bb_inner(const StepFunction& f, const StepFunction& g, int n, int m,
            const ModelParams& params, std::size_t budget) {
    require_same_grid(f, g, "bb_inner");
    if (n < 0 || m < 0) throw InputError("bb_inner needs n, m >= 0");
    if (n + m > 16) throw InputError("bb_inner supports n + m <= 16");
    Word w;
    w.reserve(std::size_t(n) + std::size_t(m));
    for (int i = 0; i < n; ++i) w.push_back({GenKind::Annihilate, f});
    for (int j = 0; j < m; ++j) w.push_back({GenKind::Create, g});
    return vacuum_expectation(w, params, budget);
}

}  // namespace qfock
