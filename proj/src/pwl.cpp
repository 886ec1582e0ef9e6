#include "vclab/pwl.hpp"

#include <algorithm>
#include <optional>

#include "vclab/error.hpp"

namespace vclab {

PwlFunction::PwlFunction(std::vector<Rational> breakpoints, std::vector<Affine> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (pieces_.size() != breakpoints_.size() + 1) {
        throw DomainError("piecewise-linear function needs exactly one more piece than breakpoints");
    }
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i - 1] < breakpoints_[i])) throw DomainError("breakpoints must be strictly increasing");
    }
    canonicalize();
}

PwlFunction PwlFunction::constant(Rational value) { return PwlFunction(Canonical{}, {}, {Affine{0, std::move(value)}}); }

PwlFunction PwlFunction::affine(Rational slope, Rational intercept) {
    return PwlFunction(Canonical{}, {}, {Affine{std::move(slope), std::move(intercept)}});
}

PwlFunction PwlFunction::relu() { return PwlFunction(Canonical{}, {Rational(0)}, {Affine{0, 0}, Affine{1, 0}}); }

void PwlFunction::canonicalize() {
    std::vector<Rational> bps;
    std::vector<Affine> pcs;
    bps.reserve(breakpoints_.size());
    pcs.reserve(pieces_.size());
    pcs.push_back(std::move(pieces_.front()));
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        Affine& next = pieces_[i + 1];
        if (next == pcs.back()) continue;
        bps.push_back(std::move(breakpoints_[i]));
        pcs.push_back(std::move(next));
    }
    breakpoints_ = std::move(bps);
    pieces_ = std::move(pcs);
}

PwlFunction canonicalize(const PwlFunction& f) {
    PwlFunction g = f;
    g.canonicalize();
    return g;
}

std::size_t PwlFunction::piece_index(const Rational& x) const {
    // first breakpoint strictly greater than x; piece i covers [b_{i-1}, b_i)
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return static_cast<std::size_t>(it - breakpoints_.begin());
}

bool PwlFunction::is_continuous() const {
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (pieces_[i](breakpoints_[i]) != pieces_[i + 1](breakpoints_[i])) return false;
    }
    return true;
}

int PwlFunction::degree() const {
    for (const Affine& p : pieces_) {
        if (!p.slope.is_zero()) return 1;
    }
    return 0;
}

Activation::Activation(Kind kind, PwlFunction f) : kind_(kind), function_(std::move(f)) {
    if (kind_ == Kind::relu) function_ = PwlFunction::relu();
    if (kind_ == Kind::identity) function_ = PwlFunction();
}

Rational Activation::operator()(const Rational& x) const {
    switch (kind_) {
    case Kind::relu: return x.sign() > 0 ? x : Rational(0);
    case Kind::identity: return x;
    case Kind::pwl: break;
    }
    return function_(x);
}

Rational eval(const PwlFunction& f, const Rational& x) { return f(x); }

PwlFunction affine_combine(std::span<const std::pair<Rational, const PwlFunction*>> terms, const Rational& bias) {
    std::vector<Rational> cuts;
    for (const auto& [w, f] : terms) cuts.insert(cuts.end(), f->breakpoints().begin(), f->breakpoints().end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<std::size_t> cursor(terms.size(), 0);
    std::vector<Affine> pieces;
    pieces.reserve(cuts.size() + 1);
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
        Affine sum{0, bias};
        for (std::size_t j = 0; j < terms.size(); ++j) {
            const auto& [w, f] = terms[j];
            const auto& bps = f->breakpoints();
            // interval k starts at cuts[k-1]; advance to the piece containing it
            if (k > 0) {
                while (cursor[j] < bps.size() && bps[cursor[j]] <= cuts[k - 1]) ++cursor[j];
            }
            if (w.is_zero()) continue;
            const Affine& p = f->pieces()[cursor[j]];
            sum.slope += w * p.slope;
            sum.intercept += w * p.intercept;
        }
        pieces.push_back(std::move(sum));
    }
    return PwlFunction(std::move(cuts), std::move(pieces));
}

PwlFunction affine_combine(const std::vector<std::pair<Rational, PwlFunction>>& terms, const Rational& bias) {
    std::vector<std::pair<Rational, const PwlFunction*>> refs;
    refs.reserve(terms.size());
    for (const auto& [w, f] : terms) refs.emplace_back(w, &f);
    return affine_combine(std::span<const std::pair<Rational, const PwlFunction*>>(refs), bias);
}

PwlFunction compose_activation(const Activation& psi, const PwlFunction& g) {
    if (psi.kind() == Activation::Kind::identity) return g;
    const PwlFunction& outer = psi.function();
    const auto& thresholds = outer.breakpoints();

    std::vector<Rational> bps;
    std::vector<Affine> pieces;
    auto emit = [&](std::optional<Rational> start, const Affine& inner, const Rational& sample) {
        const Affine& o = outer.pieces()[outer.piece_index(inner(sample))];
        if (start) bps.push_back(std::move(*start));
        pieces.push_back(Affine{o.slope * inner.slope, o.slope * inner.intercept + o.intercept});
    };

    const auto& gb = g.breakpoints();
    for (std::size_t i = 0; i < g.piece_count(); ++i) {
        const Affine& inner = g.pieces()[i];
        std::optional<Rational> lo = i == 0 ? std::nullopt : std::optional<Rational>(gb[i - 1]);
        std::optional<Rational> hi = i == gb.size() ? std::nullopt : std::optional<Rational>(gb[i]);

        // crossing points strictly inside (lo, hi), ascending
        std::vector<Rational> cuts;
        if (!inner.slope.is_zero()) {
            for (const Rational& t : thresholds) {
                Rational x = (t - inner.intercept) / inner.slope;
                if ((!lo || *lo < x) && (!hi || x < *hi)) cuts.push_back(std::move(x));
            }
            std::sort(cuts.begin(), cuts.end());
        }

        // sub-intervals [lo, c0), [c0, c1), ..., [c_last, hi)
        std::optional<Rational> start = lo;
        for (std::size_t s = 0; s <= cuts.size(); ++s) {
            std::optional<Rational> end = s < cuts.size() ? std::optional<Rational>(cuts[s]) : hi;
            Rational sample;
            if (start && end) sample = (*start + *end) / 2;
            else if (start) sample = *start + 1;
            else if (end) sample = *end - 1;
            else sample = 0;
            emit(start, inner, sample);
            start = end;
        }
    }
    return PwlFunction(std::move(bps), std::move(pieces));
}

std::size_t breakpoint_count(const PwlFunction& f) { return f.breakpoints().size(); }

std::size_t level_sign_changes(const PwlFunction& f, const Rational& level, const Rational& lo, const Rational& hi) {
    if (hi < lo) throw DomainError("empty range for level crossing count");
    std::vector<int> signs;
    auto push = [&](const Rational& v) {
        int s = (v - level).sign();
        if (s != 0) signs.push_back(s);
    };
    push(f(lo));
    const auto& bps = f.breakpoints();
    for (std::size_t i = 0; i < bps.size(); ++i) {
        if (bps[i] <= lo || hi < bps[i]) continue;
        push(f.left_limit(i));
        push(f(bps[i]));
    }
    push(f(hi));
    std::size_t changes = 0;
    for (std::size_t i = 1; i < signs.size(); ++i) changes += signs[i] != signs[i - 1];
    return changes;
}

} // namespace vclab
