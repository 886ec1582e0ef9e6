#pragma once

// Canonical univariate piecewise-linear functions over exact rationals.
//
// Piece i applies on [breakpoint[i-1], breakpoint[i]); the first piece on
// (-inf, breakpoint[0]) and the last on [breakpoint.back(), +inf). Functions
// may jump at a breakpoint. Two adjacent pieces are merged exactly when they
// are the same affine map, so the representation of a function is unique.

#include <span>
#include <utility>
#include <vector>

#include "vclab/rational.hpp"

namespace vclab {

struct Affine {
    Rational slope;
    Rational intercept;

    Rational operator()(const Rational& x) const { return slope * x + intercept; }

    friend bool operator==(const Affine&, const Affine&) = default;
};

class PwlFunction {
public:
    /// The identity map x -> x.
    PwlFunction() : pieces_{Affine{1, 0}} {}

    /// Validates strict ordering and pieces == breakpoints + 1, then canonicalizes.
    PwlFunction(std::vector<Rational> breakpoints, std::vector<Affine> pieces);

    static PwlFunction constant(Rational value);
    static PwlFunction affine(Rational slope, Rational intercept);
    static PwlFunction relu();

    const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<Affine>& pieces() const noexcept { return pieces_; }
    std::size_t piece_count() const noexcept { return pieces_.size(); }

    /// Index of the piece whose interval contains x.
    std::size_t piece_index(const Rational& x) const;
    Rational operator()(const Rational& x) const { return pieces_[piece_index(x)](x); }
    /// lim_{t -> b-} f(t) at breakpoint index i.
    Rational left_limit(std::size_t breakpoint) const { return pieces_[breakpoint](breakpoints_[breakpoint]); }

    bool is_continuous() const;
    /// 0 when every piece is constant, else 1.
    int degree() const;

    friend bool operator==(const PwlFunction&, const PwlFunction&) = default;

private:
    struct Canonical {};
    PwlFunction(Canonical, std::vector<Rational> breakpoints, std::vector<Affine> pieces)
        : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {}

    void canonicalize();

    std::vector<Rational> breakpoints_;
    std::vector<Affine> pieces_;

    friend PwlFunction canonicalize(const PwlFunction& f);
};

/// Returns f with redundant breakpoints merged. Constructed functions are
/// already canonical; this is idempotent.
PwlFunction canonicalize(const PwlFunction& f);

/// Activation function of a computation unit.
class Activation {
public:
    enum class Kind { relu, identity, pwl };

    static Activation relu() { return Activation(Kind::relu, {}); }
    static Activation identity() { return Activation(Kind::identity, {}); }
    static Activation piecewise(PwlFunction f) { return Activation(Kind::pwl, std::move(f)); }

    Kind kind() const noexcept { return kind_; }
    /// Equivalent PwlFunction (ReLU and identity included).
    const PwlFunction& function() const noexcept { return function_; }

    std::size_t pieces() const noexcept { return function_.piece_count(); }
    std::size_t breakpoints() const noexcept { return function_.breakpoints().size(); }
    int degree() const { return kind_ == Kind::pwl ? function_.degree() : 1; }

    Rational operator()(const Rational& x) const;

    friend bool operator==(const Activation&, const Activation&) = default;

private:
    Activation(Kind kind, PwlFunction f);

    Kind kind_;
    PwlFunction function_;
};

Rational eval(const PwlFunction& f, const Rational& x);

/// bias + sum of weight_j * f_j, canonical. Breakpoints are a subset of the
/// union of the inputs' breakpoints.
PwlFunction affine_combine(std::span<const std::pair<Rational, const PwlFunction*>> terms, const Rational& bias);
PwlFunction affine_combine(const std::vector<std::pair<Rational, PwlFunction>>& terms, const Rational& bias);

/// psi o g, computing every threshold crossing exactly.
///
/// A constant piece of g sitting exactly on a threshold of psi takes psi's
/// piece to the right of that threshold. Where g is decreasing and psi jumps,
/// the single crossing point itself follows the interval convention of the
/// result; everywhere else the composition is pointwise exact.
PwlFunction compose_activation(const Activation& psi, const PwlFunction& g);

std::size_t breakpoint_count(const PwlFunction& f);

/// Number of times f - level changes strict sign along [lo, hi], taking
/// one-sided limits at jumps into account. Each change forces at least one
/// point where f meets (or jumps across) the level.
std::size_t level_sign_changes(const PwlFunction& f, const Rational& level, const Rational& lo, const Rational& hi);

} // namespace vclab
