#pragma once

#include <concepts>
#include <functional>
#include <utility>

namespace ldg3 {

/// A location in [0,1] carried together with its distance to the right end.
/// Inside the boundary layer at x = 1 the distance is the accurate quantity;
/// `1 - x` recomputed from a rounded x loses most of its digits when the
/// fine elements are O(eps) wide.
struct Point {
    double x = 0.0;
    double from_right = 1.0;

    static Point at(double x) { return {x, 1.0 - x}; }
};

/// Scalar function on [0,1]. Accepts either `double(double)` callables or
/// `double(Point)` callables that want the accurate distance to x = 1.
class Field {
public:
    Field() = default;

    template <class F>
        requires(std::invocable<const F&, Point> && !std::same_as<std::decay_t<F>, Field>)
    Field(F fn) : fn_(std::move(fn)) {}

    template <class F>
        requires(std::invocable<const F&, double> && !std::invocable<const F&, Point> &&
                 !std::same_as<std::decay_t<F>, Field>)
    Field(F fn) : fn_([g = std::move(fn)](Point p) { return static_cast<double>(g(p.x)); }) {}

    double operator()(Point p) const { return fn_(p); }
    double operator()(double x) const { return fn_(Point::at(x)); }

    explicit operator bool() const { return static_cast<bool>(fn_); }

    static Field constant(double c) {
        return Field([c](Point) { return c; });
    }

private:
    std::function<double(Point)> fn_;
};

}  // namespace ldg3
