#pragma once

#include <variant>

#include "clab/conceptor.hpp"
#include "clab/conception.hpp"
#include "clab/types.hpp"

namespace clab {

/// The filter inserted between r and z in the update loop: nothing (z = r),
/// a conception vector (element-wise scaling) or a full conceptor matrix.
/// Morphing passes mixed weights/matrices through the same type.
class StateFilter {
public:
    static StateFilter none() { return StateFilter{}; }
    static StateFilter diagonal(Vector weights) { return StateFilter{std::move(weights)}; }
    static StateFilter diagonal(const ConceptionVector& c) { return StateFilter{c.weights}; }
    static StateFilter full(Matrix m) { return StateFilter{std::move(m)}; }
    static StateFilter full(const Conceptor& c) { return StateFilter{c.m}; }

    bool is_none() const { return std::holds_alternative<std::monostate>(f_); }

    Vector apply(const Vector& r) const {
        if (const auto* w = std::get_if<Vector>(&f_)) {
            if (w->size() != r.size())
                throw std::invalid_argument("StateFilter: dimension mismatch");
            return w->cwiseProduct(r);
        }
        if (const auto* m = std::get_if<Matrix>(&f_)) {
            if (m->cols() != r.size())
                throw std::invalid_argument("StateFilter: dimension mismatch");
            return *m * r;
        }
        return r;
    }

private:
    StateFilter() = default;
    explicit StateFilter(Vector w) : f_(std::move(w)) {}
    explicit StateFilter(Matrix m) : f_(std::move(m)) {}

    std::variant<std::monostate, Vector, Matrix> f_;
};

}  // namespace clab
