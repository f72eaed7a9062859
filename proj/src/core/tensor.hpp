#pragma once

#include <atomic>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "errors.hpp"

namespace jcrnet {

using Shape = std::vector<int>;

inline std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (int e : shape) {
        if (e <= 0) throw DimensionError("tensor extent must be positive");
        n *= static_cast<std::size_t>(e);
    }
    return n;
}

inline std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
    os << ')';
    return os.str();
}

template <class S> struct Node;

// When off, ops do not record tape nodes; used for inference and for the
// re-evaluations inside finite-difference checks.
inline bool& grad_mode() {
    thread_local bool enabled = true;
    return enabled;
}

struct NoGradScope {
    NoGradScope() : prev(grad_mode()) { grad_mode() = false; }
    ~NoGradScope() { grad_mode() = prev; }
    bool prev;
};

inline std::uint64_t next_node_id() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
}

// Shared-storage tensor handle. Copying a Tensor aliases the same buffer;
// data is written only at construction and by backward's grad accumulation.
template <class S>
class Tensor {
public:
    struct Impl {
        Shape shape;
        std::vector<S> data;
        std::vector<S> grad;  // allocated lazily, same length as data
        bool requires_grad = false;
        std::shared_ptr<Node<S>> creator;
    };

    Tensor() = default;

    static Tensor zeros(Shape shape, bool requires_grad = false) {
        Tensor t;
        t.impl_ = std::make_shared<Impl>();
        t.impl_->shape = std::move(shape);
        t.impl_->data.assign(shape_numel(t.impl_->shape), S(0));
        t.impl_->requires_grad = requires_grad;
        return t;
    }

    static Tensor full(Shape shape, S value, bool requires_grad = false) {
        Tensor t = zeros(std::move(shape), requires_grad);
        std::fill(t.data().begin(), t.data().end(), value);
        return t;
    }

    static Tensor from_data(Shape shape, std::vector<S> values, bool requires_grad = false) {
        Tensor t;
        t.impl_ = std::make_shared<Impl>();
        std::size_t n = shape_numel(shape);
        if (n != values.size())
            throw DimensionError("tensor data length " + std::to_string(values.size()) +
                                 " does not match shape " + shape_str(shape));
        t.impl_->shape = std::move(shape);
        t.impl_->data = std::move(values);
        t.impl_->requires_grad = requires_grad;
        for (S v : t.impl_->data)
            if (!std::isfinite(static_cast<double>(v)))
                throw NumericError("tensor constructed with non-finite value");
        return t;
    }

    static Tensor scalar(S value, bool requires_grad = false) {
        return from_data({1}, {value}, requires_grad);
    }

    bool defined() const { return impl_ != nullptr; }
    const Shape& shape() const { return impl_->shape; }
    std::size_t numel() const { return impl_->data.size(); }
    int extent(std::size_t axis) const { return impl_->shape.at(axis); }

    std::vector<S>& data() { return impl_->data; }
    const std::vector<S>& data() const { return impl_->data; }

    S value() const {
        if (numel() != 1) throw UsageError("value() requires a single-element tensor");
        return impl_->data[0];
    }

    bool requires_grad() const { return impl_->requires_grad; }
    void set_requires_grad(bool rg) { impl_->requires_grad = rg; }

    bool has_grad() const { return !impl_->grad.empty(); }
    std::vector<S>& grad() {
        if (impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), S(0));
        return impl_->grad;
    }
    const std::vector<S>& grad() const { return impl_->grad; }
    void clear_grad() {
        impl_->grad.clear();
        impl_->grad.shrink_to_fit();
    }
    void zero_grad() {
        if (!impl_->grad.empty()) std::fill(impl_->grad.begin(), impl_->grad.end(), S(0));
    }

    std::shared_ptr<Node<S>> creator() const { return impl_->creator; }
    void set_creator(std::shared_ptr<Node<S>> node) { impl_->creator = std::move(node); }

    Impl* raw() const { return impl_.get(); }
    std::weak_ptr<Impl> weak_impl() const { return impl_; }

    bool all_finite() const {
        for (S v : impl_->data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    // Deep copy of data only (no graph edge, no grad).
    Tensor detached_copy() const {
        Tensor t;
        t.impl_ = std::make_shared<Impl>();
        t.impl_->shape = impl_->shape;
        t.impl_->data = impl_->data;
        t.impl_->requires_grad = false;
        return t;
    }

private:
    std::shared_ptr<Impl> impl_;
};

// One recorded operation. Inputs are held by handle (keeps the graph alive);
// the output is weakly referenced to avoid a cycle.
template <class S>
struct Node {
    std::uint64_t id = 0;
    const char* op = "";
    std::vector<Tensor<S>> inputs;
    std::weak_ptr<typename Tensor<S>::Impl> output;
    // Called with the output's accumulated gradient; must add into the
    // inputs' grad buffers in a fixed order.
    std::function<void(const std::vector<S>&)> backward;
};

template <class S>
inline void attach_node(Tensor<S>& out, const char* op, std::vector<Tensor<S>> inputs,
                        std::function<void(const std::vector<S>&)> backward) {
    bool needs = false;
    for (const auto& in : inputs)
        if (in.requires_grad()) needs = true;
    if (!needs || !grad_mode()) return;
    auto node = std::make_shared<Node<S>>();
    node->id = next_node_id();
    node->op = op;
    node->inputs = std::move(inputs);
    node->backward = std::move(backward);
    node->output = out.weak_impl();
    out.set_requires_grad(true);
    out.set_creator(std::move(node));
}

// Reverse-mode sweep. Visits each recorded node exactly once, in reverse
// creation order, accumulating grads into every requires_grad tensor
// reachable from `loss`.
template <class S>
void backward(Tensor<S> loss) {
    if (!loss.defined() || loss.numel() != 1)
        throw UsageError("backward requires a scalar loss tensor");
    if (!loss.creator()) return;  // leaf: nothing to propagate

    std::vector<std::shared_ptr<Node<S>>> order;
    std::unordered_set<const void*> seen;
    std::vector<std::shared_ptr<Node<S>>> stack{loss.creator()};
    seen.insert(loss.creator().get());
    while (!stack.empty()) {
        auto node = stack.back();
        stack.pop_back();
        order.push_back(node);
        for (const auto& in : node->inputs) {
            auto c = in.creator();
            if (c && seen.insert(c.get()).second) stack.push_back(c);
        }
    }
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a->id > b->id; });

    loss.grad().assign(1, S(1));
    for (const auto& node : order) {
        auto out = node->output.lock();
        if (!out || out->grad.empty()) continue;
        node->backward(out->grad);
    }
}

}  // namespace jcrnet
