#pragma once

#include <cstddef>

namespace spinflip {

/// Fixed-step classical RK4 for y' = apply(G(t), y), where the generator G is
/// evaluated once per distinct stage time (t, t + dt/2, t + dt) and reused by
/// the next step. `on_node(i, t, y)` is called for i = 0..steps and may modify
/// y (e.g. renormalize).
template <class State, class Generator, class Apply, class OnNode>
State rk4_propagate(State y, double t0, double t1, std::size_t steps, Generator&& generator,
                    Apply&& apply, OnNode&& on_node) {
  const double dt = (t1 - t0) / static_cast<double>(steps);
  auto node_time = [&](std::size_t i) {
    return i == steps ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps);
  };
  on_node(std::size_t{0}, t0, y);
  auto g0 = generator(t0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = node_time(i);
    const double tn = node_time(i + 1);
    const auto gm = generator(0.5 * (t + tn));
    auto g1 = generator(tn);
    const State k1 = apply(g0, y);
    const State k2 = apply(gm, y + (0.5 * dt) * k1);
    const State k3 = apply(gm, y + (0.5 * dt) * k2);
    const State k4 = apply(g1, y + dt * k3);
    y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    on_node(i + 1, tn, y);
    g0 = std::move(g1);
  }
  return y;
}

}  // namespace spinflip
