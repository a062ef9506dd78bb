#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace effconv {

/// Infinite pull-based stream with a memoized prefix.
///
/// The generator is called once per new element, in order. Copies share the
/// same memo, so a stream handed to several consumers is only ever advanced
/// once per index. Pulls are serialized by an internal mutex. Memoized
/// elements never move, so references handed to visit() stay valid while
/// the stream is alive.
template <class T>
class Stream {
 public:
  using Generator = std::function<T()>;

  Stream() = default;
  explicit Stream(Generator gen) : state_(std::make_shared<State>(std::move(gen))) {}

  static Stream from_index(std::function<T(std::size_t)> term) {
    auto next = std::make_shared<std::size_t>(0);
    return Stream([term = std::move(term), next]() { return term((*next)++); });
  }

  static Stream constant(T value) {
    return Stream([value = std::move(value)]() { return value; });
  }

  /// Element i, pulling (and memoizing) everything before it.
  T at(std::size_t i) const {
    std::lock_guard<std::mutex> lock(state_->mu);
    fill(i + 1);
    return state_->memo[i];
  }

  /// The first n elements.
  std::vector<T> prefix(std::size_t n) const {
    std::lock_guard<std::mutex> lock(state_->mu);
    fill(n);
    return std::vector<T>(state_->memo.begin(), state_->memo.begin() + static_cast<std::ptrdiff_t>(n));
  }

  /// Visits elements [from, to) without copying the whole prefix.
  template <class F>
  void visit(std::size_t from, std::size_t to, F&& f) const {
    std::lock_guard<std::mutex> lock(state_->mu);
    fill(to);
    for (std::size_t i = from; i < to; ++i) f(state_->memo[i]);
  }

  std::size_t pulled() const {
    std::lock_guard<std::mutex> lock(state_->mu);
    return state_->memo.size();
  }

  bool valid() const { return static_cast<bool>(state_); }

 private:
  struct State {
    explicit State(Generator g) : gen(std::move(g)) {}
    std::mutex mu;
    Generator gen;
    std::deque<T> memo;
  };

  void fill(std::size_t n) const {
    while (state_->memo.size() < n) state_->memo.push_back(state_->gen());
  }

  std::shared_ptr<State> state_;
};

}  // namespace effconv
