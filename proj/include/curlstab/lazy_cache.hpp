#pragma once

#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>

namespace curlstab {

/// Thread-safe memo table. The first caller of a key builds the value; other
/// callers block on the same shared future.
template <typename Key, typename Value>
class LazyCache {
 public:
  using Pointer = std::shared_ptr<const Value>;

  Pointer get(const Key& key, const std::function<Pointer()>& build) const {
    std::shared_future<Pointer> future;
    std::promise<Pointer> promise;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        future = promise.get_future().share();
        entries_.emplace(key, future);
        owner = true;
      } else {
        future = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(build());
      } catch (...) {
        {
          std::lock_guard<std::mutex> lock(mutex_);
          entries_.erase(key);
        }
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_future<Pointer>> entries_;
};

}  // namespace curlstab
