#include "stratum/symbol.hpp"

#include <atomic>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace stratum {

namespace {

class Interner {
 public:
  Interner() { lookup(""); }

  std::uint32_t lookup(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(name); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = ids_.find(name); it != ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  const std::string& name(std::uint32_t id) {
    std::shared_lock lock(mutex_);
    return names_[id];
  }

 private:
  std::shared_mutex mutex_;
  std::deque<std::string> names_;  // deque keeps references stable
  std::unordered_map<std::string_view, std::uint32_t> ids_;
};

Interner& interner() {
  static Interner instance;
  return instance;
}

std::atomic<std::uint64_t> fresh_counter{0};

}  // namespace

Symbol::Symbol(std::string_view name) : id_(interner().lookup(name)) {}

Symbol Symbol::fresh(std::string_view prefix) {
  std::string name = "#";
  name += prefix;
  name += std::to_string(fresh_counter.fetch_add(1));
  return Symbol(name);
}

const std::string& Symbol::name() const { return interner().name(id_); }

}  // namespace stratum
