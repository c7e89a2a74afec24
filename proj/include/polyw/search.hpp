#pragma once

// Bounded exhaustive search for closed w-polygonal surfaces.
//
// Disk multisets are tried in order of disk count, then total boundary
// length, then power sequence. For each multiset the least unpaired slot is
// paired first, with partners in increasing slot order, so the first
// certified leaf carries the lexicographically least pairing.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "polyw/complex.hpp"
#include "polyw/error.hpp"
#include "polyw/words.hpp"

namespace polyw {

struct SearchBounds {
  int max_disks = 2;
  // Bound on the total number of boundary slots, sum of |k_i| * |w|.
  int max_edges = 64;
  // Allowed absolute disk powers.
  std::vector<int> powers{1, 2};
  bool allow_negative_powers = false;
  // Zero means no limit.
  std::chrono::milliseconds time_budget{0};
  int jobs = 1;
};

struct SearchProgress {
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  std::size_t multisets_done = 0;
  std::size_t multisets_total = 0;
  std::vector<DiskSpec> current;
};

struct SearchOutcome {
  enum class Status { found, exhausted, timed_out };

  Status status = Status::exhausted;
  std::optional<PolygonalityCertificate> certificate;
  SearchBounds bounds;
  SearchProgress progress;

  bool found() const { return status == Status::found; }
};

inline const char* to_string(SearchOutcome::Status s) {
  switch (s) {
    case SearchOutcome::Status::found:
      return "found";
    case SearchOutcome::Status::exhausted:
      return "exhausted";
    default:
      return "timed-out";
  }
}

inline void validate(const SearchBounds& b, const CyclicWord& w) {
  if (b.max_disks < 1) throw precondition_error("max_disks must be at least 1");
  if (b.max_edges < static_cast<int>(w.size())) throw precondition_error("max_edges must be at least |w|");
  if (b.powers.empty()) throw precondition_error("at least one disk power is required");
  for (int k : b.powers) {
    if (k < 1) throw precondition_error("powers are given as absolute values >= 1");
  }
  if (b.jobs < 1) throw precondition_error("jobs must be at least 1");
}

// Disk multisets within bounds, each sorted by decreasing |k| with positive
// before negative, in search order.
inline std::vector<std::vector<DiskSpec>> disk_multisets(const CyclicWord& w, const SearchBounds& b) {
  std::vector<int> choices;
  std::vector<int> abs_sorted = b.powers;
  std::sort(abs_sorted.begin(), abs_sorted.end(), std::greater<>());
  abs_sorted.erase(std::unique(abs_sorted.begin(), abs_sorted.end()), abs_sorted.end());
  for (int k : abs_sorted) {
    choices.push_back(k);
    if (b.allow_negative_powers) choices.push_back(-k);
  }
  const long long n = static_cast<long long>(w.size());
  std::vector<std::vector<DiskSpec>> out;
  std::vector<DiskSpec> cur;
  const std::function<void(std::size_t, long long, int)> rec = [&](std::size_t from, long long len, int left) {
    if (!cur.empty()) out.push_back(cur);
    if (left == 0) return;
    for (std::size_t i = from; i < choices.size(); ++i) {
      const long long add = std::abs(choices[i]) * n;
      if (len + add > b.max_edges) continue;
      cur.push_back({choices[i]});
      rec(i, len + add, left - 1);
      cur.pop_back();
    }
  };
  rec(0, 0, b.max_disks);
  const auto key = [&](const std::vector<DiskSpec>& d) {
    long long len = 0;
    for (DiskSpec x : d) len += std::abs(x.power);
    std::vector<int> seq;
    for (DiskSpec x : d) seq.push_back(-2 * std::abs(x.power) + (x.power < 0 ? 1 : 0));
    return std::make_tuple(d.size(), len, seq);
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
  return out;
}

namespace detail {

struct SearchControl {
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
  std::atomic<bool> timed_out{false};
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> leaves{0};
};

// Backtracking over side-pairings of one disk multiset. Vertex classes live
// in a union-find with an undo log; each class counts, per (generator,
// direction), completed edges and still-unpaired slot ends at the vertex.
class PairingSearch {
 public:
  // Return false from the visitor to stop the search.
  using Visitor = std::function<bool(const std::vector<SlotPair>&)>;

  PairingSearch(const CyclicWord& w, const std::vector<DiskSpec>& disks, SearchControl& ctl)
      : w_(w), disks_(disks), ctl_(ctl), rank_(w.rank()) {
    for (std::size_t d = 0; d < disks.size(); ++d) {
      disk_offset_.push_back(static_cast<int>(total_));
      const std::size_t len = disk_length(w, disks[d]);
      for (std::size_t j = 0; j < len; ++j) {
        const Letter x = slot_letter(w, disks[d].power, static_cast<long long>(j));
        const int start = static_cast<int>(total_ + j);
        const int end = static_cast<int>(total_ + (j + 1) % len);
        slot_.push_back({static_cast<int>(d), static_cast<int>(j), x.generator(), x.sign() > 0 ? start : end,
                         x.sign() > 0 ? end : start});
      }
      total_ += len;
      disk_len_.push_back(static_cast<int>(len));
    }
    parent_.resize(total_);
    size_.assign(total_, 1);
    counts_.assign(total_ * width(), 0);
    for (std::size_t c = 0; c < total_; ++c) parent_[c] = static_cast<int>(c);
    for (const SlotInfo& s : slot_) {
      ++counts_[cell(s.tail, s.gen, 0, 1)];
      ++counts_[cell(s.head, s.gen, 1, 1)];
    }
    partner_.assign(total_, -1);
    paired_in_disk_.assign(disks.size(), 0);
  }

  // Every generator must label an even number of slots.
  bool parity_ok() const {
    std::vector<int> c(static_cast<std::size_t>(rank_) + 1, 0);
    for (const SlotInfo& s : slot_) ++c[static_cast<std::size_t>(s.gen)];
    return std::all_of(c.begin(), c.end(), [](int x) { return x % 2 == 0; });
  }

  // Candidate partners of slot 0: the top-level branches.
  std::vector<int> branches() const { return candidates(0); }

  // Explores the subtree where slot 0 is paired with `first`. Returns false
  // when the visitor or the controller stopped the search.
  bool run_branch(int first, const Visitor& visit, const std::atomic<bool>* cancel = nullptr) {
    cancel_ = cancel;
    const std::size_t mark = log_.size();
    bool go = true;
    if (pair(0, first)) go = dfs(visit);
    unpair(0, first, mark);
    ctl_.nodes.fetch_add(local_nodes_ & 1023U, std::memory_order_relaxed);
    local_nodes_ = 0;
    return go;
  }

  std::vector<SlotPair> current_pairs() const {
    std::vector<SlotPair> out;
    for (std::size_t g = 0; g < total_; ++g) {
      const int p = partner_[g];
      if (p > static_cast<int>(g)) out.push_back({to_slot(static_cast<int>(g)), to_slot(p)});
    }
    return out;
  }

 private:
  struct SlotInfo {
    int disk;
    int pos;
    int gen;
    int tail;  // global corner index
    int head;
  };

  std::size_t width() const { return static_cast<std::size_t>(rank_) * 4; }
  // kind 0: completed edges, 1: unpaired slot ends.
  std::size_t cell(int corner_root, int gen, int role, int kind) const {
    return static_cast<std::size_t>(corner_root) * width() + static_cast<std::size_t>(((gen - 1) * 2 + role) * 2 + kind);
  }
  Slot to_slot(int g) const { return {slot_[static_cast<std::size_t>(g)].disk, slot_[static_cast<std::size_t>(g)].pos}; }

  int find(int x) const {
    while (parent_[static_cast<std::size_t>(x)] != x) x = parent_[static_cast<std::size_t>(x)];
    return x;
  }
  void set(int* p, int v) {
    log_.push_back({p, *p});
    *p = v;
  }
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    set(&parent_[static_cast<std::size_t>(b)], a);
    set(&size_[static_cast<std::size_t>(a)], size_[static_cast<std::size_t>(a)] + size_[static_cast<std::size_t>(b)]);
    for (std::size_t k = 0; k < width(); ++k) {
      int* dst = &counts_[static_cast<std::size_t>(a) * width() + k];
      const int add = counts_[static_cast<std::size_t>(b) * width() + k];
      if (add) set(dst, *dst + add);
    }
    return a;
  }
  bool class_ok(int root) const {
    for (std::size_t k = 0; k < width(); k += 2) {
      const int c = counts_[static_cast<std::size_t>(root) * width() + k];
      const int u = counts_[static_cast<std::size_t>(root) * width() + k + 1];
      if (c >= 2 || (c >= 1 && u >= 1) || u >= 3) return false;
    }
    return true;
  }
  void bump(std::size_t i, int delta) { set(&counts_[i], counts_[i] + delta); }

  // Applies the pair; returns false if it creates an immersion violation or
  // closes a component with chi >= its disk count. The caller undoes it.
  bool pair(int s, int t) {
    const SlotInfo& a = slot_[static_cast<std::size_t>(s)];
    const SlotInfo& b = slot_[static_cast<std::size_t>(t)];
    set(&partner_[static_cast<std::size_t>(s)], t);
    set(&partner_[static_cast<std::size_t>(t)], s);
    bump(cell(find(a.tail), a.gen, 0, 1), -1);
    bump(cell(find(a.head), a.gen, 1, 1), -1);
    bump(cell(find(b.tail), b.gen, 0, 1), -1);
    bump(cell(find(b.head), b.gen, 1, 1), -1);
    const int rt = unite(a.tail, b.tail);
    bump(cell(rt, a.gen, 0, 0), 1);
    const int rh = unite(a.head, b.head);
    bump(cell(rh, a.gen, 1, 0), 1);
    set(&paired_in_disk_[static_cast<std::size_t>(a.disk)], paired_in_disk_[static_cast<std::size_t>(a.disk)] + 1);
    set(&paired_in_disk_[static_cast<std::size_t>(b.disk)], paired_in_disk_[static_cast<std::size_t>(b.disk)] + 1);
    if (!class_ok(find(a.tail)) || !class_ok(find(a.head))) return false;
    if (full(a.disk) && !closed_component_ok(a.disk)) return false;
    if (b.disk != a.disk && full(b.disk) && !closed_component_ok(b.disk)) return false;
    return true;
  }
  void unpair(int, int, std::size_t mark) {
    while (log_.size() > mark) {
      *log_.back().first = log_.back().second;
      log_.pop_back();
    }
  }

  bool full(int d) const { return paired_in_disk_[static_cast<std::size_t>(d)] == disk_len_[static_cast<std::size_t>(d)]; }

  // If every disk reachable from d is fully paired, the component is final.
  bool closed_component_ok(int d0) const {
    std::vector<bool> in(disks_.size(), false);
    std::vector<int> stack{d0};
    in[static_cast<std::size_t>(d0)] = true;
    int faces = 0;
    long long slots = 0;
    std::vector<int> roots;
    while (!stack.empty()) {
      const int d = stack.back();
      stack.pop_back();
      if (!full(d)) return true;
      ++faces;
      const int off = disk_offset_[static_cast<std::size_t>(d)];
      for (int j = 0; j < disk_len_[static_cast<std::size_t>(d)]; ++j) {
        ++slots;
        roots.push_back(find(off + j));
        const int p = partner_[static_cast<std::size_t>(off + j)];
        const int pd = slot_[static_cast<std::size_t>(p)].disk;
        if (!in[static_cast<std::size_t>(pd)]) {
          in[static_cast<std::size_t>(pd)] = true;
          stack.push_back(pd);
        }
      }
    }
    std::sort(roots.begin(), roots.end());
    const long long v = std::unique(roots.begin(), roots.end()) - roots.begin();
    const long long chi = v - slots / 2 + faces;
    return chi < faces;
  }

  std::vector<int> candidates(int s) const {
    std::vector<int> out;
    const int g = slot_[static_cast<std::size_t>(s)].gen;
    for (int t = s + 1; t < static_cast<int>(total_); ++t) {
      if (partner_[static_cast<std::size_t>(t)] < 0 && slot_[static_cast<std::size_t>(t)].gen == g) out.push_back(t);
    }
    return out;
  }

  bool should_stop() {
    if (cancel_ && cancel_->load(std::memory_order_relaxed)) return true;
    if (ctl_.timed_out.load(std::memory_order_relaxed)) return true;
    if ((++local_nodes_ & 1023U) == 0) {
      ctl_.nodes.fetch_add(1024, std::memory_order_relaxed);
      if (ctl_.has_deadline && std::chrono::steady_clock::now() > ctl_.deadline) {
        ctl_.timed_out.store(true);
        return true;
      }
    }
    return false;
  }

  bool dfs(const Visitor& visit) {
    if (should_stop()) return false;
    int s = -1;
    for (int g = 0; g < static_cast<int>(total_); ++g) {
      if (partner_[static_cast<std::size_t>(g)] < 0) {
        s = g;
        break;
      }
    }
    if (s < 0) {
      ctl_.leaves.fetch_add(1, std::memory_order_relaxed);
      return visit(current_pairs());
    }
    for (int t : candidates(s)) {
      const std::size_t mark = log_.size();
      bool go = true;
      if (pair(s, t)) go = dfs(visit);
      unpair(s, t, mark);
      if (!go) return false;
    }
    return true;
  }

  const CyclicWord& w_;
  std::vector<DiskSpec> disks_;
  SearchControl& ctl_;
  int rank_;
  std::size_t total_ = 0;
  std::vector<SlotInfo> slot_;
  std::vector<int> disk_offset_;
  std::vector<int> disk_len_;
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> counts_;
  std::vector<int> partner_;
  std::vector<int> paired_in_disk_;
  std::vector<std::pair<int*, int>> log_;
  const std::atomic<bool>* cancel_ = nullptr;
  std::uint64_t local_nodes_ = 0;
};

inline void start_clock(SearchControl& ctl, const SearchBounds& b) {
  if (b.time_budget.count() > 0) {
    ctl.has_deadline = true;
    ctl.deadline = std::chrono::steady_clock::now() + b.time_budget;
  }
}

// Runs fn(i) for i in [0, count) on `jobs` threads, taking indices in order.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int n = std::min<int>(jobs, static_cast<int>(count));
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Words on one generator bound no polygonal surface: each vertex has one
// incoming and one outgoing edge, so chi = m.
inline bool degenerate(const CyclicWord& w) { return w.generator_count() < 2; }

}  // namespace detail

// Least certificate within bounds, or a complete negative for the bounds, or
// a timeout. Proper powers short-circuit to the declarative certificate.
inline SearchOutcome decide_polygonal(const CyclicWord& w, const SearchBounds& bounds) {
  validate(bounds, w);
  SearchOutcome out;
  out.bounds = bounds;
  if (is_proper_power(w)) {
    out.status = SearchOutcome::Status::found;
    out.certificate = declarative_certificate(w);
    return out;
  }
  if (detail::degenerate(w)) return out;

  detail::SearchControl ctl;
  detail::start_clock(ctl, bounds);
  const auto multisets = disk_multisets(w, bounds);
  out.progress.multisets_total = multisets.size();
  for (const auto& disks : multisets) {
    out.progress.current = disks;
    detail::PairingSearch probe(w, disks, ctl);
    if (probe.parity_ok()) {
      const std::vector<int> branches = probe.branches();
      std::vector<std::optional<std::vector<SlotPair>>> found(branches.size());
      std::atomic<std::size_t> best{branches.size()};
      std::vector<std::atomic<bool>> cancel(branches.size());
      detail::parallel_for(branches.size(), bounds.jobs, [&](std::size_t i) {
        if (i > best.load()) return;
        detail::PairingSearch engine(w, disks, ctl);
        engine.run_branch(branches[i], [&](const std::vector<SlotPair>& pairs) {
          const PolygonalityCertificate c = certify(w, disks, pairs);
          if (!c.verdict.polygonal) return true;
          found[i] = pairs;
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          for (std::size_t j = i + 1; j < branches.size(); ++j) cancel[j].store(true);
          return false;
        }, &cancel[i]);
      });
      for (std::size_t i = 0; i < branches.size(); ++i) {
        if (found[i]) {
          out.status = SearchOutcome::Status::found;
          out.certificate = certify(w, disks, *found[i]);
          break;
        }
      }
    }
    out.progress.nodes = ctl.nodes.load();
    out.progress.leaves = ctl.leaves.load();
    if (out.found()) return out;
    if (ctl.timed_out.load()) {
      out.status = SearchOutcome::Status::timed_out;
      return out;
    }
    ++out.progress.multisets_done;
  }
  out.progress.current.clear();
  return out;
}

// Canonical form of a pairing under reordering of equal disks and rotating
// disk base points by multiples of |w|.
inline std::vector<SlotPair> canonical_pairing(const CyclicWord& w, const std::vector<DiskSpec>& disks,
                                               const std::vector<SlotPair>& pairs) {
  const int n = static_cast<int>(w.size());
  const std::size_t m = disks.size();
  std::vector<int> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = static_cast<int>(i);
  std::vector<SlotPair> best = normalize_pairing(pairs);
  std::vector<int> shift(m, 0);
  do {
    bool valid = true;
    for (std::size_t i = 0; i < m && valid; ++i) valid = disks[static_cast<std::size_t>(perm[i])] == disks[i];
    if (!valid) continue;
    // perm[i] is the new index of old disk i; enumerate all shift vectors.
    std::fill(shift.begin(), shift.end(), 0);
    for (;;) {
      std::vector<SlotPair> img;
      img.reserve(pairs.size());
      const auto map = [&](Slot s) {
        const int len = std::abs(disks[static_cast<std::size_t>(s.disk)].power) * n;
        return Slot{perm[static_cast<std::size_t>(s.disk)], (s.pos + shift[static_cast<std::size_t>(s.disk)] * n) % len};
      };
      for (const auto& [a, b] : pairs) img.push_back({map(a), map(b)});
      img = normalize_pairing(std::move(img));
      if (img < best) best = std::move(img);
      std::size_t k = 0;
      while (k < m) {
        if (++shift[k] < std::abs(disks[k].power)) break;
        shift[k++] = 0;
      }
      if (k == m) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct Census {
  std::vector<PolygonalityCertificate> certificates;
  SearchOutcome::Status status = SearchOutcome::Status::exhausted;
  SearchProgress progress;
  bool truncated = false;  // stopped at max_results
};

// Every certified closed surface within bounds, one per canonical class,
// sorted by (disks, pairing). Proper powers give the declarative certificate
// alone; words on a single generator give an empty census.
inline Census enumerate_all(const CyclicWord& w, const SearchBounds& bounds, std::size_t max_results = 100000) {
  validate(bounds, w);
  Census census;
  if (is_proper_power(w)) {
    census.certificates.push_back(declarative_certificate(w));
    return census;
  }
  if (detail::degenerate(w)) return census;

  detail::SearchControl ctl;
  detail::start_clock(ctl, bounds);
  const auto multisets = disk_multisets(w, bounds);
  census.progress.multisets_total = multisets.size();
  std::mutex mu;
  std::atomic<bool> full{false};
  for (const auto& disks : multisets) {
    census.progress.current = disks;
    detail::PairingSearch probe(w, disks, ctl);
    std::set<std::vector<SlotPair>> seen;
    if (probe.parity_ok()) {
      const std::vector<int> branches = probe.branches();
      detail::parallel_for(branches.size(), bounds.jobs, [&](std::size_t i) {
        detail::PairingSearch engine(w, disks, ctl);
        engine.run_branch(branches[i], [&](const std::vector<SlotPair>& pairs) {
          if (!certify(w, disks, pairs).verdict.polygonal) return true;
          std::vector<SlotPair> key = canonical_pairing(w, disks, pairs);
          const std::lock_guard<std::mutex> lock(mu);
          if (seen.size() >= max_results) {
            full.store(true);
            return false;
          }
          seen.insert(std::move(key));
          return true;
        }, &full);
      });
    }
    for (const auto& pairs : seen) {
      if (census.certificates.size() >= max_results) {
        full.store(true);
        break;
      }
      census.certificates.push_back(certify(w, disks, pairs));
    }
    census.progress.nodes = ctl.nodes.load();
    census.progress.leaves = ctl.leaves.load();
    if (full.load()) {
      census.truncated = true;
      return census;
    }
    if (ctl.timed_out.load()) {
      census.status = SearchOutcome::Status::timed_out;
      return census;
    }
    ++census.progress.multisets_done;
  }
  census.progress.current.clear();
  return census;
}

}  // namespace polyw
