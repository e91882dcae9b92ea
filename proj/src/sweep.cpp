#include "esp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <thread>

#include "esp/text.hpp"

namespace esp {

namespace {

constexpr const char* kSymbols = "x,y,z,l,m,t,u,y3,y4,y5,y6,y7,y8";

int shape_idx(char c) {
  switch (c) {
    case 'A': return 0;
    case 'B': return 1;
    case 'C': return 2;
    case 'D': return 3;
  }
  return -1;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Symbols in the symbolic ring, random elements otherwise.
class Binder {
 public:
  Binder(Ring ring, std::mt19937_64& rng) : ring_(std::move(ring)), rng_(rng), sym_(sweep_is_symbolic(ring_)) {}
  Elem operator()(const char* name) { return sym_ ? parse_elem(ring_, name) : random_elem(ring_, rng_); }
  std::vector<Elem> ys(std::size_t n) {
    std::vector<Elem> out;
    for (std::size_t i = 3; i <= 2 * n; ++i) out.push_back((*this)(("y" + std::to_string(i)).c_str()));
    return out;
  }
  // E21(t) E12(u): determinant one with generic entries.
  Matrix delta() {
    Elem t = (*this)("t"), u = (*this)("u");
    return mat2(ring_, ring_->one(), u, t, ring_->one() + t * u);
  }
  // E12(u) E21(t), first column (1 + ut, t).
  Matrix eps() {
    Elem t = (*this)("t"), u = (*this)("u");
    return mat2(ring_, ring_->one() + u * t, u, t, ring_->one());
  }
  const Ring& ring() const { return ring_; }

 private:
  Ring ring_;
  std::mt19937_64& rng_;
  bool sym_;
};

std::string pos_suffix(std::size_t i) { return " i=" + std::to_string(i); }
std::string pos_suffix(std::size_t i, std::size_t j) { return pos_suffix(i) + " j=" + std::to_string(j); }

}  // namespace

bool sweep_is_symbolic(const Ring& ring) { return ring->kind() == RingKind::MultiPoly; }

Ring sweep_ring(const Ring& ring) {
  if (!sweep_is_symbolic(ring)) return ring;
  return ring_make("poly:" + ring->base()->descriptor() + ":" + kSymbols);
}

Elem random_elem(const Ring& ring, std::mt19937_64& rng) {
  switch (ring->kind()) {
    case RingKind::IntegersMod: return ring->from_int(static_cast<std::int64_t>(rng() % ring->modulus()));
    case RingKind::Rationals: {
      std::int64_t num = static_cast<std::int64_t>(rng() % 19) - 9;
      std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 5);
      return ring->from_rational(mpq_class(num, den));
    }
    default: return ring->from_int(static_cast<std::int64_t>(rng() % 11) - 5);
  }
}

std::string bindings_digest(const Bindings& b) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bindings_text(b)) h = (h ^ c) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<SweepItem> sweep_items(const Ring& ring0, const SweepOptions& opt, const BracketTables& tables) {
  Ring ring = sweep_ring(ring0);
  auto want = [&](const std::string& f) {
    return opt.families.empty() || std::find(opt.families.begin(), opt.families.end(), f) != opt.families.end();
  };
  for (const auto& f : opt.families)
    if (std::find(kFamilies.begin(), kFamilies.end(), f) == kFamilies.end())
      throw Error(ErrorCode::ParseError, "unknown identity family '" + f + "'");
  if (opt.n_min < 2 || opt.n_max < opt.n_min) throw Error(ErrorCode::BadIndices, "need 2 <= n_min <= n_max");
  std::vector<SweepItem> items;
  auto add = [&](const char* family, std::string name, std::size_t n, auto make) {
    items.push_back({family, std::move(name), n, [ring, make](std::mt19937_64& rng) {
                       Binder b(ring, rng);
                       return make(b);
                     }});
  };
  const BracketTables* t = &tables;
  if (want("shape-product"))
    for (Shape p : kShapes)
      for (Shape q : kShapes)
        add("shape-product", std::string("shape-product-") + shape_char(p) + shape_char(q), 1,
            [p, q](Binder& b) { return id_shape_product(p, q, b("x"), b("y")); });
  for (std::size_t n = opt.n_min; n <= opt.n_max; ++n) {
    if (want("bracket"))
      for (Shape X : kShapes)
        for (Shape Y : kShapes)
          for (std::size_t i = 2; i <= n; ++i)
            for (std::size_t j = 2; j <= n; ++j) {
              const char* cs = i < j ? "lt" : (i == j ? "eq" : "gt");
              add("bracket", std::string("bracket-") + shape_char(X) + shape_char(Y) + "-" + cs + pos_suffix(i, j), n,
                  [=](Binder& b) { return id_commutator_abcd(b.ring(), n, X, i, b("x"), Y, j, b("y"), *t); });
            }
    if (want("unit-bracket"))
      for (Shape X : kShapes)
        for (Shape Y : {Shape::B, Shape::C})
          for (std::size_t i = 2; i <= n; ++i)
            for (std::size_t j = 1; j <= n; ++j) {
              const char* cs = j == 1 ? "first" : (j == i ? "same" : "other");
              add("unit-bracket",
                  std::string("unit-bracket-") + shape_char(X) + "U" + shape_char(Y) + "-" + cs + pos_suffix(i, j), n,
                  [=](Binder& b) { return id_commutator_with_unit(b.ring(), n, X, i, b("x"), Y, j, b("y"), *t); });
            }
    if (want("conjugation")) {
      add("conjugation", "corner-conjugation", n,
          [n](Binder& b) { return id_conjugate_corner(b.ring(), n, b("l"), b("x"), b("y")); });
      add("conjugation", "conjugate-row1", n, [n](Binder& b) {
        Matrix d = b.delta();
        return id_conj_S_row(b.ring(), n, d, b.ys(n));
      });
      add("conjugation", "conjugate-row2", n, [n](Binder& b) {
        Matrix d = b.delta();
        return id_conj_S_row2(b.ring(), n, d, b.ys(n));
      });
      add("conjugation", "ch-conjugate", n, [](Binder& b) {
        Matrix e = b.eps();
        return id_ch_conjugate(b.ring(), e, b("x"), b("y"));
      });
      for (std::size_t k = 2; k <= n; ++k) {
        add("conjugation", "elementary-criterion" + pos_suffix(k), n, [n, k](Binder& b) {
          Matrix e = b.eps();
          return id_elementary_criterion(b.ring(), n, k, e(0, 0), e(1, 0), b("x"), b("y"), e);
        });
        add("conjugation", "ch-split" + pos_suffix(k), n,
            [n, k](Binder& b) { return id_ch_split(b.ring(), n, k, b("l"), b("m"), b("x"), b("y")); });
        add("conjugation", "ac-split" + pos_suffix(k), n,
            [n, k](Binder& b) { return id_ac_split(b.ring(), n, k, b("l"), b("m"), b("x")); });
        add("conjugation", "bd-split" + pos_suffix(k), n,
            [n, k](Binder& b) { return id_bd_split(b.ring(), n, k, b("l"), b("m"), b("x")); });
        add("conjugation", "conjugate-block" + pos_suffix(k), n, [n, k](Binder& b) {
          Matrix d = b.delta();
          return id_conj_block(b.ring(), n, k, d, b("l"), b("m"), b("x"), b("y"));
        });
        for (Shape s : kShapes)
          add("conjugation", std::string("sl2-conjugate-") + shape_char(s) + pos_suffix(k), n, [n, k, s](Binder& b) {
            Matrix d = b.delta();
            return id_sl2_conj(b.ring(), n, d, s, k, b("x"));
          });
      }
    }
    if (want("composite"))
      for (std::size_t i = 2; i <= n; ++i) {
        add("composite", "composite-AD" + pos_suffix(i), n,
            [n, i](Binder& b) { return id_composite_AD(b.ring(), n, i, b("x"), b("y"), b("z")); });
        add("composite", "composite-BC" + pos_suffix(i), n,
            [n, i](Binder& b) { return id_composite_BC(b.ring(), n, i, b("x"), b("y"), b("z")); });
      }
  }
  return items;
}

std::vector<SweepRecord> run_sweep(const Ring& ring0, const std::vector<SweepItem>& items, const SweepOptions& opt) {
  const Ring ring = sweep_ring(ring0);
  const std::size_t trials = sweep_is_symbolic(ring0) ? 1 : std::max<std::size_t>(1, opt.trials);
  std::vector<SweepRecord> out(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < items.size();) {
      const SweepItem& it = items[k];
      SweepRecord& r = out[k];
      r.name = it.name;
      r.ring = ring->descriptor();
      r.n = it.n;
      r.pass = true;
      std::mt19937_64 rng(mix(opt.seed ^ mix(k)));
      auto t0 = std::chrono::steady_clock::now();
      for (std::size_t trial = 0; trial < trials && r.pass; ++trial) {
        try {
          IdentityInstance inst = it.make(rng);
          r.digest = bindings_digest(inst.bindings);
          r.trials = trial + 1;
          if (!inst.holds()) {
            r.pass = false;
            r.bindings = bindings_text(inst.bindings);
          }
        } catch (const std::exception& e) {
          r.pass = false;
          r.error = e.what();
        }
      }
      r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::size_t nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min(nt, std::max<std::size_t>(1, items.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

BracketTables corrupt_entry(const BracketTables& t0, const std::string& entry) {
  BracketTables t = t0;
  auto bad = [&] { return Error(ErrorCode::ParseError, "unknown table entry '" + entry + "'"); };
  auto dash = entry.rfind('-');
  if (dash == std::string::npos) throw bad();
  std::string head = entry.substr(0, dash), cs = entry.substr(dash + 1);
  if (head.rfind("unit-bracket-", 0) == 0 && head.size() == 16 && head[14] == 'U') {
    int x = shape_idx(head[13]), y = head[15] == 'B' ? 0 : (head[15] == 'C' ? 1 : -1);
    int c = cs == "first" ? 0 : (cs == "same" ? 1 : (cs == "other" ? 2 : -1));
    if (x < 0 || y < 0 || c < 0) throw bad();
    UnitRule& r = t.unit[x][y][c];
    if (r.identity) throw Error(ErrorCode::Unsupported, entry + " is the identity; nothing to negate");
    r.unit_coef = -r.unit_coef;
    return t;
  }
  if (head.rfind("bracket-", 0) == 0 && head.size() == 10) {
    int x = shape_idx(head[8]), y = shape_idx(head[9]);
    int c = cs == "lt" ? 0 : (cs == "eq" ? 1 : (cs == "gt" ? 2 : -1));
    if (x < 0 || y < 0 || c < 0) throw bad();
    BracketRule& r = t.bracket[x][y][c];
    if (r.kind == BracketRule::Kind::Identity)
      throw Error(ErrorCode::Unsupported, entry + " is the identity; nothing to negate");
    if (r.kind == BracketRule::Kind::Special) {
      for (auto& blk : t.special[x].blocks)
        if (!blk.empty()) {
          blk.front().coef = -blk.front().coef;
          break;
        }
    } else {
      r.coef = -r.coef;
    }
    return t;
  }
  throw bad();
}

}  // namespace esp
