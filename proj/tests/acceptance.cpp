// Acceptance runner: one PASS/FAIL line per criterion with its time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "esp/localglobal.hpp"
#include "esp/sweep.hpp"
#include "esp/text.hpp"
#include "oracle.hpp"

using namespace esp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int no, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = o.pass && s < limit_s;
  if (!ok) ++failures;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s / %.0f s", s, limit_s);
  std::cout << (ok ? "PASS" : "FAIL") << "  " << no << ". " << title << ": " << o.detail << " [" << buf << "]"
            << std::endl;
}

std::string entry_of(const std::string& record_name) { return record_name.substr(0, record_name.find(' ')); }

Outcome sweep_outcome(const std::vector<SweepRecord>& recs) {
  std::size_t bad = 0, bindings = 0;
  std::string first;
  for (const auto& r : recs) {
    bindings += r.trials;
    if (!r.pass) {
      if (!bad) first = r.name + " " + r.bindings + r.error;
      ++bad;
    }
  }
  std::ostringstream os;
  os << recs.size() << " instances, " << bindings << " bindings, " << bad << " failed";
  if (bad) os << " (first: " << first << ")";
  return {bad == 0 && !recs.empty(), os.str()};
}

std::vector<SweepRecord> sweep(const std::string& ring, std::vector<std::string> families, std::size_t n_min,
                               std::size_t n_max, std::size_t trials = 1,
                               const BracketTables& tables = corrected_tables()) {
  Ring r = ring_make(ring);
  SweepOptions opt;
  opt.n_min = n_min;
  opt.n_max = n_max;
  opt.trials = trials;
  opt.seed = 2024;
  opt.families = std::move(families);
  return run_sweep(r, sweep_items(r, opt, tables), opt);
}

int code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return -1;
}

}  // namespace

int main() {
  criterion(1, "shape product table, symbolic over Q[x,y]", 1, [] {
    auto recs = sweep("poly:q:x,y", {"shape-product"}, 2, 2);
    Outcome o = sweep_outcome(recs);
    o.pass = o.pass && recs.size() == 16;
    return o;
  });

  criterion(2, "ABCD bracket table n=2..4, symbolic, with the explicit n=2 matrices", 60, [] {
    auto recs = sweep("poly:q:x,y", {"bracket"}, 2, 4);
    Outcome o = sweep_outcome(recs);
    std::size_t specials = 0;
    for (const auto& r : recs)
      for (const char* p : {"bracket-AD-eq", "bracket-BC-eq", "bracket-CB-eq", "bracket-DA-eq"})
        if (r.n == 2 && entry_of(r.name) == p) ++specials;
    std::set<std::string> failing, errata;
    for (const auto& r : sweep("poly:q:x,y", {"bracket", "unit-bracket"}, 2, 4, 1, printed_tables()))
      if (!r.pass) failing.insert(entry_of(r.name));
    for (const auto& e : corrected_tables().errata) errata.insert(e.entry);
    o.detail += "; " + std::to_string(specials) + " explicit n=2 matrices; printed tables fail on " +
                std::to_string(failing.size()) + " entries, all listed as errata";
    o.pass = o.pass && specials == 4 && failing == errata;
    return o;
  });

  criterion(3, "conjugation and splitting identities n=2,3, symbolic", 60,
            [] { return sweep_outcome(sweep("poly:q:x,y", {"conjugation"}, 2, 3)); });

  criterion(4, "unit bracket table and composites n=2,3: symbolic, Z/15 and Z/105 x 1000 bindings", 120, [] {
    Outcome sym = sweep_outcome(sweep("poly:q:x,y", {"unit-bracket", "composite"}, 2, 3));
    Outcome z15 = sweep_outcome(sweep("zmod:15", {"unit-bracket", "composite"}, 2, 3, 1000));
    Outcome z105 = sweep_outcome(sweep("zmod:105", {"unit-bracket", "composite"}, 2, 3, 1000));
    return Outcome{sym.pass && z15.pass && z105.pass,
                   "symbolic " + sym.detail + "; Z/15 " + z15.detail + "; Z/105 " + z105.detail};
  });

  criterion(5, "decompose_full round trip, 200 words per ring and n", 120, [] {
    std::mt19937_64 rng(5);
    std::size_t ok = 0, total = 0;
    for (const char* d : {"zmod:15", "zmod:105", "poly:q:t"})
      for (std::size_t n = 2; n <= 3; ++n) {
        Ring r = ring_make(d);
        for (int t = 0; t < 200; ++t) {
          Word w = oracle::random_word(r, n, rng, 8);
          Word out = decompose_full(w).output;
          ++total;
          if (is_abcd_only(out) && oracle::equal(oracle::eval(out), oracle::eval(w))) ++ok;
        }
      }
    return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) + " words"};
  });

  criterion(6, "corner absorption of E21(c), E12(c) over Z/15, 50 random c", 10, [] {
    Ring r = ring_make("zmod:15");
    std::mt19937_64 rng(6);
    std::size_t ok = 0, total = 0;
    for (int t = 0; t < 50; ++t) {
      Elem c = r->from_int(static_cast<std::int64_t>(rng() % 15));
      for (Atom a : {Atom::e21(c), Atom::e12(c)}) {
        Word w(r, 2, {a});
        Word out = decompose_full(w).output;
        ++total;
        if (is_abcd_only(out) && oracle::equal(oracle::eval(out), oracle::eval(w))) ++ok;
      }
    }
    return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) + " words"};
  });

  criterion(7, "conjugation decomposition over Q[t]_t, n=3, all pairs, (k,m) in {(1,2),(1,3),(2,4)}", 120, [] {
    Ring L = ring_make("loc:poly:q:t:s=t");
    const Ring& B = L->base();
    Elem a = parse_elem(B, "1+t"), x = parse_elem(B, "2-3*t");
    std::size_t verified = 0, total = 0, max_len = 0, monotone_bad = 0;
    std::map<std::string, std::map<int, int>> mins;  // case -> k -> min exponent at the largest m seen
    for (auto [k, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 4}})
      for (Shape X : kShapes)
        for (Shape Y : kShapes)
          for (std::size_t i = 2; i <= 3; ++i)
            for (std::size_t j = 2; j <= 3; ++j) {
              auto d = conj_terms(L, 3, X, i, a, k, Y, j, m, x);
              Elem g = frac(L, a, k), h = L->embed(x * B->pow(L->s(), m));
              Matrix eg = oracle::E(L, 3, X, i, g);
              Matrix target = oracle::mul(oracle::mul(eg, oracle::E(L, 3, Y, j, h)), oracle::E(L, 3, X, i, -g));
              ++total;
              if (is_abcd_only(d.word) && oracle::equal(oracle::eval(d.word), target)) ++verified;
              max_len = std::max(max_len, d.word.size());
              std::string key = std::string(1, shape_char(X)) + std::to_string(i) + shape_char(Y) + std::to_string(j);
              auto& per_k = mins[key];
              int e = d.trace.min_exponent();
              if (per_k.count(k) && e < per_k[k]) ++monotone_bad;
              per_k[k] = e;
            }
    std::ostringstream os;
    os << verified << "/" << total << " verified, max length " << max_len << ", " << monotone_bad
       << " decreases of the min exponent in m";
    return Outcome{verified == total && max_len <= 45 && monotone_bad == 0, os.str()};
  });

  criterion(8, "dilation of E(A_2)(X/t) over Q[t]_t", 30, [] {
    Ring Lx = ring_make("upoly:loc:poly:q:t:s=t:X");
    const Ring& L = Lx->base();
    Elem inv = Lx->embed(frac(L, L->base()->one(), 1));
    Word w(Lx, 2, {Atom::abcd(Shape::A, 2, uni_var(Lx) * inv)});
    Dilation d = dilate(w);
    Elem sm = Lx->embed(L->embed(L->base()->pow(L->s(), static_cast<std::uint64_t>(d.m))));
    Matrix expect = eval(w).map(Lx, [&](const Elem& p) { return eval_hom(p, uni_var(Lx) * sm, [](const Elem& c) { return c; }); });
    Word embedded = map_word(d.word, Lx, [&](const Elem& p) {
      return eval_hom(p, uni_var(Lx), [&](const Elem& c) { return Lx->embed(L->embed(c)); });
    });
    bool ok = is_abcd_only(d.word) && oracle::equal(oracle::eval(embedded), expect);
    return Outcome{ok, "m=" + std::to_string(d.m) + ", " + std::to_string(d.word.size()) + " atoms over " +
                           d.word.ring->descriptor()};
  });

  criterion(9, "patch over a Z/15 cover (10 homotopies) and normality (20 gamma)", 120, [] {
    Ring r = ring_make("zmod:15");
    Ring RX = RingImpl::uni_poly(r, "X");
    CoverData cover = unit_cover(r);
    std::mt19937_64 rng(9);
    std::size_t patched = 0, normal = 0;
    for (int t = 0; t < 10; ++t) {
      std::size_t n = 2 + t % 2;
      Word g = oracle::random_abcd_word(r, n, rng, 3);
      Word h = map_word(oracle::random_abcd_word(r, n, rng, 3), RX,
                        [&](const Elem& p) { return RX->embed(p) * uni_var(RX); });
      Matrix alpha = eval(concat(concat(lift_word(g, RX), h), inverse(lift_word(g, RX))));
      PatchResult p = patch(alpha, cover, conjugate_locals(cover, g, h));
      if (is_abcd_only(p.word) && oracle::equal(oracle::eval(p.word), alpha)) ++patched;
    }
    for (int t = 0; t < 20; ++t) {
      Matrix gamma = oracle::eval(oracle::random_word(r, 2, rng, 4));
      Word h = oracle::random_abcd_word(r, 2, rng, 2);
      NormalityResult res = normality_demo(gamma, h, cover);
      Matrix target = oracle::mul(oracle::mul(gamma, oracle::eval(h)), symplectic_inverse(gamma));
      if (is_abcd_only(res.word) && oracle::equal(oracle::eval(res.word), target)) ++normal;
    }
    return Outcome{patched == 10 && normal == 20, "cover " + cover_text(cover).substr(0, cover_text(cover).find('\n')) +
                                                      " ...; " + std::to_string(patched) + "/10 patched, " +
                                                      std::to_string(normal) + "/20 normality words"};
  });

  criterion(10, "negative controls", 60, [] {
    std::size_t rejected = 0;
    for (const char* d : {"zmod:4", "zmod:30", "zmod:2"})
      if (code_of([&] { ring_make(d); }) == static_cast<int>(ErrorCode::EvenModulus)) ++rejected;
    std::size_t caught = 0;
    std::string sample;
    const std::vector<std::string> entries = {"bracket-AB-eq", "bracket-AC-lt", "bracket-DA-eq", "unit-bracket-AUB-same"};
    for (const auto& entry : entries) {
      auto bad = corrupt_entry(corrected_tables(), entry);
      for (const auto& rec : sweep("zmod:15", {"bracket", "unit-bracket"}, 2, 3, 3, bad))
        if (!rec.pass && entry_of(rec.name) == entry && !rec.bindings.empty()) {
          ++caught;
          if (sample.empty()) sample = rec.name + " " + rec.bindings;
          break;
        }
    }
    return Outcome{rejected == 3 && caught == entries.size(),
                   std::to_string(rejected) + "/3 even moduli rejected, " + std::to_string(caught) + "/" +
                       std::to_string(entries.size()) + " corrupted entries caught (e.g. " + sample + ")"};
  });

  std::cout << (failures ? "acceptance: FAIL" : "acceptance: PASS") << std::endl;
  return failures ? 1 : 0;
}
