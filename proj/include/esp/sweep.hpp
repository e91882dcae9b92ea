#pragma once

// Table sweeps: every identity family instantiated over a ring, symbolically
// when the ring is a polynomial ring and with seeded random bindings
// otherwise, checked on worker threads.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "esp/identities.hpp"

namespace esp {

inline const std::vector<std::string> kFamilies = {"shape-product", "bracket", "unit-bracket", "conjugation",
                                                       "composite"};

struct SweepOptions {
  std::size_t n_min = 2;
  std::size_t n_max = 3;
  std::uint64_t seed = 1;
  std::size_t trials = 3;       // random bindings per item; symbolic items run once
  std::size_t threads = 0;      // 0: hardware concurrency
  std::vector<std::string> families;  // empty: all of kFamilies
};

/// One identity instance up to its bindings.
struct SweepItem {
  std::string family;
  std::string name;  // instance name plus positions
  std::size_t n = 0;
  std::function<IdentityInstance(std::mt19937_64&)> make;
};

struct SweepRecord {
  std::string name;
  std::string ring;
  std::size_t n = 0;
  std::string digest;  // of the last bindings tried, or of the failing ones
  bool pass = false;
  std::size_t trials = 0;
  double ms = 0;
  std::string bindings;  // counterexample on failure
  std::string error;
};

/// The ring the bindings live in: polynomial rings are replaced by a
/// polynomial ring over the same coefficients in all the symbols needed.
Ring sweep_ring(const Ring& ring);
bool sweep_is_symbolic(const Ring& ring);

std::vector<SweepItem> sweep_items(const Ring& ring, const SweepOptions& opt,
                                   const BracketTables& tables = corrected_tables());
/// Records in item order; deterministic for a fixed seed.
std::vector<SweepRecord> run_sweep(const Ring& ring, const std::vector<SweepItem>& items, const SweepOptions& opt);

/// A copy of `t` with the coefficient of one entry negated. `entry` uses the
/// instance names: "bracket-AB-eq", "unit-bracket-AUB-same", ...
BracketTables corrupt_entry(const BracketTables& t, const std::string& entry);

std::string bindings_digest(const Bindings& b);
/// A random element of the ring: residues, small fractions, small integers.
Elem random_elem(const Ring& ring, std::mt19937_64& rng);

}  // namespace esp
