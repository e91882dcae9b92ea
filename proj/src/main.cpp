#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "esp/localglobal.hpp"
#include "esp/sweep.hpp"
#include "esp/text.hpp"
#include "json.hpp"

using namespace esp;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string ring = "zmod:15";
  std::size_t n = 2;
  std::uint64_t seed = 1;
  std::size_t fuel = 10000;
  std::string out;
  std::string trace;
};

// Line-oriented text on stdout plus one JSON object per line in --out.
class Report {
 public:
  Report(std::string command, const Globals& g) : command_(std::move(command)), g_(g) {}

  void set_ring(std::string ring) { ring_ = std::move(ring); }
  void add(json rec) {
    if (rec.value("status", "PASS") == "FAIL") failed_ = true;
    rec["command"] = command_;
    records_.push_back(std::move(rec));
  }

  int finish() {
    std::cout << command_ << ": " << (failed_ ? "FAIL" : "PASS") << "\n";
    if (!g_.out.empty()) {
      std::ofstream f(g_.out);
      if (!f) throw Error(ErrorCode::ParseError, "cannot write " + g_.out);
      for (const auto& r : records_) f << r.dump() << "\n";
      json summary{{"command", command_},
                   {"ring", ring_.empty() ? g_.ring : ring_},
                   {"n", g_.n},
                   {"seed", g_.seed},
                   {"records", records_.size()},
                   {"status", failed_ ? "FAIL" : "PASS"}};
      f << summary.dump() << "\n";
    }
    return failed_ ? kFail : kOk;
  }

 private:
  std::string command_;
  const Globals& g_;
  std::string ring_;
  std::vector<json> records_;
  bool failed_ = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
  f << text;
}

Shape parse_shape(const std::string& s) {
  if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'D') return kShapes[s[0] - 'A'];
  throw Error(ErrorCode::ParseError, "shape must be one of A, B, C, D, got '" + s + "'");
}

// A word file, or a sympmat matrix file, over `ring`.
Matrix read_matrix_or_word(const Ring& ring, std::size_t n, const std::string& path) {
  std::string text = read_file(path);
  if (trim(text).rfind("sympmat", 0) == 0) {
    Ring r;
    Matrix m = parse_sympmat(trim(text), &r);
    if (!same_ring(r, ring)) throw Error(ErrorCode::RingMismatch, path + " is over " + r->descriptor());
    return m;
  }
  return eval(parse_word(ring, n, text));
}

void emit_word(const Word& w, const std::string& path) {
  if (path.empty()) std::cout << word_text(w);
  else write_file(path, word_text(w));
}

int cmd_verify_tables(const Globals& g, std::size_t n_min, std::size_t n_max, std::size_t trials,
                      std::size_t threads, const std::vector<std::string>& families, const std::string& corrupt,
                      bool printed) {
  Ring ring = ring_make(g.ring);
  Report rep("verify-tables", g);
  SweepOptions opt;
  opt.n_min = n_min;
  opt.n_max = n_max;
  opt.seed = g.seed;
  opt.trials = trials;
  opt.threads = threads;
  opt.families = families;
  BracketTables tables = printed ? printed_tables() : corrected_tables();
  if (!corrupt.empty()) tables = corrupt_entry(tables, corrupt);
  auto records = run_sweep(ring, sweep_items(ring, opt, tables), opt);
  rep.set_ring(sweep_ring(ring)->descriptor());
  std::size_t fails = 0;
  for (const auto& r : records) {
    std::cout << r.name << " ring=" << r.ring << " n=" << r.n << " bindings=" << r.digest << " "
              << (r.pass ? "PASS" : "FAIL");
    if (!r.pass) {
      ++fails;
      if (!r.bindings.empty()) std::cout << " counterexample: " << r.bindings;
      if (!r.error.empty()) std::cout << " error: " << r.error;
    }
    std::cout << "\n";
    json rec{{"name", r.name}, {"ring", r.ring}, {"n", r.n},           {"bindings_digest", r.digest},
             {"trials", r.trials}, {"ms", r.ms},   {"status", r.pass ? "PASS" : "FAIL"}};
    if (!r.pass) rec["counterexample"] = r.bindings.empty() ? r.error : r.bindings;
    rep.add(std::move(rec));
  }
  std::cout << records.size() << " instances, " << fails << " failed\n";
  return rep.finish();
}

int cmd_decompose(const Globals& g, const std::string& in, const std::string& output, const std::string& units) {
  Ring ring = ring_make(g.ring);
  Word w = parse_word(ring, g.n, read_file(in));
  RewriteOptions opt;
  opt.fuel = g.fuel;
  if (units == "push") opt.units = UnitStrategy::Push;
  else if (units != "in-place") throw Error(ErrorCode::ParseError, "--units must be in-place or push");
  Report rep("decompose", g);
  auto t0 = std::chrono::steady_clock::now();
  DecompositionCertificate cert = decompose_full(w, opt);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit_word(cert.output, output);
  if (!g.trace.empty()) write_file(g.trace, trace_text(cert.trace));
  bool ok = cert.verified && is_abcd_only(cert.output);
  std::cout << "input atoms " << w.atoms.size() << ", output atoms " << cert.output.atoms.size() << ", verified "
            << (ok ? "yes" : "no") << "\n";
  rep.add({{"name", in},
           {"input_atoms", w.atoms.size()},
           {"output_atoms", cert.output.atoms.size()},
           {"ms", ms},
           {"status", ok ? "PASS" : "FAIL"}});
  return rep.finish();
}

std::string term_text(const ValTerm& t) {
  return std::string(1, shape_char(t.shape)) + " " + std::to_string(t.pos) + " s^" + std::to_string(t.exp) + " (" +
         t.coeff.str() + ")";
}

int cmd_conj(const Globals& g, const std::string& X, std::size_t i, const std::string& a, int k, const std::string& Y,
             std::size_t j, int m, const std::string& x, const std::string& output) {
  Ring loc = ring_make(g.ring);
  if (loc->kind() != RingKind::Localization)
    throw Error(ErrorCode::RingMismatch, "conj needs a localization ring such as loc:poly:q:t:s=t");
  Report rep("conj", g);
  const Ring& base = loc->base();
  ConjDecomposition d =
      conj_decompose(loc, g.n, parse_shape(X), i, parse_elem(base, a), k, parse_shape(Y), j, m, parse_elem(base, x));
  std::cout << "case " << d.case_no << ", " << d.trace.terms.size() << " terms, min exponent "
            << d.trace.min_exponent() << (d.trace.integral() ? " (integral)" : " (not integral)") << "\n";
  for (const auto& t : d.trace.terms) std::cout << "  " << term_text(t) << "\n";
  if (!output.empty()) write_file(output, word_text(d.word));
  rep.add({{"name", X + std::to_string(i) + "-" + Y + std::to_string(j)},
           {"k", k},
           {"m", m},
           {"case", d.case_no},
           {"length", d.trace.terms.size()},
           {"min_exponent", d.trace.min_exponent()},
           {"status", "PASS"}});
  return rep.finish();
}

DilateOptions dilate_options(const Globals& g, int max_m) {
  DilateOptions opt;
  opt.max_m = max_m;
  opt.fuel = std::max<std::size_t>(g.fuel, 1) * 20;
  return opt;
}

int cmd_dilate(const Globals& g, const std::string& s, const std::string& var, const std::string& in,
               const std::string& output, int max_m) {
  Ring R = ring_make(g.ring);
  Ring rs = RingImpl::localize(R, parse_elem(R, s));
  Ring L = RingImpl::uni_poly(rs, var);
  Word alpha = parse_word(L, g.n, read_file(in));
  Report rep("dilate", g);
  rep.set_ring(L->descriptor());
  Dilation d = dilate(alpha, dilate_options(g, max_m));
  for (const auto& a : d.attempts) std::cout << "  rejected " << a << "\n";
  std::cout << "m = " << d.m << ", " << d.word.atoms.size() << " atoms over " << d.word.ring->descriptor()
            << ", verified yes\n";
  emit_word(d.word, output);
  rep.add({{"name", in}, {"m", d.m}, {"atoms", d.word.atoms.size()}, {"status", "PASS"}});
  return rep.finish();
}

CoverData load_cover(const Ring& R, const std::string& path) {
  if (path.empty()) {
    if (R->kind() == RingKind::IntegersMod) return unit_cover(R);
    throw Error(ErrorCode::ParseError, "--cover is required over " + R->descriptor());
  }
  return parse_cover(R, read_file(path));
}

int cmd_patch(const Globals& g, const std::string& cover_path, const std::vector<std::string>& locals_paths,
              const std::string& alpha_path, const std::string& var, const std::string& output, int max_m) {
  Ring R = ring_make(g.ring);
  CoverData cover = load_cover(R, cover_path);
  check_cover(cover);
  if (locals_paths.size() != cover.elems.size())
    throw Error(ErrorCode::LocalWordMismatch, "cover has " + std::to_string(cover.elems.size()) + " elements but " +
                                                  std::to_string(locals_paths.size()) + " local words were given");
  Ring RX = RingImpl::uni_poly(R, var);
  std::vector<Word> locals;
  for (std::size_t i = 0; i < cover.elems.size(); ++i) {
    Ring Li = RingImpl::uni_poly(RingImpl::localize(R, cover.elems[i].s), var);
    locals.push_back(parse_word(Li, g.n, read_file(locals_paths[i])));
  }
  Matrix alpha = read_matrix_or_word(RX, g.n, alpha_path);
  Report rep("patch", g);
  rep.set_ring(RX->descriptor());
  PatchResult p = patch(alpha, cover, locals, dilate_options(g, max_m));
  std::cout << "patched " << p.word.atoms.size() << " atoms, dilation exponents";
  for (int m : p.m) std::cout << " " << m;
  std::cout << ", verified yes\n";
  emit_word(p.word, output);
  rep.add({{"name", alpha_path}, {"atoms", p.word.atoms.size()}, {"m", p.m}, {"status", "PASS"}});
  return rep.finish();
}

int cmd_normality(const Globals& g, const std::string& gamma_path, const std::string& h_path,
                  const std::string& cover_path, const std::string& output, int max_m) {
  Ring R = ring_make(g.ring);
  Matrix gamma = read_matrix_or_word(R, g.n, gamma_path);
  Word h = parse_word(R, g.n, read_file(h_path));
  CoverData cover = load_cover(R, cover_path);
  Report rep("normality-demo", g);
  NormalityResult res = normality_demo(gamma, h, cover, dilate_options(g, max_m));
  std::cout << "cover:\n" << cover_text(cover);
  std::cout << "conjugate word " << res.word.atoms.size() << " atoms, verified " << (res.verified ? "yes" : "no")
            << "\n";
  emit_word(res.word, output);
  rep.add({{"name", h_path}, {"atoms", res.word.atoms.size()}, {"status", res.verified ? "PASS" : "FAIL"}});
  return rep.finish();
}

int cmd_report(const std::string& in) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  std::istringstream is(read_file(in));
  std::string line;
  std::size_t ln = 0;
  bool failed = false;
  while (std::getline(is, line)) {
    ++ln;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ParseError, in + " line " + std::to_string(ln) + ": " + e.what());
    }
    if (rec.contains("records")) continue;
    auto& [pass, fail] = tally[rec.value("command", "?")];
    if (rec.value("status", "PASS") == "PASS") ++pass;
    else ++fail, failed = true;
  }
  for (const auto& [cmd, pf] : tally)
    std::cout << cmd << ": " << pf.first << " PASS, " << pf.second << " FAIL\n";
  std::cout << "report: " << (failed ? "FAIL" : "PASS") << "\n";
  return failed ? kFail : kOk;
}

int cmd_rules(std::size_t nmax, const std::string& output) {
  auto rules = discover_row12_rules(nmax);
  std::string text = row12_rules_text(rules);
  if (output.empty()) std::cout << text;
  else write_file(output, text);
  std::cerr << rules.size() << " rules\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elementary symplectic words in the ABCD generators"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--ring", g.ring, "Ring descriptor, e.g. zmod:15, q, poly:q:x,y, loc:poly:q:t:s=t");
  app.add_option("--n", g.n, "Half the matrix size")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for random bindings");
  app.add_option("--fuel", g.fuel, "Rule applications per rewrite stage");
  app.add_option("--out", g.out, "Structured report, one JSON object per line");
  app.add_option("--trace", g.trace, "Rewrite trace file");

  std::size_t n_min = 2, n_max = 3, trials = 3, threads = 0;
  std::vector<std::string> families;
  std::string corrupt;
  bool printed = false;
  auto* vt = app.add_subcommand("verify-tables", "Check every identity family over a ring");
  vt->add_option("--n-min", n_min, "Smallest n");
  vt->add_option("--n-max", n_max, "Largest n");
  vt->add_option("--trials", trials, "Random bindings per instance over non-polynomial rings");
  vt->add_option("--threads", threads, "Worker threads, 0 for all cores");
  vt->add_option("--family", families, "Restrict to families: shape-product bracket unit-bracket conjugation composite");
  vt->add_option("--corrupt", corrupt, "Negate the coefficient of one table entry, e.g. bracket-AB-eq");
  vt->add_flag("--printed", printed, "Use the tables as printed, without corrections");

  std::string in, output, units = "in-place";
  auto* dc = app.add_subcommand("decompose", "Rewrite a word into ABCD atoms");
  dc->add_option("--in", in, "Word file")->required();
  dc->add_option("--output", output, "Output word file (stdout if absent)");
  dc->add_option("--units", units, "in-place or push");

  std::string X = "A", Y = "D", a = "1", x = "1";
  std::size_t i = 2, j = 2;
  int k = 1, m = 2;
  auto* cj = app.add_subcommand("conj", "Denominator-clearing conjugation over a localization");
  cj->add_option("--X", X, "Shape of the conjugating atom");
  cj->add_option("--i", i, "Position of the conjugating atom");
  cj->add_option("--a", a, "Numerator a of a/s^k");
  cj->add_option("--k", k, "Denominator exponent");
  cj->add_option("--Y", Y, "Shape of the conjugated atom");
  cj->add_option("--j", j, "Position of the conjugated atom");
  cj->add_option("--m", m, "Exponent of s in s^m x");
  cj->add_option("--x", x, "Coefficient x");
  cj->add_option("--output", output, "Output word file");

  std::string s = "s", var = "X";
  int max_m = 16;
  auto* dl = app.add_subcommand("dilate", "Clear denominators of a homotopy word over R_s[X]");
  dl->add_option("--s", s, "Localized element of R")->required();
  dl->add_option("--var", var, "Homotopy variable");
  dl->add_option("--in", in, "Word file over R_s[X]")->required();
  dl->add_option("--output", output, "Output word file over R[X]");
  dl->add_option("--max-m", max_m, "Largest dilation exponent tried");

  std::string cover, alpha;
  std::vector<std::string> locals;
  auto* pt = app.add_subcommand("patch", "Patch local homotopy words over a comaximal cover");
  pt->add_option("--cover", cover, "Cover file (default over Z/m: a unit cover)");
  pt->add_option("--locals", locals, "One word file over R_{s_i}[X] per cover element")->required();
  pt->add_option("--alpha", alpha, "alpha(X) over R[X] as a sympmat or word file")->required();
  pt->add_option("--var", var, "Homotopy variable");
  pt->add_option("--output", output, "Output word file over R[X]");
  pt->add_option("--max-m", max_m, "Largest dilation exponent tried");

  std::string gamma, h;
  auto* nd = app.add_subcommand("normality-demo", "ABCD word for gamma h gamma^-1");
  nd->set_help_flag("--help", "Print this help message and exit");
  nd->add_option("--gamma", gamma, "gamma as a sympmat or word file")->required();
  nd->add_option("--h", h, "ABCD word file")->required();
  nd->add_option("--cover", cover, "Cover file (default over Z/m: a unit cover)");
  nd->add_option("--output", output, "Output word file");
  nd->add_option("--max-m", max_m, "Largest dilation exponent tried");

  auto* rp = app.add_subcommand("report", "Summarize a structured report file");
  rp->add_option("--in", in, "Report file")->required();

  std::size_t rules_n = 4;
  auto* rl = app.add_subcommand("rules", "Rediscover the row-1/row-2 reduction rules");
  rl->add_option("--n-max", rules_n, "Largest n covered");
  rl->add_option("--output", output, "Rules file (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*vt) return cmd_verify_tables(g, n_min, n_max, trials, threads, families, corrupt, printed);
    if (*dc) return cmd_decompose(g, in, output, units);
    if (*cj) return cmd_conj(g, X, i, a, k, Y, j, m, x, output);
    if (*dl) return cmd_dilate(g, s, var, in, output, max_m);
    if (*pt) return cmd_patch(g, cover, locals, alpha, var, output, max_m);
    if (*nd) return cmd_normality(g, gamma, h, cover, output, max_m);
    if (*rp) return cmd_report(in);
    if (*rl) return cmd_rules(rules_n, output);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::StepVerificationFailed ? kFail : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
